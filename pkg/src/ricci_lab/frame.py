"""Orthonormal-frame curvature of the two radial metric ansaetze.

WARPED            g = dt^2 + b(t)^2 g_fiber,   Ric_fiber = (n-2) kappa0 g_fiber
CONFORMAL_RADIAL  g = dt^2 / F(t)^2 + t^2 g_S2  (n = 3)

The frame is e1 = unit radial vector, e2..en tangential.  Ricci is
diagonal in this frame; the unit round sphere has Ric = (n-1) g.
"""

import enum
from dataclasses import dataclass

from .errors import DimensionError, DomainError, NonpositiveLapse, SingularWarp
from .fields import RadialScalarField
from .jets import Jet, reparametrize_by_arclength

B_MIN_GUARD = 1e-8
MAX_DIM = 6


class Ansatz(str, enum.Enum):
    WARPED = "warped"
    CONFORMAL_RADIAL = "conformal_radial"


@dataclass(frozen=True)
class WarpedProductMetric:
    """Radial metric ansatz.

    For ``WARPED`` the profile ``b`` is the warping function.  For
    ``CONFORMAL_RADIAL`` it is the lapse ``F`` of ``dt^2/F^2 + t^2 g_S2``,
    so that ``t`` itself plays the role of the warping function.
    """

    n: int
    b: RadialScalarField
    kappa0: float = 1.0
    ansatz: Ansatz = Ansatz.WARPED
    b_min_guard: float = B_MIN_GUARD
    max_dim: int = MAX_DIM

    def __post_init__(self):
        object.__setattr__(self, "ansatz", Ansatz(self.ansatz))
        if not isinstance(self.n, int) or self.n < 3:
            raise DimensionError(f"dimension must be an integer >= 3, got {self.n!r}")
        if self.n > self.max_dim:
            raise DimensionError(f"dimension {self.n} exceeds the cap {self.max_dim}")
        if self.ansatz is Ansatz.CONFORMAL_RADIAL:
            if self.n != 3:
                raise DimensionError("the conformal-radial ansatz is 3-dimensional")
            if self.kappa0 != 1.0:
                raise ValueError("the conformal-radial ansatz has a unit round S^2 fiber")

    @property
    def lo(self):
        return self.b.lo

    @property
    def hi(self):
        return self.b.hi


@dataclass(frozen=True)
class FramePointCurvature:
    t: float
    n: int
    R_rad: float
    R_tan: float
    s: float
    sec_rad: float
    sec_tan: float

    @property
    def alpha(self):
        return self.R_rad


def _check_domain(field, t):
    if not field.contains(t):
        raise DomainError(f"t={t} outside [{field.lo}, {field.hi}]")


def _from_sectional(t, n, sec_rad, sec_tan):
    sec_rad, sec_tan = float(sec_rad), float(sec_tan)
    R_rad = (n - 1) * sec_rad
    R_tan = sec_rad + (n - 2) * sec_tan
    return FramePointCurvature(t, n, R_rad, R_tan, R_rad + (n - 1) * R_tan, sec_rad, sec_tan)


def ricci_warped(metric, t):
    if metric.ansatz is not Ansatz.WARPED:
        raise ValueError("ricci_warped needs the WARPED ansatz")
    _check_domain(metric.b, t)
    b, bp, bpp = metric.b.derivatives(t, 2)
    if not b > metric.b_min_guard:
        raise SingularWarp(f"b({t}) = {b} is below the guard {metric.b_min_guard}")
    sec_rad = -bpp / b
    sec_tan = (metric.kappa0 - bp * bp) / (b * b)
    return _from_sectional(float(t), metric.n, sec_rad, sec_tan)


def _lapse(f, t):
    if not t > 0:
        raise DomainError(f"conformal-radial chart needs t > 0, got {t}")
    _check_domain(f, t)
    F = f.derivatives(t, 0)[0]
    if not F > 0:
        raise NonpositiveLapse(f"lapse f({t}) = {F} is not positive")
    return f.derivatives(t, 2)


def ricci_conformal_radial(f, t):
    """Frame Ricci of ``dt^2/f^2 + t^2 g_S2`` (three dimensions)."""
    F, Fp, _ = _lapse(f, t)
    R11 = float(-2.0 * Fp * F / t)
    R22 = float(-(t * Fp * F + F * F - 1.0) / (t * t))
    return FramePointCurvature(
        float(t), 3, R11, R22, R11 + 2.0 * R22,
        sec_rad=float(-Fp * F / t), sec_tan=float((1.0 - F * F) / (t * t)),
    )


def frame_curvature(metric, t):
    if metric.ansatz is Ansatz.WARPED:
        return ricci_warped(metric, t)
    return ricci_conformal_radial(metric.b, t)


def hessian_laplacian_radial(metric, f, t):
    """Frame Hessian diagonals and Laplacian of a radial function ``f``.

    Returns ``(Ddf_rad, Ddf_tan, lap)``.
    """
    _check_domain(f, t)
    if metric.ansatz is Ansatz.WARPED:
        _check_domain(metric.b, t)
        b, bp = metric.b.derivatives(t, 1)
        if not b > metric.b_min_guard:
            raise SingularWarp(f"b({t}) = {b} is below the guard {metric.b_min_guard}")
        _, up, upp = f.derivatives(t, 2)
        rad = float(upp)
        tan = float(bp / b * up)
        return rad, tan, rad + (metric.n - 1) * tan
    F, Fp, _ = _lapse(metric.b, t)
    _, up, upp = f.derivatives(t, 2)
    rad = F * F * upp + F * Fp * up
    tan = F * F * up / t
    lap = F * F * upp + (2.0 * F * F / t + F * Fp) * up
    return float(rad), float(tan), float(lap)


# arc-length jets --------------------------------------------------------


@dataclass(frozen=True)
class RadialJets:
    """Jets along the unit-speed radial direction at one point.

    ``b`` is the warping function as a function of arc length; for the
    conformal-radial chart it is ``t(r)``.  ``fields`` holds the jets of
    any extra radial functions requested, in the same parametrisation.
    """

    t: float
    n: int
    kappa0: float
    b: Jet
    fields: tuple

    def curvature(self):
        """Jets of (sec_rad, sec_tan, R_rad, R_tan, s)."""
        b = self.b
        bp = b.deriv()
        bpp = bp.deriv()
        b = b.truncate(bpp.order)
        bp = bp.truncate(bpp.order)
        n = self.n
        sec_rad = -(bpp / b)
        sec_tan = (self.kappa0 - bp * bp) / (b * b)
        R_rad = sec_rad * (n - 1)
        R_tan = sec_rad + sec_tan * (n - 2)
        return sec_rad, sec_tan, R_rad, R_tan, R_rad + R_tan * (n - 1)

    def mean_curvature_factor(self):
        """Jet of b'/b (shape operator of the radial slices)."""
        bp = self.b.deriv()
        return bp / self.b.truncate(bp.order)


def radial_jets(metric, t, fields=(), order=4):
    """Arc-length jets of the warping function and of ``fields`` at ``t``."""
    t = float(t)
    if metric.ansatz is Ansatz.WARPED:
        _check_domain(metric.b, t)
        b = metric.b.jet(t, order)
        if not b.value > metric.b_min_guard:
            raise SingularWarp(f"b({t}) = {b.value} is below the guard {metric.b_min_guard}")
        jets = tuple(fld.jet(t, order) for fld in fields)
        return RadialJets(t, metric.n, metric.kappa0, b, jets)
    _lapse(metric.b, t)
    speed = metric.b.jet(t, order - 1)
    delta = reparametrize_by_arclength(speed, t)
    b = delta + t
    jets = []
    for fld in fields:
        _check_domain(fld, t)
        u = fld.jet(t, order)
        jets.append(u.compose(delta))
    return RadialJets(t, metric.n, metric.kappa0, b, tuple(jets))
