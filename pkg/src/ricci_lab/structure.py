"""Einstein-type structures f Ric = Ddf + h g on the radial ansaetze.

All pointwise quantities are built from arc-length jets (see
:func:`ricci_lab.frame.radial_jets`), so derivatives of s, h and |grad f|^2
needed by the differential identities are exact for closed-form input.
"""

import enum
import json
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import CriticalPoint, DomainError, WrongHMode, ZeroPotential
from .fields import RadialScalarField
from .frame import Ansatz, radial_jets

JET_ORDER = 4
CLOSED_FORM_TOL = 1e-9
SAMPLED_TOL = 1e-6
GRID_POINTS = 256
GRID_MARGIN = 0.01
ZERO_F = 1e-12
CRITICAL_GRAD = 1e-12


class Preset(str, enum.Enum):
    VACUUM_STATIC = "vacuum_static"
    V_STATIC = "v_static"
    CPE = "cpe"
    STATIC_PERFECT_FLUID = "static_perfect_fluid"
    CSF = "csf"


@dataclass(frozen=True)
class ConstantH:
    value: float

    def jet(self, s, f, n, point):
        return s * 0.0 + self.value


@dataclass(frozen=True)
class FunctionH:
    field: RadialScalarField

    def jet(self, s, f, n, point):
        return point.fields[1]


@dataclass(frozen=True)
class PresetH:
    """Named h, recomputed from the current (s, f) at every query."""

    preset: Preset
    kappa: float = 0.0
    rho: float = 0.0
    mu: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "preset", Preset(self.preset))

    def jet(self, s, f, n, point):
        p = self.preset
        if p is Preset.VACUUM_STATIC:
            return s * f / (n - 1)
        if p is Preset.V_STATIC:
            return s * f / (n - 1) + self.kappa / (n - 1)
        if p is Preset.CPE:
            return s * f / (n - 1) - s / (n * (n - 1))
        if p is Preset.STATIC_PERFECT_FLUID:
            return (s - self.rho - self.mu) * f / (n - 1)
        return s * f * self.c


def vacuum_static():
    return PresetH(Preset.VACUUM_STATIC)


def v_static(kappa):
    return PresetH(Preset.V_STATIC, kappa=kappa)


def cpe():
    return PresetH(Preset.CPE)


def static_perfect_fluid(rho, mu):
    return PresetH(Preset.STATIC_PERFECT_FLUID, rho=rho, mu=mu)


def csf(c):
    return PresetH(Preset.CSF, c=c)


@dataclass(frozen=True)
class EinsteinTypeStructure:
    metric: object
    f: RadialScalarField
    h: object = ConstantH(0.0)

    def __post_init__(self):
        if isinstance(self.h, (int, float)):
            object.__setattr__(self, "h", ConstantH(float(self.h)))
        lo, hi = self.domain()
        if not math.isfinite(hi):
            hi = lo + 10.0 * max(1.0, abs(lo))
        probe = np.linspace(lo, hi, 64)[1:-1]
        vals = [abs(self.f.value(t)) for t in probe]
        if max(vals) <= ZERO_F:
            raise ValueError("potential f vanishes identically on the domain")

    def domain(self):
        lo = max(self.f.lo, self.metric.b.lo)
        hi = min(self.f.hi, self.metric.b.hi)
        if isinstance(self.h, FunctionH):
            lo, hi = max(lo, self.h.field.lo), min(hi, self.h.field.hi)
        if self.metric.ansatz is Ansatz.CONFORMAL_RADIAL:
            lo = max(lo, 0.0)
        return lo, hi

    @property
    def n(self):
        return self.metric.n

    @property
    def h_constant(self):
        return isinstance(self.h, ConstantH)

    @property
    def closed_form(self):
        fields = [self.f, self.metric.b]
        if isinstance(self.h, FunctionH):
            fields.append(self.h.field)
        return all(fl.expr is not None for fl in fields)

    def with_h(self, h):
        return replace(self, h=h)

    def scaled(self, lam):
        """(f, h) -> (lam f, lam h); presets rescale through f."""
        h = self.h
        if isinstance(h, ConstantH):
            h = ConstantH(lam * h.value)
        elif isinstance(h, FunctionH):
            h = FunctionH(h.field * lam)
        elif h.preset in (Preset.V_STATIC, Preset.CPE):
            raise ValueError(f"preset {h.preset.value} is not homogeneous in f")
        return replace(self, f=self.f * lam, h=h)

    def point(self, t, order=JET_ORDER):
        return PointData.evaluate(self, t, order)


@dataclass(frozen=True)
class PointData:
    """Arc-length jets of every quantity entering the identities at t."""

    t: float
    n: int
    b: object
    f: object
    h: object
    sec_rad: object
    sec_tan: object
    R_rad: object
    R_tan: object
    s: object
    H: object  # b'/b

    @classmethod
    def evaluate(cls, ets, t, order=JET_ORDER):
        lo, hi = ets.domain()
        if not lo <= t <= hi:
            raise DomainError(f"t={t} outside the structure domain [{lo}, {hi}]")
        fields = [ets.f]
        if isinstance(ets.h, FunctionH):
            fields.append(ets.h.field)
        pt = radial_jets(ets.metric, t, fields, order)
        sec_rad, sec_tan, R_rad, R_tan, s = pt.curvature()
        f = pt.fields[0]
        h = ets.h.jet(s, f, ets.n, pt)
        return cls(t, ets.n, pt.b, f, h, sec_rad, sec_tan, R_rad, R_tan, s,
                   pt.mean_curvature_factor())

    def laplacian(self, u):
        """Jet of the Laplacian of a radial function given by its jet."""
        up = u.deriv()
        upp = up.deriv()
        return upp + self.H * up * (self.n - 1)

    @property
    def hess_rad(self):
        return self.f.deriv().deriv()

    @property
    def hess_tan(self):
        return self.H * self.f.deriv()


# pointwise identities -----------------------------------------------------


def einstein_type_residual(ets, t):
    p = ets.point(t)
    f, h = p.f.value, p.h.value
    res_rad = f * p.R_rad.value - p.hess_rad.value - h
    res_tan = f * p.R_tan.value - p.hess_tan.value - h
    return res_rad, res_tan


def trace_identity_residual(ets, t):
    p = ets.point(t)
    return p.laplacian(p.f).value - p.s.value * p.f.value + ets.n * p.h.value


def dh_identity_residual(ets, t):
    p = ets.point(t)
    n = ets.n
    s, f = p.s, p.f
    return p.h.d(1) - (f.value * s.d(1) + 2.0 * s.value * f.d(1)) / (2 * (n - 1))


def delta_h_identity_residual(ets, t):
    p = ets.point(t)
    n = ets.n
    s, f, h = p.s, p.f, p.h
    rhs = (3.0 / (2 * (n - 1)) * s.d(1) * f.d(1)
           + f.value * p.laplacian(s).value / (2 * (n - 1))
           + s.value ** 2 * f.value / (n - 1)
           - n * h.value * s.value / (n - 1))
    return p.laplacian(h).value - rhs


def _require_constant_h(ets, what):
    if not ets.h_constant:
        raise WrongHMode(f"{what} needs a constant h, structure has {type(ets.h).__name__}")


def bochner_residual(ets, t):
    """1/2 Lap|grad f|^2 + (s - alpha)|grad f|^2 - |Ddf|^2 for constant h."""
    _require_constant_h(ets, "bochner identity")
    p = ets.point(t)
    fp = p.f.deriv()
    if abs(fp.value) <= CRITICAL_GRAD:
        raise CriticalPoint(f"grad f vanishes at t={t}")
    grad2 = fp * fp
    hess2 = p.hess_rad.value ** 2 + (ets.n - 1) * p.hess_tan.value ** 2
    return (0.5 * p.laplacian(grad2).value
            + (p.s.value - p.R_rad.value) * grad2.value - hess2)


def scalar_inequality_residual(ets, t):
    """Lap s - 6 |grad f|^2 s / f^2 + 2 s^2, for h = 0."""
    if not (ets.h_constant and ets.h.value == 0.0):
        raise WrongHMode("scalar inequality identity needs h = 0")
    p = ets.point(t)
    f = p.f.value
    if abs(f) <= ZERO_F:
        raise ZeroPotential(f"f vanishes at t={t}")
    s = p.s.value
    return p.laplacian(p.s).value - 6.0 * p.f.d(1) ** 2 / (f * f) * s + 2.0 * s * s


def csf_coefficients(c, n):
    return 1.0 - 2.0 * n * c + 2.0 * c, 2.0 * (n * c - c - 1.0)


def csf_gradient_identity_residual(ets, t, c=None):
    h = ets.h
    if not (isinstance(h, PresetH) and h.preset is Preset.CSF):
        raise WrongHMode("csf gradient identity needs the CSF preset h = c s f")
    if c is None:
        c = h.c
    p = ets.point(t)
    lhs_coef, rhs_coef = csf_coefficients(c, ets.n)
    return lhs_coef * p.f.value * p.s.d(1) - rhs_coef * p.s.value * p.f.d(1)


def f2s_value(ets, t):
    p = ets.point(t)
    return p.f.value ** 2 * p.s.value


# reports -------------------------------------------------------------------


@dataclass
class IdentityResidualReport:
    identity_id: str
    grid: list
    residuals: list
    tolerance: float
    max_abs: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.grid = [float(t) for t in self.grid]
        self.residuals = [float(r) for r in self.residuals]
        self.max_abs = max((abs(r) for r in self.residuals), default=0.0)
        self.passed = bool(self.max_abs <= self.tolerance)

    def to_dict(self):
        return {
            "identity_id": self.identity_id,
            "tolerance": self.tolerance,
            "max_abs": self.max_abs,
            "pass": self.passed,
            "samples": [{"t": t, "residual": r} for t, r in zip(self.grid, self.residuals)],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        rep = cls(d["identity_id"], [s["t"] for s in d["samples"]],
                  [s["residual"] for s in d["samples"]], d["tolerance"])
        return rep


def default_tolerance(ets=None):
    env = os.environ.get("RICCI_LAB_TOL")
    if env:
        return float(env)
    if ets is not None and not ets.closed_form:
        return SAMPLED_TOL
    return CLOSED_FORM_TOL


def default_grid(ets, count=GRID_POINTS, margin=GRID_MARGIN):
    lo, hi = ets.domain()
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError("default grid needs a finite domain; pass an explicit grid")
    span = hi - lo
    return np.linspace(lo + margin * span, hi - margin * span, count)


def residual_report(identity_id, fn, ets, grid=None, tolerance=None):
    grid = default_grid(ets) if grid is None else np.asarray(grid, dtype=float)
    tolerance = default_tolerance(ets) if tolerance is None else tolerance
    return IdentityResidualReport(identity_id, list(grid), [fn(ets, t) for t in grid], tolerance)


def f2s_conservation(ets, grid=None, tolerance=None):
    _require_constant_h(ets, "f^2 s conservation")
    grid = default_grid(ets) if grid is None else np.asarray(grid, dtype=float)
    ref = f2s_value(ets, grid[0])
    return residual_report("f2s", lambda e, t: f2s_value(e, t) - ref, ets, grid, tolerance)


@dataclass
class SignFactsReport:
    passed: bool
    precondition_ok: bool
    reason: str
    violations: list

    def to_dict(self):
        return {"pass": self.passed, "precondition_ok": self.precondition_ok,
                "reason": self.reason, "violations": self.violations}


def sign_facts_check(ets, grid=None):
    """h f > 0 on the grid, for constant nonzero h and positive s."""
    grid = default_grid(ets) if grid is None else np.asarray(grid, dtype=float)
    if not ets.h_constant or ets.h.value == 0.0:
        return SignFactsReport(False, False, "needs a nonzero constant h", [])
    pts = [ets.point(t, order=2) for t in grid]
    bad_s = [float(p.t) for p in pts if not p.s.value > 0]
    if bad_s:
        return SignFactsReport(False, False, "scalar curvature not positive on the grid", bad_s)
    h = ets.h.value
    viol = [float(p.t) for p in pts if not h * p.f.value > 0]
    return SignFactsReport(not viol, True, "" if not viol else "h f <= 0 somewhere", viol)
