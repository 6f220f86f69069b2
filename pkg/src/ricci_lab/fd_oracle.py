"""Finite-difference curvature of a coordinate metric.

Independent check on the frame formulas: Christoffel symbols by central
differences of g_ij, Riemann by central differences of the Christoffels,
Ricci by contraction.  Nothing here knows about warped products except
the chart builders at the bottom.

Metric values are sampled in ``np.longdouble`` so that at h = 1e-4 the
O(h^2) truncation error, not cancellation, dominates.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import SingularMetric, StencilOutOfRange
from .frame import Ansatz

DEFAULT_STEP = 1e-4

_WEIGHTS = {
    3: {-1: -0.5, 1: 0.5},
    5: {-2: 1.0 / 12.0, -1: -2.0 / 3.0, 1: 2.0 / 3.0, 2: -1.0 / 12.0},
}


@dataclass
class MetricPatch:
    """Metric samples ``g_ij`` on the nodes of a stencil around ``point``.

    ``nodes`` maps integer offset tuples (in units of ``h``) to ``(dim, dim)``
    arrays.
    """

    point: np.ndarray
    h: float
    stencil: int
    nodes: dict

    @property
    def dim(self):
        return self.point.size

    @classmethod
    def from_callable(cls, metric_fn, point, h=DEFAULT_STEP, stencil=3, dtype=np.longdouble):
        if stencil not in _WEIGHTS:
            raise ValueError("stencil must be 3 or 5")
        point = np.asarray(point, dtype=dtype)
        dim = point.size
        radius = stencil // 2
        offsets = set()
        for a, b in itertools.product(range(dim), repeat=2):
            for p, q in itertools.product(range(-radius, radius + 1), repeat=2):
                off = [0] * dim
                off[a] += p
                off[b] += q
                offsets.add(tuple(off))
        step = dtype(h)
        nodes = {}
        for off in sorted(offsets):
            x = point + step * np.asarray(off, dtype=dtype)
            nodes[off] = np.asarray(metric_fn(x), dtype=dtype)
        return cls(point, float(h), stencil, nodes)

    def g(self, off):
        try:
            return self.nodes[off]
        except KeyError:
            raise StencilOutOfRange(f"patch has no node at offset {off}") from None


@dataclass(frozen=True)
class OracleResult:
    christoffel: np.ndarray  # Gamma^k_ij
    riemann: np.ndarray  # R^r_{s m n}
    ricci: np.ndarray  # R_ij
    ricci_mixed: np.ndarray  # R^i_j
    s: float
    metric: np.ndarray


def _shift(off, axis, p):
    off = list(off)
    off[axis] += p
    return tuple(off)


def _inverse(g, off):
    try:
        det = np.linalg.det(g.astype(float))
        if not np.isfinite(det) or abs(det) < 1e-300:
            raise np.linalg.LinAlgError
        return np.linalg.inv(g)
    except (np.linalg.LinAlgError, TypeError):
        # longdouble inversion is not supported everywhere
        try:
            return np.linalg.inv(g.astype(float)).astype(g.dtype)
        except np.linalg.LinAlgError:
            raise SingularMetric(f"metric not invertible at stencil offset {off}") from None


def _christoffel(patch, off):
    dim = patch.dim
    w = _WEIGHTS[patch.stencil]
    h = patch.nodes[next(iter(patch.nodes))].dtype.type(patch.h)
    dg = np.stack([sum(c * patch.g(_shift(off, a, p)) for p, c in w.items()) / h
                   for a in range(dim)])  # dg[a, i, j] = d_a g_ij
    ginv = _inverse(patch.g(off), off)
    lower = 0.5 * (np.transpose(dg, (1, 0, 2)) + np.transpose(dg, (1, 2, 0)) - dg)
    # lower[l, i, j] = 1/2 (d_i g_lj + d_j g_li - d_l g_ij)
    return np.einsum("kl,lij->kij", ginv, lower)


def fd_curvature_oracle(patch):
    """Curvature at the patch centre from metric samples alone."""
    dim = patch.dim
    w = _WEIGHTS[patch.stencil]
    centre = (0,) * dim
    g0 = patch.g(centre)
    if not np.all(np.linalg.eigvalsh(g0.astype(float)) > 0):
        raise SingularMetric("metric is not positive definite at the centre")
    gam = _christoffel(patch, centre)
    h = g0.dtype.type(patch.h)
    dgam = np.stack([sum(c * _christoffel(patch, _shift(centre, a, p)) for p, c in w.items()) / h
                     for a in range(dim)])  # dgam[m, r, n, s] = d_m Gamma^r_ns
    riem = (np.einsum("mrns->rsmn", dgam) - np.einsum("nrms->rsmn", dgam)
            + np.einsum("rml,lns->rsmn", gam, gam) - np.einsum("rnl,lms->rsmn", gam, gam))
    ric = np.einsum("rsrn->sn", riem)
    ginv = _inverse(g0, centre)
    mixed = ginv @ ric
    return OracleResult(
        christoffel=gam.astype(float),
        riemann=riem.astype(float),
        ricci=ric.astype(float),
        ricci_mixed=mixed.astype(float),
        s=float(np.trace(mixed)),
        metric=g0.astype(float),
    )


def oracle_at(metric_fn, point, h=DEFAULT_STEP, stencil=3):
    return fd_curvature_oracle(MetricPatch.from_callable(metric_fn, point, h, stencil))


# coordinate charts ------------------------------------------------------


def euclidean_chart(dim):
    def g(x):
        return np.eye(dim, dtype=x.dtype)

    return g


def sphere_stereographic_chart(dim):
    """Unit round sphere in stereographic coordinates."""

    def g(x):
        psi = 2 / (1 + np.dot(x, x))
        return psi * psi * np.eye(dim, dtype=x.dtype)

    return g


def _value_fn(field):
    fn = field.extended()
    if fn is not None:
        return fn
    return lambda t: field.value(float(t))


def ansatz_chart(metric):
    """Coordinate chart ``(t, y_1, ..., y_{n-1})`` for a radial ansatz.

    The fiber is written conformally flat, ``4|dy|^2 / (1 + kappa0 |y|^2)^2``,
    which has constant curvature ``kappa0``.
    """
    n = metric.n
    prof = _value_fn(metric.b)
    k0 = metric.kappa0
    conformal = metric.ansatz is Ansatz.CONFORMAL_RADIAL

    def g(x):
        t, y = x[0], x[1:]
        psi = 2 / (1 + k0 * np.dot(y, y))
        out = np.zeros((n, n), dtype=x.dtype)
        if conformal:
            F = prof(t)
            out[0, 0] = 1 / (F * F)
            scale = t * t * psi * psi
        else:
            b = prof(t)
            out[0, 0] = 1
            scale = b * b * psi * psi
        for i in range(1, n):
            out[i, i] = scale
        return out

    return g


def ansatz_frame_ricci(metric, t, h=DEFAULT_STEP, stencil=3, y=None):
    """(R_rad, R_tan, s) from the oracle on the ansatz chart at radius ``t``."""
    y = np.zeros(metric.n - 1) if y is None else np.asarray(y, dtype=float)
    res = oracle_at(ansatz_chart(metric), np.concatenate([[t], y]), h, stencil)
    return res.ricci_mixed[0, 0], res.ricci_mixed[1, 1], res.s, res


def frame_riemann(res):
    """All-lower Riemann in the orthonormal frame of a diagonal metric.

    Index convention matches ``conformal``: R[i, j, i, j] is the sectional
    curvature of the (e_i, e_j) plane.
    """
    g = res.metric
    if np.max(np.abs(g - np.diag(np.diag(g)))) > 1e-12 * np.max(np.abs(g)):
        raise ValueError("frame_riemann needs a diagonal metric")
    lower = np.einsum("rq,qsmn->rsmn", g, res.riemann)
    e = 1.0 / np.sqrt(np.diag(g))
    return np.einsum("ijkl,i,j,k,l->ijkl", lower, e, e, e, e)
