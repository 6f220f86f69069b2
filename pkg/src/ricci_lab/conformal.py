"""Cotton, Weyl and the auxiliary T-tensor in the orthonormal radial frame.

Index 0 is the radial direction e1; indices 1..n-1 are tangential.
Riemann is stored all-lower with R[i, j, i, j] the sectional curvature of
the (e_i, e_j) plane, and Ricci is r[j, l] = sum_i R[i, j, i, l].
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import CriticalPoint, DimensionError, NonzeroScalar, WrongHMode
from .frame import Ansatz, frame_curvature
from .structure import CRITICAL_GRAD

S_ZERO_TOL = 1e-9


@dataclass(frozen=True)
class ThreeTensorFrame:
    """Frame components T[i, j, k], antisymmetric in (i, j)."""

    components: np.ndarray
    t: float = float("nan")

    def __post_init__(self):
        c = np.array(self.components, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "components", c)

    @property
    def n(self):
        return self.components.shape[0]

    def max_abs(self):
        return float(np.max(np.abs(self.components)))

    def antisymmetry_defect(self):
        c = self.components
        return float(np.max(np.abs(c + c.transpose(1, 0, 2))))

    def __getitem__(self, idx):
        """One-based component access, matching frame labels e1..en."""
        i, j, k = idx
        return float(self.components[i - 1, j - 1, k - 1])

    def to_dict(self):
        n = self.n
        return {
            "t": self.t,
            "n": n,
            "components": [
                {"index": [i + 1, j + 1, k + 1], "value": float(self.components[i, j, k])}
                for i in range(n) for j in range(n) for k in range(n)
            ],
        }


def wedge(w, xi):
    """(w ^ xi)(X, Y, Z) = w(X) xi(Y, Z) - w(Y) xi(X, Z)."""
    w = np.asarray(w, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return np.einsum("i,jk->ijk", w, xi) - np.einsum("j,ik->ijk", w, xi)


def wedge_df(xi, f_prime):
    xi = np.asarray(xi, dtype=float)
    if not np.allclose(xi, xi.T, rtol=0, atol=1e-14 * (1 + np.abs(xi).max())):
        raise ValueError("xi must be symmetric")
    df = np.zeros(xi.shape[0])
    df[0] = f_prime
    return ThreeTensorFrame(wedge(df, xi))


def _frame_ricci(p):
    n = p.n
    return np.diag([p.R_rad.value] + [p.R_tan.value] * (n - 1))


def t_tensor(ets, t):
    p = ets.point(t, order=2)
    n = ets.n
    g = np.eye(n)
    r = _frame_ricci(p)
    df = np.zeros(n)
    df[0] = p.f.d(1)
    i_r = r @ df
    s = p.s.value
    T = (wedge(i_r, g) / ((n - 1) * (n - 2))
         - s / ((n - 1) * (n - 2)) * wedge(df, g)
         + wedge(df, r) / (n - 2))
    return ThreeTensorFrame(T, float(t))


def warped_connection(n, H):
    """gamma[k, i, j] = <D_{e_k} e_i, e_j> for the radial frame.

    D_{e_k} e1 = H e_k and D_{e_k} e_k = -H e1 for tangential k, with
    H = b'/b.  Fiber-internal terms are omitted: they drop out of every
    tensor here because the tangential blocks are multiples of the identity.
    """
    gam = np.zeros((n, n, n))
    for k in range(1, n):
        gam[k, 0, k] = H
        gam[k, k, 0] = -H
    return gam


def covariant_derivative_2tensor(A, dA_rad, gam):
    """(D_{e_k} A)(e_i, e_j) for a 2-tensor depending on the radius only."""
    n = A.shape[0]
    DA = -np.einsum("kim,mj->kij", gam, A) - np.einsum("kjm,im->kij", gam, A)
    DA[0] += dA_rad
    return DA


def cotton_tensor(ets, t, connection=None):
    """C = d^D (r - s/(2(n-1)) g) in the radial frame."""
    p = ets.point(t, order=3)
    n = ets.n
    c = 1.0 / (2 * (n - 1))
    a_rad = p.R_rad - p.s * c
    a_tan = p.R_tan - p.s * c
    A = np.diag([a_rad.value] + [a_tan.value] * (n - 1))
    dA = np.diag([a_rad.d(1)] + [a_tan.d(1)] * (n - 1))
    gam = warped_connection(n, p.H.value) if connection is None else connection
    DA = covariant_derivative_2tensor(A, dA, gam)
    return ThreeTensorFrame(DA - DA.transpose(1, 0, 2), float(t))


# Riemann / Weyl -------------------------------------------------------------


def riemann_from_sectional(K):
    """Riemann of a curvature operator diagonal on the frame bivectors.

    ``K[i, j]`` is the sectional curvature of the (e_i, e_j) plane.
    """
    K = np.asarray(K, dtype=float)
    n = K.shape[0]
    d = np.eye(n)
    KK = K.copy()
    np.fill_diagonal(KK, 0.0)
    return (np.einsum("ij,ik,jl->ijkl", KK, d, d) - np.einsum("ij,il,jk->ijkl", KK, d, d))


@dataclass(frozen=True)
class CurvatureOperatorFrame:
    riemann: np.ndarray
    ricci: np.ndarray
    s: float
    weyl: np.ndarray

    @classmethod
    def from_riemann(cls, riemann):
        riemann = np.asarray(riemann, dtype=float)
        ricci = np.einsum("ijil->jl", riemann)
        return cls(riemann, ricci, float(np.trace(ricci)), weyl_tensor(riemann))

    def bianchi_defect(self):
        R = self.riemann
        cyc = R + np.einsum("ijkl->iklj", R) + np.einsum("ijkl->iljk", R)
        return float(np.max(np.abs(cyc)))

    def symmetry_defect(self):
        R = self.riemann
        return float(max(np.max(np.abs(R + R.transpose(1, 0, 2, 3))),
                         np.max(np.abs(R + R.transpose(0, 1, 3, 2))),
                         np.max(np.abs(R - R.transpose(2, 3, 0, 1)))))


def curvature_operator(metric, t):
    fc = frame_curvature(metric, t)
    n = metric.n
    K = np.full((n, n), fc.sec_tan)
    K[0, :] = K[:, 0] = fc.sec_rad
    return CurvatureOperatorFrame.from_riemann(riemann_from_sectional(K))


def weyl_tensor(curv):
    """Totally trace-free part of Riemann (frame components)."""
    R = curv.riemann if isinstance(curv, CurvatureOperatorFrame) else np.asarray(curv, dtype=float)
    n = R.shape[0]
    if n < 3:
        raise DimensionError("Weyl tensor needs n >= 3")
    r = np.einsum("ijil->jl", R)
    s = np.trace(r)
    g = np.eye(n)
    kn_rg = (np.einsum("ik,jl->ijkl", r, g) - np.einsum("il,jk->ijkl", r, g)
             + np.einsum("jl,ik->ijkl", r, g) - np.einsum("jk,il->ijkl", r, g))
    gg = np.einsum("ik,jl->ijkl", g, g) - np.einsum("il,jk->ijkl", g, g)
    return R - kn_rg / (n - 2) + s / ((n - 1) * (n - 2)) * gg


def weyl_trace_defect(W):
    W = np.asarray(W)
    return float(max(np.max(np.abs(np.einsum("ijil->jl", W))),
                     np.max(np.abs(np.einsum("iijk->jk", W))),
                     np.max(np.abs(np.einsum("ijkk->ij", W)))))


def interior_last(W, grad):
    """W(X, Y, Z, grad) as a three-tensor."""
    return np.einsum("ijkl,l->ijk", W, grad)


def lemma51_residual(ets, t):
    """max |f C - W(., ., ., grad f) + (n-1) T| over frame index triples."""
    n = ets.n
    p = ets.point(t, order=2)
    grad = np.zeros(n)
    grad[0] = p.f.d(1)
    W = curvature_operator(ets.metric, t).weyl
    C = cotton_tensor(ets, t).components
    T = t_tensor(ets, t).components
    return float(np.max(np.abs(p.f.value * C - interior_last(W, grad) + (n - 1) * T)))


def weyl_divergence(ets, t, h_fd=1e-4):
    """sum_i (D_{e_i} W)(X, Y, Z, e_i), radial derivative by central differences in t."""
    n = ets.n
    metric = ets.metric
    W0 = curvature_operator(metric, t).weyl
    dW = (curvature_operator(metric, t + h_fd).weyl
          - curvature_operator(metric, t - h_fd).weyl) / (2 * h_fd)
    p = ets.point(t, order=2)
    if metric.ansatz is Ansatz.CONFORMAL_RADIAL:
        dW = dW * p.b.d(1)  # d/dr = (dt/dr) d/dt
    gam = warped_connection(n, p.H.value)
    DW = (-np.einsum("kam,mbcd->kabcd", gam, W0) - np.einsum("kbm,amcd->kabcd", gam, W0)
          - np.einsum("kcm,abmd->kabcd", gam, W0) - np.einsum("kdm,abcm->kabcd", gam, W0))
    DW[0] += dW
    return np.einsum("kabck->abc", DW)


def weyl_divergence_residual(ets, t, h_fd=1e-4):
    n = ets.n
    divW = weyl_divergence(ets, t, h_fd)
    C = cotton_tensor(ets, t).components
    return float(np.max(np.abs(divW - (n - 3) / (n - 2) * C)))


@dataclass
class EigenstructureReport:
    t: float
    alpha: float
    values: dict
    residuals: dict
    tolerance: float

    @property
    def max_abs(self):
        return max(abs(v) for v in self.residuals.values())

    @property
    def passed(self):
        return self.max_abs <= self.tolerance

    def to_dict(self):
        return {"t": self.t, "alpha": self.alpha, "values": self.values,
                "residuals": self.residuals, "tolerance": self.tolerance,
                "max_abs": self.max_abs, "pass": self.passed}


def eigenstructure_check(ets, t, tolerance=1e-9, s_tol=S_ZERO_TOL):
    """Ricci eigenstructure and level-set geometry for s = 0, constant h."""
    if not ets.h_constant:
        raise WrongHMode("eigenstructure check needs a constant h")
    p = ets.point(t, order=2)
    n = ets.n
    s = p.s.value
    alpha = p.R_rad.value
    R_tan = p.R_tan.value
    scale = 1.0 + abs(alpha) + abs(R_tan)
    if abs(s) > s_tol * scale:
        raise NonzeroScalar(f"s({t}) = {s} is not zero")
    fp = p.f.d(1)
    if abs(fp) <= CRITICAL_GRAD:
        raise CriticalPoint(f"grad f vanishes at t={t}")
    f = p.f.value
    h = ets.h.value
    r2 = alpha ** 2 + (n - 1) * R_tan ** 2
    ii_hess = p.hess_tan.value / abs(fp)
    ii_formula = -(f * alpha / (n - 1) + h) / abs(fp)
    ii_shape = math.copysign(1.0, fp) * p.H.value
    values = {
        "R_tan": R_tan,
        "ricci_norm_sq": r2,
        "second_fundamental_form": ii_hess,
        "sec_rad": p.sec_rad.value,
        "sec_tan": p.sec_tan.value,
    }
    residuals = {
        "tangential_eigenvalue": R_tan + alpha / (n - 1),
        "ricci_norm": r2 - n / (n - 1) * alpha ** 2,
        "second_fundamental_form": ii_hess - ii_formula,
        "shape_operator": ii_hess - ii_shape,
        "sec_rad": p.sec_rad.value - alpha / (n - 1),
        "sec_tan": p.sec_tan.value + 2 * alpha / ((n - 1) * (n - 2)),
    }
    return EigenstructureReport(float(t), alpha, values, residuals, tolerance)
