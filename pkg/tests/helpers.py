"""Shared builders for the test modules."""

import numpy as np
import sympy as sp

from ricci_lab import fd_oracle
from ricci_lab.fields import RadialScalarField, T
from ricci_lab.frame import WarpedProductMetric, frame_curvature

# nested central differences in long double: second derivatives carry
# roughly eps_ld / h^2 ~ 1e-11 of round-off at h = 1e-4
ROUNDOFF_FLOOR = 1e-11


def random_warped_metric(rng):
    """b = a0 + a1 t + a2 sin(w t) on [0, 2], positive, random fiber sign."""
    n = int(rng.choice([3, 4, 5]))
    a0, a1, a2 = rng.uniform(1.0, 2.0), rng.uniform(-0.4, 0.4), rng.uniform(-0.3, 0.3)
    w = rng.uniform(0.5, 2.0)
    k0 = float(rng.choice([-1.0, 0.0, 1.0]))
    expr = sp.Float(a0) + sp.Float(a1) * T + sp.Float(a2) * sp.sin(sp.Float(w) * T)
    b = RadialScalarField.from_expr(expr, 0.0, 2.0)
    return WarpedProductMetric(n, b, k0), float(rng.uniform(0.3, 1.7))


def oracle_errors(metric, t, steps=(1e-3, 1e-4)):
    """max |frame - oracle| over (R_rad, R_tan, s) for each FD step."""
    fc = frame_curvature(metric, t)
    out = []
    for h in steps:
        rr, rt, s, _ = fd_oracle.ansatz_frame_ricci(metric, t, h=h)
        out.append(max(abs(rr - fc.R_rad), abs(rt - fc.R_tan), abs(s - fc.s)))
    return out


def oracle_study(count=100, seed=20261019):
    """Errors at h = 1e-3, 1e-4 for ``count`` random ansatz metrics."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(count):
        metric, t = random_warped_metric(rng)
        e3, e4 = oracle_errors(metric, t)
        rows.append((metric.n, t, e3, e4))
    return rows
