"""Named example structures and their golden values.

Each preset knows how to build its EinsteinTypeStructure, a default grid,
and the closed-form values every computed quantity must reproduce.
"""

import math
from dataclasses import dataclass

import numpy as np
import sympy as sp

from .fields import T, RadialScalarField
from .frame import Ansatz, WarpedProductMetric, frame_curvature, hessian_laplacian_radial
from .ode import flat_family, hyperbolic_family, sphere_family
from .structure import (ConstantH, EinsteinTypeStructure, FunctionH, default_grid,
                        einstein_type_residual, trace_identity_residual)

GOLDEN_TOL = 1e-10

EXAMPLES = ("schwarzschild_exterior", "schwarzschild_interior", "sphere_family",
            "flat_family", "hyperbolic_family")


def schwarzschild_exterior(m=1.0):
    """dt^2/f^2 + t^2 g_S2 with f = sqrt(1 - 2m/t), h = 0, on t > 2m."""
    if not m > 0:
        raise ValueError("mass parameter m must be positive")
    F = RadialScalarField.from_expr(sp.sqrt(1 - 2 * sp.nsimplify(m) / T), 2 * m, math.inf,
                                    name="f_exterior")
    metric = WarpedProductMetric(3, F, 1.0, Ansatz.CONFORMAL_RADIAL)
    return EinsteinTypeStructure(metric, F, ConstantH(0.0))


def schwarzschild_interior(m=1.0, R3=8.0):
    """f = sqrt(1 - 2m t^2/R^3), h = (6m/R^3) f, on 0 < t < sqrt(R^3/(2m))."""
    if not (m > 0 and R3 > 0):
        raise ValueError("m and R3 must be positive")
    mm, rr = sp.nsimplify(m), sp.nsimplify(R3)
    hi = math.sqrt(R3 / (2 * m))
    F = RadialScalarField.from_expr(sp.sqrt(1 - 2 * mm * T ** 2 / rr), 0.0, hi, name="f_interior")
    h = RadialScalarField.from_expr(6 * mm / rr * sp.sqrt(1 - 2 * mm * T ** 2 / rr), 0.0, hi,
                                    name="h_interior")
    metric = WarpedProductMetric(3, F, 1.0, Ansatz.CONFORMAL_RADIAL)
    return EinsteinTypeStructure(metric, F, FunctionH(h))


@dataclass(frozen=True)
class Example:
    name: str
    ets: EinsteinTypeStructure
    grid: np.ndarray
    params: dict

    def golden(self, t):
        """Closed-form values at ``t``: name -> expected."""
        p = self.params
        f = self.ets.f.value(t)
        if self.name == "schwarzschild_exterior":
            m = p["m"]
            return {"R_rad": -2 * m / t ** 3, "R_tan": m / t ** 3, "s": 0.0, "lap_f": 0.0,
                    "hess_rad": -2 * m / t ** 3 * f}
        if self.name == "schwarzschild_interior":
            k = p["m"] / p["R3"]
            return {"R_rad": 4 * k, "R_tan": 4 * k, "s": 12 * k, "lap_f": -6 * k * f,
                    "hess_rad": -2 * k * f, "hess_tan": -2 * k * f}
        if self.name == "flat_family":
            return {"R_rad": 0.0, "R_tan": 0.0, "s": 0.0, "lap_f": 0.0,
                    "hess_rad": 0.0, "hess_tan": 0.0}
        lam = p["lambda"] if self.name == "sphere_family" else -p["mu"]
        n = p["n"]
        return {"R_rad": lam, "R_tan": lam, "s": n * lam, "lap_f": 0.0,
                "hess_rad": 0.0, "hess_tan": 0.0, "f": p["h"] / lam}

    def computed(self, t):
        ets = self.ets
        fc = frame_curvature(ets.metric, t)
        rad, tan, lap = hessian_laplacian_radial(ets.metric, ets.f, t)
        f = ets.f.value(t)
        res_rad, res_tan = einstein_type_residual(ets, t)
        out = {"R_rad": fc.R_rad, "R_tan": fc.R_tan, "s": fc.s, "lap_f": lap,
               "hess_rad": rad, "hess_tan": tan, "f": f,
               "einstein_residual": max(abs(res_rad), abs(res_tan)),
               "trace_residual": abs(trace_identity_residual(ets, t))}
        if self.name == "schwarzschild_interior":
            # f Ric = Ddf + (1/3)(s f - lap f) g, with h read off the trace
            h_trace = (fc.s * f - lap) / 3.0
            out["trace_form_residual"] = max(abs(f * fc.R_rad - rad - h_trace),
                                             abs(f * fc.R_tan - tan - h_trace))
        return out


def _grid(spec, default):
    if spec is None:
        return default
    lo, hi, count = spec["lo"], spec["hi"], spec["count"]
    if count < 2:
        raise ValueError("grid count must be at least 2")
    return np.linspace(lo, hi, count)


def build_example(name, m=1.0, R3=8.0, n=3, h=None, grid=None, **kw):
    """Example by name; unknown keyword parameters are rejected."""
    lam = kw.pop("lambda", None)
    mu = kw.pop("mu", None)
    if kw:
        raise ValueError(f"unknown example parameters: {sorted(kw)}")
    if name == "schwarzschild_exterior":
        ets = schwarzschild_exterior(m)
        g = _grid(grid, np.linspace(2.5 * m, 10.0 * m, 64))
        params = {"m": m}
    elif name == "schwarzschild_interior":
        ets = schwarzschild_interior(m, R3)
        hi = math.sqrt(R3 / (2 * m))
        top = 0.9 * hi
        g = _grid(grid, top * np.arange(1, 65) / 64.0)
        params = {"m": m, "R3": R3}
    elif name == "sphere_family":
        lam = 2.0 if lam is None else lam
        h = 2.0 if h is None else h
        ets = sphere_family(n, lam, h).structure()
        g = _grid(grid, default_grid(ets, 64))
        params = {"n": n, "lambda": lam, "h": h}
    elif name == "hyperbolic_family":
        mu = 2.0 if mu is None else mu
        h = 2.0 if h is None else h
        fam = hyperbolic_family(n, mu, h, hi=5.0)
        ets = fam.structure()
        g = _grid(grid, default_grid(ets, 64))
        params = {"n": n, "mu": mu, "h": h}
    elif name == "flat_family":
        fam = flat_family(n, hi=10.0)
        ets = fam.structure()
        g = _grid(grid, default_grid(ets, 64))
        params = {"n": n}
    else:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(EXAMPLES)}")
    return Example(name, ets, np.asarray(g, dtype=float), params)
