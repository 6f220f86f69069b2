"""Registry of identity checks runnable as a suite.

A check whose hypothesis fails (wrong h mode, s != 0, critical point, ...)
is a SKIP with the reason, not a failure.
"""

from dataclasses import dataclass

from . import conformal, structure
from .errors import (CriticalPoint, DimensionError, NonzeroScalar, WrongHMode, ZeroPotential)
from .structure import IdentityResidualReport, Preset, PresetH

PRECONDITION_ERRORS = (WrongHMode, NonzeroScalar, CriticalPoint, ZeroPotential, DimensionError)


def _einstein(ets, t):
    return max(map(abs, structure.einstein_type_residual(ets, t)))


def _t_tensor_einstein(ets, t):
    """T on Einstein points only; elsewhere T need not vanish."""
    p = ets.point(t, order=2)
    if abs(p.R_rad.value - p.R_tan.value) > 1e-12 * (1 + abs(p.R_rad.value)):
        raise NonzeroScalar("not an Einstein point (R_rad != R_tan)")
    return conformal.t_tensor(ets, t).max_abs()


POINTWISE = {
    "einstein": _einstein,
    "trace": structure.trace_identity_residual,
    "dh": structure.dh_identity_residual,
    "delta_h": structure.delta_h_identity_residual,
    "bochner": structure.bochner_residual,
    "scalar_inequality": structure.scalar_inequality_residual,
    "csf_gradient": structure.csf_gradient_identity_residual,
    "lemma51": conformal.lemma51_residual,
    "cotton": lambda ets, t: conformal.cotton_tensor(ets, t).max_abs(),
    "weyl": lambda ets, t: float(abs(conformal.curvature_operator(ets.metric, t).weyl).max()),
    "weyl_divergence": conformal.weyl_divergence_residual,
    "t_tensor_einstein": _t_tensor_einstein,
    "eigenstructure": lambda ets, t: conformal.eigenstructure_check(ets, t).max_abs,
}

GLOBAL = ("f2s", "sign_facts")

IDENTITY_IDS = tuple(POINTWISE) + GLOBAL

# checks whose numerics are looser than the pointwise default
DEFAULT_TOLERANCES = {"weyl_divergence": 1e-7, "lemma51": 1e-7}


@dataclass
class SuiteEntry:
    identity_id: str
    status: str  # PASS / FAIL / SKIP
    reason: str = ""
    report: IdentityResidualReport = None

    def to_dict(self):
        d = {"identity_id": self.identity_id, "status": self.status}
        if self.reason:
            d["reason"] = self.reason
        if self.report is not None:
            d["report"] = self.report.to_dict()
        return d


def csf_excluded(c, n):
    """c in [1/(2(n-1)), 1/n): outside the hypotheses of the CSF results.

    At the left end the coefficient 1 - 2nc + 2c of f grad s vanishes.
    """
    return 1.0 / (2 * (n - 1)) <= c < 1.0 / n


def run_identity(identity_id, ets, grid, tolerance=None):
    if identity_id not in IDENTITY_IDS:
        raise KeyError(f"unknown identity {identity_id!r}")
    if tolerance is None:
        tolerance = DEFAULT_TOLERANCES.get(identity_id, structure.default_tolerance(ets))
    try:
        if identity_id == "f2s":
            rep = structure.f2s_conservation(ets, grid, tolerance)
        elif identity_id == "sign_facts":
            sf = structure.sign_facts_check(ets, grid)
            if not sf.precondition_ok:
                return SuiteEntry(identity_id, "SKIP", sf.reason)
            # residual 1 marks a grid point with h f <= 0
            bad = set(sf.violations)
            rep = IdentityResidualReport(identity_id, list(grid),
                                         [1.0 if float(t) in bad else 0.0 for t in grid], 0.5)
        else:
            if identity_id == "csf_gradient":
                h = ets.h
                if not (isinstance(h, PresetH) and h.preset is Preset.CSF):
                    raise WrongHMode("csf_gradient needs the CSF preset h = c s f")
                if csf_excluded(h.c, ets.n):
                    return SuiteEntry(identity_id, "SKIP",
                                      f"c = {h.c} lies in [1/(2(n-1)), 1/n): coefficient "
                                      "1-2nc+2c degenerates at the left end and the CSF "
                                      "results exclude this range")
            rep = structure.residual_report(identity_id, POINTWISE[identity_id], ets, grid,
                                            tolerance)
    except PRECONDITION_ERRORS as exc:
        return SuiteEntry(identity_id, "SKIP", f"{type(exc).__name__}: {exc}")
    return SuiteEntry(identity_id, "PASS" if rep.passed else "FAIL", "", rep)


def run_suite(ids, ets, grid, tolerances=None):
    tolerances = tolerances or {}
    return [run_identity(i, ets, grid, tolerances.get(i)) for i in ids]
