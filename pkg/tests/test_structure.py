import numpy as np
import pytest
import sympy as sp

from ricci_lab import structure as st
from ricci_lab.errors import CriticalPoint, WrongHMode
from ricci_lab.fields import RadialScalarField, T
from ricci_lab.presets import build_example, schwarzschild_exterior, schwarzschild_interior

POINTWISE = [st.trace_identity_residual, st.dh_identity_residual, st.delta_h_identity_residual]


def einstein_max(ets, t):
    return max(map(abs, st.einstein_type_residual(ets, t)))


@pytest.mark.parametrize("name", ["schwarzschild_exterior", "schwarzschild_interior",
                                  "sphere_family", "hyperbolic_family", "flat_family"])
def test_examples_solve_the_equation(name):
    ex = build_example(name)
    for t in ex.grid[::8]:
        assert einstein_max(ex.ets, t) < 1e-12
        for fn in POINTWISE:
            assert abs(fn(ex.ets, t)) < 1e-9


def test_perturbed_potential_is_not_a_solution():
    ets = schwarzschild_exterior()
    bad = ets.__class__(ets.metric, ets.f + RadialScalarField.from_expr(0.01 * sp.sin(T)), ets.h)
    worst = max(einstein_max(bad, t) for t in np.linspace(2.5, 10, 16))
    assert worst > 1e-4


def test_wrong_constant_h_is_caught():
    ets = schwarzschild_exterior().with_h(st.ConstantH(1e-3))
    assert abs(st.trace_identity_residual(ets, 4.0)) > 1e-4


@pytest.mark.parametrize("lam", [0.5, 3.0, -2.0])
def test_scaling_covariance(lam):
    """(f, h) -> (lam f, lam h) scales every linear residual by lam."""
    ets = schwarzschild_interior()
    sc = ets.scaled(lam)
    for t in (0.3, 1.0, 1.7):
        for fn in POINTWISE:
            assert fn(sc, t) == pytest.approx(lam * fn(ets, t), abs=1e-12)
        assert st.f2s_value(sc, t) == pytest.approx(lam ** 2 * st.f2s_value(ets, t), rel=1e-12)


def test_sign_symmetry():
    sph = build_example("sphere_family").ets
    neg = sph.scaled(-1.0)
    assert neg.h.value == -sph.h.value
    assert einstein_max(neg, 0.5) < 1e-12
    # Bochner is quadratic in f
    ext = schwarzschild_exterior()
    for t in (3.0, 6.0):
        assert st.bochner_residual(ext.scaled(-1.0), t) == pytest.approx(
            st.bochner_residual(ext, t), abs=1e-15)


def test_non_homogeneous_preset_refuses_scaling():
    ets = schwarzschild_exterior().with_h(st.cpe())
    with pytest.raises(ValueError):
        ets.scaled(2.0)


def test_preset_equivalence():
    # vacuum static reads h = s f / (n-1) off the geometry
    ext = schwarzschild_exterior()
    ext_vs = ext.with_h(st.vacuum_static())
    inner = schwarzschild_interior()
    inner_vs = inner.with_h(st.vacuum_static())
    for ets, alt, t in ((ext, ext_vs, 4.0), (inner, inner_vs, 1.2)):
        assert alt.point(t).h.value == pytest.approx(ets.point(t).h.value, abs=1e-14)
        assert einstein_max(alt, t) < 1e-12
    # a fluid with rho + mu = 0 is vacuum static again
    fl = inner.with_h(st.static_perfect_fluid(0.3, -0.3))
    assert fl.point(1.2).h.value == pytest.approx(inner_vs.point(1.2).h.value, abs=1e-14)
    # V-static with kappa shifts h by kappa/(n-1)
    vs = ext.with_h(st.v_static(0.4))
    assert vs.point(4.0).h.value == pytest.approx(0.2, abs=1e-14)


def test_csf_identity():
    ets = schwarzschild_interior().with_h(st.csf(0.5))
    # n = 3, c = 1/2: (1 - 2nc + 2c, 2(nc - c - 1)) = (-1, 0)
    assert st.csf_coefficients(0.5, 3) == (-1.0, 0.0)
    # interior s is constant, so -f s' vanishes
    for t in (0.4, 1.0, 1.6):
        assert abs(st.csf_gradient_identity_residual(ets, t)) < 1e-12
    # exterior: s = 0 identically
    ext = schwarzschild_exterior().with_h(st.csf(0.1))
    assert abs(st.csf_gradient_identity_residual(ext, 5.0)) < 1e-14


def test_constant_h_checks_refuse_function_h():
    ets = schwarzschild_interior()
    with pytest.raises(WrongHMode):
        st.bochner_residual(ets, 1.0)
    with pytest.raises(WrongHMode):
        st.f2s_conservation(ets)
    with pytest.raises(WrongHMode):
        st.scalar_inequality_residual(ets, 1.0)
    with pytest.raises(WrongHMode):
        st.csf_gradient_identity_residual(ets, 1.0)


def test_bochner_at_critical_point():
    ets = build_example("sphere_family").ets  # f constant
    with pytest.raises(CriticalPoint):
        st.bochner_residual(ets, 1.0)


def test_exterior_identities():
    ets = schwarzschild_exterior()
    grid = np.linspace(2.5, 10, 32)
    assert st.residual_report("bochner", st.bochner_residual, ets, grid).passed
    assert st.residual_report("scalar", st.scalar_inequality_residual, ets, grid).passed
    assert st.f2s_conservation(ets, grid).passed


def test_sign_facts():
    ok = st.sign_facts_check(build_example("sphere_family").ets)
    assert ok.passed and ok.precondition_ok
    neg = st.sign_facts_check(build_example("hyperbolic_family").ets)
    assert not neg.precondition_ok  # s < 0
    zero = st.sign_facts_check(schwarzschild_exterior(), np.linspace(3, 5, 4))
    assert zero.reason == "needs a nonzero constant h"


def test_report_round_trip():
    rep = st.residual_report("trace", st.trace_identity_residual, schwarzschild_exterior(),
                             np.linspace(3, 4, 5), 1e-9)
    back = st.IdentityResidualReport.from_dict(rep.to_dict())
    assert back.to_dict() == rep.to_dict()
    assert set(rep.to_dict()) >= {"identity_id", "tolerance", "max_abs", "pass"}


def test_default_tolerance(monkeypatch):
    monkeypatch.delenv("RICCI_LAB_TOL", raising=False)
    assert st.default_tolerance(schwarzschild_exterior()) == st.CLOSED_FORM_TOL
    monkeypatch.setenv("RICCI_LAB_TOL", "3e-7")
    assert st.default_tolerance() == 3e-7


def test_vanishing_potential_rejected():
    ets = schwarzschild_exterior()
    with pytest.raises(ValueError):
        ets.__class__(ets.metric, RadialScalarField.constant(0.0, 2.0, np.inf))
