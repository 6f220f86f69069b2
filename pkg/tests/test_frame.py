import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from ricci_lab import fd_oracle
from ricci_lab.errors import DimensionError, DomainError, NonpositiveLapse, SingularWarp
from ricci_lab.fields import RadialScalarField, T
from ricci_lab.frame import (Ansatz, WarpedProductMetric, frame_curvature,
                             hessian_laplacian_radial)

from helpers import oracle_errors, random_warped_metric


def warped(expr, n, k0=1.0, lo=0.0, hi=3.0):
    return WarpedProductMetric(n, RadialScalarField.from_expr(expr, lo, hi), k0)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("expr,k0,ric", [
    (sp.sin(T), 1.0, 1.0),    # round sphere
    (T, 1.0, 0.0),            # flat, polar
    (sp.sinh(T), 1.0, -1.0),  # hyperbolic space
    (sp.Integer(1), 0.0, 0.0),  # flat cylinder
])
def test_space_forms(n, expr, k0, ric):
    fc = frame_curvature(warped(expr, n, k0, 0.1, 3.0), 0.7)
    assert fc.R_rad == pytest.approx(ric * (n - 1), abs=1e-13)
    assert fc.R_tan == pytest.approx(ric * (n - 1), abs=1e-13)
    assert fc.s == pytest.approx(ric * n * (n - 1), abs=1e-12)


def test_product_with_sphere_fiber():
    # R x S^{n-1}: no radial curvature, tangential Ricci n-2
    fc = frame_curvature(warped(sp.Integer(1), 4), 1.0)
    assert fc.R_rad == 0.0
    assert fc.R_tan == pytest.approx(2.0)


def test_conformal_ansatz_schwarzschild():
    F = RadialScalarField.from_expr(sp.sqrt(1 - 2 / T), 2.0, math.inf)
    m = WarpedProductMetric(3, F, 1.0, Ansatz.CONFORMAL_RADIAL)
    for t in (2.5, 4.0, 9.0):
        fc = frame_curvature(m, t)
        assert fc.R_rad == pytest.approx(-2 / t ** 3, abs=1e-15)
        assert fc.R_tan == pytest.approx(1 / t ** 3, abs=1e-15)
        assert abs(fc.s) < 1e-15


def test_hessian_of_linear_potential_on_flat_space():
    m = warped(T, 3)
    f = RadialScalarField.from_expr(T ** 2, 0.0, 3.0)
    rad, tan, lap = hessian_laplacian_radial(m, f, 1.3)
    # |x|^2 on R^3: Hessian 2 g, Laplacian 6
    assert (rad, tan, lap) == pytest.approx((2.0, 2.0, 6.0), abs=1e-14)


def test_oracle_agrees_on_sphere_chart():
    res = fd_oracle.oracle_at(fd_oracle.sphere_stereographic_chart(3), np.array([0.2, -0.1, 0.3]))
    assert np.allclose(res.ricci_mixed, 2 * np.eye(3), atol=1e-6)
    assert res.s == pytest.approx(6.0, abs=1e-6)


def test_oracle_second_order():
    rng = np.random.default_rng(7)
    metric, t = random_warped_metric(rng)
    e3, e4 = oracle_errors(metric, t)
    assert e4 < 1e-5
    assert math.log10(e3 / e4) > 1.8


def test_five_point_stencil_is_sharper():
    m = warped(1.5 + 0.3 * sp.sin(T), 4, 1.0)
    fc = frame_curvature(m, 1.1)
    r3 = fd_oracle.ansatz_frame_ricci(m, 1.1, h=1e-3, stencil=3)[2]
    r5 = fd_oracle.ansatz_frame_ricci(m, 1.1, h=1e-3, stencil=5)[2]
    assert abs(r5 - fc.s) < abs(r3 - fc.s) / 100


def test_oracle_frame_riemann_sectional():
    m = warped(sp.sin(T), 4)
    _, _, _, res = fd_oracle.ansatz_frame_ricci(m, 0.9, h=1e-4)
    R = fd_oracle.frame_riemann(res)
    for i, j in ((0, 1), (1, 2), (2, 3)):
        assert R[i, j, i, j] == pytest.approx(1.0, abs=1e-6)


# errors ------------------------------------------------------------------


def test_dimension_limits():
    b = RadialScalarField.from_expr(T, 0.0, 1.0)
    with pytest.raises(DimensionError):
        WarpedProductMetric(2, b)
    with pytest.raises(DimensionError):
        WarpedProductMetric(7, b)
    with pytest.raises(DimensionError):
        WarpedProductMetric(4, b, 1.0, Ansatz.CONFORMAL_RADIAL)


def test_domain_and_guards():
    m = warped(T, 3, lo=0.0, hi=1.0)
    with pytest.raises(DomainError):
        frame_curvature(m, 1.5)
    with pytest.raises(SingularWarp):
        frame_curvature(m, 1e-9)
    F = RadialScalarField.from_expr(sp.sqrt(1 - 2 / T), 2.0, math.inf)
    c = WarpedProductMetric(3, F, 1.0, Ansatz.CONFORMAL_RADIAL)
    with pytest.raises(NonpositiveLapse):
        frame_curvature(c, 2.0)


def test_unbound_symbol_rejected():
    with pytest.raises(ValueError):
        RadialScalarField.from_expr("a*t", 0, 1)


# properties ----------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(a=st.floats(1.0, 2.0), c=st.floats(-0.3, 0.3), w=st.floats(0.5, 2.0),
       k0=st.sampled_from([-1.0, 0.0, 1.0]), n=st.integers(3, 6), lam=st.floats(0.25, 4.0))
def test_homothety_scales_curvature(a, c, w, k0, n, lam):
    """g -> lam^2 g: t -> lam t, b -> lam b(t/lam); Ricci eigenvalues scale by 1/lam^2."""
    expr = a + c * sp.sin(w * T)
    m1 = warped(expr, n, k0, 0.0, 2.0)
    m2 = WarpedProductMetric(n, RadialScalarField.from_expr(lam * expr.subs(T, T / lam),
                                                            0.0, 2.0 * lam), k0)
    f1, f2 = frame_curvature(m1, 0.8), frame_curvature(m2, 0.8 * lam)
    scale = 1 + abs(f1.s)
    assert f2.R_rad * lam ** 2 == pytest.approx(f1.R_rad, abs=1e-12 * scale)
    assert f2.R_tan * lam ** 2 == pytest.approx(f1.R_tan, abs=1e-12 * scale)


@settings(max_examples=25, deadline=None)
@given(a=st.floats(1.0, 2.0), c=st.floats(-0.3, 0.3), w=st.floats(0.5, 2.0),
       k0=st.sampled_from([-1.0, 0.0, 1.0]), n=st.integers(3, 6), t=st.floats(0.1, 1.9))
def test_trace_and_sectional_consistency(a, c, w, k0, n, t):
    fc = frame_curvature(warped(a + c * sp.sin(w * T), n, k0, 0.0, 2.0), t)
    assert fc.s == pytest.approx(fc.R_rad + (n - 1) * fc.R_tan, rel=1e-14, abs=1e-14)
    assert fc.R_rad == pytest.approx((n - 1) * fc.sec_rad, rel=1e-14, abs=1e-14)
