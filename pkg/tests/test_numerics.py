import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate as sint
from scipy.special import roots_legendre

from colombeau import testfunctions as T
from colombeau.bump import bump, bump_mass, derivative_polynomial, smoothstep
from colombeau.errors import QuadratureBudgetExceeded
from colombeau.quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, integrate

from oracles import BUMP_MASS, HALF_SQRT_PI, SQRT_PI


def test_rule_exactness():
    # Kronrod exact through degree 22, Gauss through degree 13
    for deg in range(23):
        exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
        assert KRONROD_WEIGHTS @ NODES ** deg == pytest.approx(exact, abs=1e-14)
        if deg <= 13:
            assert GAUSS_WEIGHTS @ NODES ** deg == pytest.approx(exact, abs=1e-14)
    gx, _ = roots_legendre(7)
    assert np.allclose(np.sort(NODES[GAUSS_WEIGHTS > 0]), gx, atol=1e-15)


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=8), st.floats(-2, 0), st.floats(0.1, 3))
def test_polynomials_integrated_exactly(coeffs, a, w):
    b = a + w
    p = np.polynomial.Polynomial(coeffs)
    exact = p.integ()(b) - p.integ()(a)
    res = integrate(p, [a, b])
    assert abs(res.value - exact) <= 1e-12 * max(1.0, abs(exact))


def test_singular_and_oscillatory_integrands():
    res = integrate(lambda x: 1 / np.sqrt(x), [0, 1], tol_rel=1e-8)
    assert res.value.real == pytest.approx(2.0, rel=1e-6)
    res = integrate(lambda x: np.cos(200 * x), [0, 1], tol_rel=1e-12)
    assert res.value.real == pytest.approx(math.sin(200) / 200, abs=1e-13)
    ref = sint.quad(lambda x: np.exp(-x * x) * np.log(abs(x) + 1e-300), -6, 6, points=[0], limit=200)[0]
    assert integrate(lambda x: np.exp(-x * x) * np.log(np.abs(x)), [-6, 0, 6]).value.real == pytest.approx(ref, rel=1e-9)


def test_budget_exceeded_carries_partial_result():
    with pytest.raises(QuadratureBudgetExceeded) as info:
        integrate(lambda x: np.sin(1 / x), [1e-9, 1], tol_rel=1e-14, budget=3000)
    assert info.value.evaluations <= 3000


def test_bump_mass_and_shape():
    assert bump_mass() == pytest.approx(BUMP_MASS, rel=1e-15)
    scipy_mass = sint.quad(lambda t: math.exp(-1 / (1 - t * t)), -1, 1, epsabs=0, epsrel=1e-13)[0]
    assert bump_mass() == pytest.approx(scipy_mass, rel=1e-13)
    t = np.array([-1.5, -1.0, 0.0, 0.5, 1.0])
    assert np.allclose(bump(t), [0, 0, math.exp(-1), math.exp(-1 / 0.75), 0], rtol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bump_derivatives_by_finite_differences(n):
    t = np.linspace(-0.9, 0.9, 13)
    h = 1e-4
    fd = (bump(t + h, n - 1) - bump(t - h, n - 1)) / (2 * h)
    assert np.allclose(bump(t, n), fd, atol=1e-6 * 10 ** n)
    assert len(derivative_polynomial(n)) > 0


def test_smoothstep_is_normalised_cumulative_bump():
    t = np.linspace(-1, 1, 41)
    ref = np.array([sint.quad(lambda s: math.exp(-1 / (1 - s * s)), -1, v, epsabs=1e-15)[0]
                    if v > -1 else 0.0 for v in t]) / BUMP_MASS
    assert np.max(np.abs(smoothstep(t) - ref)) < 1e-10
    assert smoothstep(np.array([-3.0]))[0] == 0 and smoothstep(np.array([3.0]))[0] == 1
    # monotone
    s = smoothstep(np.linspace(-1, 1, 2001))
    assert np.all(np.diff(s) >= -1e-15)


def test_default_test_functions():
    phis = {p.name: p for p in T.default_test_functions()}
    assert list(phis) == ["gauss", "bump", "bump-shifted", "xgauss", "bump-narrow"]
    assert phis["gauss"].integral.real == pytest.approx(SQRT_PI, rel=1e-12)
    assert phis["xgauss"].integral.real == pytest.approx(0, abs=1e-14)
    assert phis["bump"].integral.real == pytest.approx(BUMP_MASS, rel=1e-12)
    assert phis["bump-narrow"].integral.real == pytest.approx(BUMP_MASS / 2, rel=1e-12)
    # derivatives vanish at the support ends of bumps
    for name in ("bump", "bump-shifted", "bump-narrow"):
        p = phis[name]
        for k in range(4):
            assert np.all(p(np.array(p.support), k) == 0)
    assert T.mollifier().integral.real == pytest.approx(1.0, abs=1e-12)
    assert T.by_name("gaussian:0,1").integral.real == pytest.approx(SQRT_PI, rel=1e-12)
    assert T.by_name("bump:0,1")(0.0) == pytest.approx(math.exp(-1))
    with pytest.raises(KeyError):
        T.by_name("triangle")
    half = T.poly_times_gaussian([1.0], 1.0)
    assert integrate(lambda x: half(x), [0, 12]).value.real == pytest.approx(HALF_SQRT_PI, rel=1e-12)
