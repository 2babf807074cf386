import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from colombeau.errors import BadEpsilonOrder, DomainError
from colombeau.genfunc import builtin
from colombeau.physics import (
    ChargeConfig, CompactPoint, compact_two_point_residual, eps_map, exchange_residual, npoint,
    u_compact, verify_compact_two_point, verify_exchange_identity, xi_map,
)

from oracles import EPS_TILDE_AT_0_1


def brute_npoint(g, e, x):
    """Direct product of principal powers, written independently of npoint."""
    if abs(sum(g)) > 1e-12:
        return 0j
    n = len(g)
    val = (2 * math.pi) ** (-n / 2) + 0j
    for j in range(n):
        for k in range(j + 1, n):
            val *= complex(e[j] - e[k], -(x[j] - x[k])) ** (g[j] * g[k])
    return val


def random_config(rng, neutral=True):
    n = rng.randint(2, 6)
    g = [rng.uniform(-1.5, 1.5) for _ in range(n - 1)]
    g.append(-sum(g) if neutral else -sum(g) + rng.choice([-1, 1]) * rng.uniform(0.1, 1))
    e = sorted((rng.uniform(0.01, 1) for _ in range(n)), reverse=True)
    x = [rng.uniform(-5, 5) for _ in range(n)]
    return g, e, x


def test_npoint_examples():
    g = 0.7
    v = npoint(ChargeConfig((-g, g), (0.3, 0.1), (0.5, -0.25)))
    assert v == pytest.approx(complex(0.2, -0.75) ** (-g * g) / (2 * math.pi), rel=1e-14)
    assert npoint(ChargeConfig((1, 1), (0.2, 0.1), (0, 1))) == 0
    four = ChargeConfig((0.5, -0.5, 0.5, -0.5), (0.4, 0.3, 0.2, 0.1), (0, 1, 2, 3))
    assert npoint(four) == pytest.approx(brute_npoint(four.charges, four.epsilons, four.positions), rel=1e-13)


def test_npoint_random_configs():
    rng = random.Random(7)
    for _ in range(100):
        g, e, x = random_config(rng)
        ref = brute_npoint(g, e, x)
        assert abs(npoint(ChargeConfig(g, e, x)) - ref) <= 1e-12 * abs(ref)
        g, e, x = random_config(rng, neutral=False)
        assert npoint(ChargeConfig(g, e, x)) == 0j


def test_npoint_two_point_matches_builtin():
    g2 = 0.45
    kernel = builtin("i_eps_power", {"sign": -1, "lam": g2})
    for x12 in np.linspace(-3, 3, 13):
        v = npoint(ChargeConfig((-math.sqrt(g2), math.sqrt(g2)), (0.3, 0.1), (x12, 0.0)))
        assert v == pytest.approx(kernel(float(x12), 0.2) / (2 * math.pi), rel=1e-13)


def test_bad_epsilon_order():
    with pytest.raises(BadEpsilonOrder):
        ChargeConfig((1, -1), (0.1, 0.2), (0, 1))
    with pytest.raises(BadEpsilonOrder):
        ChargeConfig((1, -1), (0.1, 0.1), (0, 1))
    with pytest.raises(ValueError):
        ChargeConfig((1, -1), (0.2, 0.1), (0,))


@pytest.mark.parametrize("g2", [0.3, 0.5, 1.0, 1.7])
def test_exchange_identity(g2):
    rep = verify_exchange_identity(g2)
    assert rep.passed and rep.checks[0].computed < 1e-12
    assert exchange_residual(g2, grid=[0.0]) == 0.0


def test_maps():
    assert xi_map(0) == 0 and xi_map(2) == pytest.approx(math.pi / 2)
    xs = np.linspace(-50, 50, 11)
    assert np.allclose(2 * np.tan(xi_map(xs) / 2), xs)
    xi, et = eps_map(0, 0.1)
    assert xi == 0 and et == pytest.approx(EPS_TILDE_AT_0_1, rel=1e-14)
    # the chart map solves exp(et - i xi) = (1 + w)/(1 - w)
    x, e = 0.7, 0.05
    xi, et = eps_map(x, e)
    w = complex(e, -x) / 2
    assert cmath.exp(complex(et, -xi)) == pytest.approx((1 + w) / (1 - w), rel=1e-14)
    assert et > 0
    with pytest.raises(DomainError):
        eps_map(3.0, 0.1)


@given(st.floats(-3.1, 3.1), st.floats(-2, 2), st.integers(-3, 3), st.floats(1e-4, 0.5))
def test_winding(xi, lam, n, et):
    a = u_compact(CompactPoint(xi, n, et), lam)
    b = u_compact(CompactPoint(xi, n + 1, et), lam)
    assert abs(b / a - cmath.exp(2j * math.pi * lam)) < 1e-12
    assert abs(abs(a) - 1) < 1e-12


def test_compact_point_and_seam():
    assert u_compact(CompactPoint(0.0, 0, 0.3), 0.77) == pytest.approx(1)
    with pytest.raises(DomainError):
        CompactPoint(4.0)
    # the seam gap is first order in the offset with slope lam tanh(eps_t/2)
    lam, et = 0.3, 0.01
    for d in (1e-3, 1e-4, 1e-5):
        gap = abs(u_compact(CompactPoint(math.pi - d, 0, et), lam)
                  - u_compact(CompactPoint(-math.pi + d, 1, et), lam))
        assert gap == pytest.approx(2 * d * lam * math.tanh(et / 2), rel=1e-5)
    # the compact builtin is the n = 0 chart
    U = builtin("exchange_U_compact", {"lam": lam})
    for xi in (-2.0, 0.4, 3.0):
        assert U(xi, et) == pytest.approx(u_compact(CompactPoint(xi, 0, et), lam), rel=1e-14)


@pytest.mark.parametrize("et", [1e-3, 1e-4, 1e-5])
def test_compact_two_point(et):
    rep = verify_compact_two_point(0.3, 0.5, -0.3, et)
    assert rep.passed and rep.checks[0].computed < 10 * et
    assert compact_two_point_residual(0.3, 0.01, 0.0, 1e-5) < 10 * 1e-5
    assert compact_two_point_residual(0.0, 0.5, -0.3, et) == 0.0


def test_compact_two_point_rejects_point_at_infinity():
    with pytest.raises(DomainError):
        compact_two_point_residual(0.3, math.pi, 0.0, 1e-3)
