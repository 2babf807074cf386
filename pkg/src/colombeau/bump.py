"""The standard compactly supported bump exp(-1/(1-t^2)) and its cumulative.

Derivatives are written as P_n(t) / (1-t^2)^(2n) * exp(-1/(1-t^2)) with
polynomials P_n from the recursion

    P_{n+1} = P_n' (1-t^2)^2 + 4 n t (1-t^2) P_n - 2 t P_n,   P_0 = 1,

and evaluated in log form so that the flat edges never produce 0 * inf.
The normalised cumulative integral (a smooth step from 0 to 1) is a piecewise
Chebyshev series obtained by integrating a Chebyshev interpolant of the bump.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as P

_STEP_PIECES = 64
_STEP_DEGREE = 40


@lru_cache(maxsize=None)
def derivative_polynomial(n: int) -> np.ndarray:
    """Power-series coefficients of P_n (lowest degree first)."""
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    p = np.array([1.0])
    q = np.array([1.0, 0.0, -1.0])  # 1 - t^2
    for m in range(n):
        term1 = P.polymul(P.polyder(p), P.polymul(q, q)) if len(p) > 1 else np.zeros(1)
        term2 = P.polymul(np.array([0.0, 4.0 * m]), P.polymul(q, p))
        term3 = P.polymul(np.array([0.0, -2.0]), p)
        p = P.polyadd(P.polyadd(term1, term2), term3)
    return p


def bump(t, order: int = 0):
    """n-th derivative of exp(-1/(1-t^2)), extended by zero for |t| >= 1."""
    t = np.asarray(t, dtype=complex)
    if np.any(t.imag != 0):
        raise ValueError("bump is only defined for real arguments")
    tr = t.real
    out = np.zeros(tr.shape, dtype=float)
    inside = np.abs(tr) < 1.0
    if np.any(inside):
        s = tr[inside]
        q = 1.0 - s * s
        with np.errstate(under="ignore"):
            weight = np.exp(-1.0 / q - 2.0 * order * np.log(q))
        out[inside] = P.polyval(s, derivative_polynomial(order)) * weight
    return out.astype(complex)


def _bump_real(t):
    return bump(t).real


@lru_cache(maxsize=None)
def bump_mass() -> float:
    """Integral of exp(-1/(1-t^2)) over [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(40)
    edges = np.linspace(-1.0, 1.0, 257)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        total += half * np.dot(weights, _bump_real(mid + half * nodes))
    return float(total)


@lru_cache(maxsize=None)
def _step_table():
    edges = np.linspace(-1.0, 1.0, _STEP_PIECES + 1)
    mass = bump_mass()
    pieces = []
    offset = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        interp = C.Chebyshev.interpolate(lambda s: _bump_real(mid + half * s) / mass,
                                         _STEP_DEGREE)
        prim = interp.integ(lbnd=-1.0) * half
        pieces.append((offset, prim))
        offset += prim(1.0)
    return edges, pieces, offset


def smoothstep(t):
    """Cumulative integral of the unit-mass bump: 0 for t <= -1, 1 for t >= 1."""
    t = np.asarray(t, dtype=complex)
    if np.any(t.imag != 0):
        raise ValueError("smoothstep is only defined for real arguments")
    tr = t.real
    edges, pieces, _ = _step_table()
    out = np.where(tr >= 1.0, 1.0, 0.0)
    inside = np.abs(tr) < 1.0
    if np.any(inside):
        s = tr[inside]
        idx = np.clip(np.searchsorted(edges, s, side="right") - 1, 0, len(pieces) - 1)
        vals = np.empty_like(s)
        for j in np.unique(idx):
            sel = idx == j
            a, b = edges[j], edges[j + 1]
            offset, prim = pieces[j]
            vals[sel] = offset + prim((2.0 * s[sel] - a - b) / (b - a))
        out[inside] = vals
    return out.astype(complex)
