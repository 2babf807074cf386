"""Random expression trees for property tests."""

from __future__ import annotations

import math
import random

from hypothesis import strategies as st

from colombeau import expr as E
from colombeau.expr import Expr

UNARY = ("exp", "log", "logabs", "sin", "cos", "tan", "sinh", "cosh", "tanh",
         "sqrt", "conj", "bump", "smoothstep")
SYMBOLS = ("x", "eps", "a", "b")

# constants that survive format -> parse unchanged
parseable_consts = st.one_of(
    st.integers(0, 1000).map(float),
    st.floats(0, 1e6, allow_nan=False, allow_infinity=False),
    st.sampled_from([math.pi, 1j, 0.5, 1e-7, 2.5e12]),
)


def _node(children):
    unary = st.tuples(st.sampled_from(UNARY), children).map(lambda t: Expr(t[0], (t[1],)))
    bumps = st.tuples(st.integers(1, 3), children).map(lambda t: E.bump(t[1], t[0]))
    neg = children.map(lambda c: Expr("neg", (c,)))
    binary = st.tuples(st.sampled_from(E.BINARY), children, children).map(
        lambda t: Expr(t[0], (t[1], t[2])))
    return st.one_of(unary, bumps, neg, binary)


exprs = st.recursive(
    st.one_of(parseable_consts.map(E.const), st.sampled_from(SYMBOLS).map(E.sym)),
    _node, max_leaves=12,
)


def random_expr(rng: random.Random, depth: int = 4) -> Expr:
    """Plain-random counterpart of ``exprs`` (seeded, for fixed-size sweeps)."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return E.sym(rng.choice(SYMBOLS))
        return E.const(rng.choice([float(rng.randint(0, 99)), rng.uniform(0, 10),
                                   math.pi, 1j, 1e-9]))
    r = rng.random()
    if r < 0.35:
        kind = rng.choice(UNARY)
        arg = random_expr(rng, depth - 1)
        return E.bump(arg, rng.randint(0, 2)) if kind == "bump" else Expr(kind, (arg,))
    if r < 0.45:
        return Expr("neg", (random_expr(rng, depth - 1),))
    return Expr(rng.choice(E.BINARY), (random_expr(rng, depth - 1), random_expr(rng, depth - 1)))


# smooth real-analytic expressions in x only, for derivative checks
_smooth_leaf = st.one_of(st.just(E.X), st.floats(-2, 2, allow_nan=False).map(E.const))


def _smooth_node(children):
    unary = st.tuples(st.sampled_from(["sin", "cos", "exp", "tanh"]), children).map(
        lambda t: Expr(t[0], (t[1],)))
    binary = st.tuples(st.sampled_from(["add", "sub", "mul"]), children, children).map(
        lambda t: Expr(t[0], (t[1], t[2])))
    small_pow = st.tuples(children, st.integers(2, 3)).map(lambda t: t[0] ** E.const(t[1]))
    return st.one_of(unary, binary, small_pow)


smooth_exprs = st.recursive(_smooth_leaf, _smooth_node, max_leaves=6)
