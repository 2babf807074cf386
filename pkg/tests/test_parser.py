import math
import random

import pytest
from hypothesis import given

from colombeau import expr as E
from colombeau.expr import Expr
from colombeau.parser import ParseError, format_expr, parse, tokenize

from strategies import exprs, random_expr

x, eps, a, b, c = (E.sym(n) for n in ("x", "eps", "a", "b", "c"))


def node(kind, *args):
    return Expr(kind, args)


PRECEDENCE_CASES = {
    "-x^2": node("neg", node("pow", x, E.const(2))),
    "x^-2": node("pow", x, node("neg", E.const(2))),
    "a^b^c": node("pow", a, node("pow", b, c)),
    "a-b-c": node("sub", node("sub", a, b), c),
    "a/b/c": node("div", node("div", a, b), c),
    "a-b+c": node("add", node("sub", a, b), c),
    "a+b*c": node("add", a, node("mul", b, c)),
    "a*b^c": node("mul", a, node("pow", b, c)),
    "-a*b": node("mul", node("neg", a), b),
    "a*-b": node("mul", a, node("neg", b)),
    "a - -b": node("sub", a, node("neg", b)),
    "(a+b)*c": node("mul", node("add", a, b), c),
    "(-a)^b": node("pow", node("neg", a), b),
    "-a^-b": node("neg", node("pow", a, node("neg", b))),
    "2*pi*i": node("mul", node("mul", E.const(2), E.const(math.pi)), E.const(1j)),
    "sin(x)^2": node("pow", E.sin(x), E.const(2)),
    "bump_d2(x/eps)": E.bump(node("div", x, eps), 2),
}


@pytest.mark.parametrize("text", list(PRECEDENCE_CASES))
def test_precedence(text):
    assert parse(text) == PRECEDENCE_CASES[text]


@pytest.mark.parametrize("text", ["x^2 + 1", "-(x*eps)", "-x^2", "a^b^c", "(a^b)^c",
                                  "(eps - i*x)^(-lam)", "a - (b - c)", "a/(b*c)", "-(-x)"])
def test_format_round_trip_examples(text):
    e = parse(text)
    assert parse(format_expr(e)) == e


def test_minimal_parentheses():
    assert format_expr(parse("((x))+((1))")) == "x + 1"
    assert format_expr(parse("(a*b)*c")) == "a*b*c"
    assert format_expr(parse("a*(b*c)")) == "a*(b*c)"
    assert format_expr(parse("(-x)^2")) == "(-x)^2"


@given(exprs)
def test_round_trip_property(e):
    assert parse(format_expr(e)) == e


def test_round_trip_1000_random_trees():
    rng = random.Random(20240611)
    for _ in range(1000):
        e = random_expr(rng, 5)
        assert parse(format_expr(e)) == e


@pytest.mark.parametrize("text, offset", [
    ("x + ", 4), ("x * (1 + 2", 10), ("2 $ 3", 2), ("sin x", 4), ("foo(x)", 0),
    ("x y", 2), ("", 0), ("x^", 2), ("1.2.3", 3),
])
def test_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.span.start == offset
    assert "^" in info.value.caret()


def test_reserved_names_and_numbers():
    assert parse("i") == E.const(1j) and parse("pi") == E.const(math.pi)
    assert parse("lam").kind == "sym"
    assert parse("1.5e-3") == E.const(1.5e-3)
    assert [t.kind for t in tokenize("sin(x)")] == ["ident", "op", "ident", "op", "end"]
    with pytest.raises(ParseError):
        parse("x²")
