"""Immutable expression trees over complex scalars.

An :class:`Expr` is the representative u_eps(x) of a generalized function:
a tree over the reserved symbols ``x`` and ``eps`` plus free parameters.
Trees are hash-consed only in the sense that hashes are computed once at
construction, so they can be used as dictionary keys cheaply.

All powers and logarithms use the principal branch, arg in (-pi, pi].
Evaluation is vectorised: any binding may be a numpy array.
"""

from __future__ import annotations

import math
from typing import Mapping, Union

import numpy as np

from . import bump as _bump
from .errors import DomainError, NonDifferentiable, UnboundSymbol

Number = Union[int, float, complex]

BINARY = ("add", "sub", "mul", "div", "pow")
FUNCTIONS = (
    "exp", "log", "logabs", "sin", "cos", "tan", "sinh", "cosh", "tanh",
    "sqrt", "conj", "bump", "smoothstep",
)
KINDS = ("const", "sym", "neg") + BINARY + FUNCTIONS


class Expr:
    """A node of an immutable expression tree.

    ``kind`` is one of :data:`KINDS`; ``args`` holds the child nodes.
    Constants carry ``value``, symbols carry ``name`` and ``bump`` nodes carry
    their derivative ``order``.
    """

    __slots__ = ("kind", "args", "value", "name", "order", "_hash", "_free")

    def __init__(self, kind: str, args=(), value=None, name=None, order=0):
        if kind not in KINDS:
            raise ValueError(f"unknown node kind {kind!r}")
        args = tuple(args)
        for a in args:
            if not isinstance(a, Expr):
                raise TypeError(f"child of {kind} node is not an Expr: {a!r}")
        if kind == "sym" and not name:
            raise ValueError("symbol nodes need a nonempty name")
        if kind == "const":
            value = complex(value)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "_hash", hash((kind, value, name, order, args)))
        object.__setattr__(self, "_free", None)

    def __setattr__(self, key, value):
        raise AttributeError("Expr is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expr) or self._hash != other._hash:
            return False
        return (self.kind == other.kind and self.value == other.value
                and self.name == other.name and self.order == other.order
                and self.args == other.args)

    def __repr__(self):
        from .parser import format_expr
        return f"Expr({format_expr(self)!r})"

    @property
    def free_symbols(self) -> frozenset:
        if self._free is None:
            if self.kind == "sym":
                free = frozenset((self.name,))
            else:
                free = frozenset().union(*(a.free_symbols for a in self.args))
            object.__setattr__(self, "_free", free)
        return self._free

    def is_const(self, value=None) -> bool:
        return self.kind == "const" and (value is None or self.value == value)

    # arithmetic sugar, mostly used by builtins and tests
    def __add__(self, other): return Expr("add", (self, as_expr(other)))
    def __radd__(self, other): return Expr("add", (as_expr(other), self))
    def __sub__(self, other): return Expr("sub", (self, as_expr(other)))
    def __rsub__(self, other): return Expr("sub", (as_expr(other), self))
    def __mul__(self, other): return Expr("mul", (self, as_expr(other)))
    def __rmul__(self, other): return Expr("mul", (as_expr(other), self))
    def __truediv__(self, other): return Expr("div", (self, as_expr(other)))
    def __rtruediv__(self, other): return Expr("div", (as_expr(other), self))
    def __pow__(self, other): return Expr("pow", (self, as_expr(other)))
    def __rpow__(self, other): return Expr("pow", (as_expr(other), self))
    def __neg__(self): return Expr("neg", (self,))


def const(value: Number) -> Expr:
    return Expr("const", value=value)


def sym(name: str) -> Expr:
    return Expr("sym", name=name)


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, float, complex, np.number)):
        return const(v)
    raise TypeError(f"cannot convert {v!r} to Expr")


def _func(kind):
    def build(u) -> Expr:
        return Expr(kind, (as_expr(u),))
    build.__name__ = kind
    return build


exp = _func("exp")
log = _func("log")
logabs = _func("logabs")
sin = _func("sin")
cos = _func("cos")
tan = _func("tan")
sinh = _func("sinh")
cosh = _func("cosh")
tanh = _func("tanh")
sqrt = _func("sqrt")
conj = _func("conj")
smoothstep = _func("smoothstep")


def bump(u, order: int = 0) -> Expr:
    return Expr("bump", (as_expr(u),), order=order)


X = sym("x")
EPS = sym("eps")
I = const(1j)
PI = const(math.pi)
ZERO = const(0)
ONE = const(1)
TWO = const(2)


# ---------------------------------------------------------------- evaluation

def _canon(z):
    # adding +0j turns a -0.0 imaginary part into +0.0, so the principal
    # log of a negative real is +i*pi rather than -i*pi
    return np.asarray(z, dtype=complex) + 0j


def _check_nonzero(z, what):
    if np.any(z == 0):
        raise DomainError(f"{what} of zero")


def _int_power(b, n: int):
    result = np.ones_like(b)
    base = b
    k = abs(n)
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    if n < 0:
        _check_nonzero(b, "negative power")
        result = 1.0 / result
    return result


def _power(b, c, c_node: Expr):
    b = _canon(b)
    if c_node.kind == "const" and c_node.value.imag == 0:
        cr = c_node.value.real
        if cr == int(cr) and abs(cr) <= 64:
            return _int_power(b, int(cr))
    c = np.asarray(c, dtype=complex)
    zero = b == 0
    if np.any(zero):
        bad = zero & (np.broadcast_to(c, zero.shape).real <= 0) & (np.broadcast_to(c, zero.shape) != 0)
        if np.any(bad):
            raise DomainError("zero raised to an exponent with non-positive real part")
        safe = np.where(zero, 1.0, b)
        out = np.exp(c * np.log(safe))
        return np.where(zero, np.where(c == 0, 1.0 + 0j, 0j), out)
    return np.exp(c * np.log(b))


def _logabs(z):
    z = np.asarray(z, dtype=complex)
    _check_nonzero(z, "logabs")
    return np.log(np.abs(z)).astype(complex)


def _log(z):
    z = _canon(z)
    _check_nonzero(z, "log")
    return np.log(z)


def _div(a, b):
    b = np.asarray(b, dtype=complex)
    _check_nonzero(b, "division")
    return a / b


_UNARY = {
    "neg": np.negative,
    "exp": np.exp,
    "log": _log,
    "logabs": _logabs,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "sqrt": lambda z: np.sqrt(_canon(z)),
    "conj": np.conj,
    "smoothstep": _bump.smoothstep,
}

_BINARY = {
    "add": np.add,
    "sub": np.subtract,
    "mul": np.multiply,
    "div": _div,
}


def _eval(e: Expr, b: Mapping, memo: dict):
    key = id(e)
    if key in memo:
        return memo[key]
    kind = e.kind
    if kind == "const":
        out = np.asarray(e.value, dtype=complex)
    elif kind == "sym":
        if e.name not in b:
            raise UnboundSymbol(e.name)
        out = np.asarray(b[e.name], dtype=complex)
    elif kind in _BINARY:
        out = _BINARY[kind](_eval(e.args[0], b, memo), _eval(e.args[1], b, memo))
    elif kind == "pow":
        out = _power(_eval(e.args[0], b, memo), _eval(e.args[1], b, memo), e.args[1])
    elif kind == "bump":
        arg = _eval(e.args[0], b, memo)
        if np.any(np.asarray(arg).imag != 0):
            raise DomainError("bump of a non-real argument")
        out = _bump.bump(arg, e.order)
    else:
        arg = _eval(e.args[0], b, memo)
        if kind == "smoothstep" and np.any(np.asarray(arg).imag != 0):
            raise DomainError("smoothstep of a non-real argument")
        out = _UNARY[kind](arg)
    memo[key] = out
    return out


def evaluate(e: Expr, b: Mapping[str, Number] | None = None):
    """Evaluate ``e`` under the binding ``b``.

    Returns a Python complex when every bound value is a scalar, otherwise a
    complex numpy array broadcast over the bound arrays.
    """
    with np.errstate(all="ignore"):
        out = _eval(e, b or {}, {})
    if np.ndim(out) == 0:
        return complex(out)
    return out


# ------------------------------------------------------------ smart builders

def _is0(e): return e.kind == "const" and e.value == 0
def _is1(e): return e.kind == "const" and e.value == 1


def _add(a, b):
    if _is0(a): return b
    if _is0(b): return a
    return Expr("add", (a, b))


def _sub(a, b):
    if _is0(b): return a
    if _is0(a): return _neg(b)
    return Expr("sub", (a, b))


def _neg(a):
    if a.kind == "const": return const(-a.value)
    if a.kind == "neg": return a.args[0]
    return Expr("neg", (a,))


def _mul(a, b):
    if _is0(a) or _is0(b): return ZERO
    if _is1(a): return b
    if _is1(b): return a
    if a.kind == "const" and b.kind == "const": return const(a.value * b.value)
    return Expr("mul", (a, b))


def _div_(a, b):
    if _is0(a): return ZERO
    if _is1(b): return a
    return Expr("div", (a, b))


def _pow(a, c):
    if _is0(c): return ONE
    if _is1(c): return a
    return Expr("pow", (a, c))


# ----------------------------------------------------------- differentiation

def differentiate(e: Expr, name: str) -> Expr:
    """Exact symbolic derivative of ``e`` with respect to the symbol ``name``.

    ``logabs(u)`` differentiates to u'/u, valid away from u = 0.
    Raises :class:`NonDifferentiable` when a ``conj`` node depends on ``name``.
    """
    memo: dict = {}
    return _diff(e, name, memo)


def _diff(e: Expr, v: str, memo: dict) -> Expr:
    if v not in e.free_symbols:
        return ZERO
    key = id(e)
    if key in memo:
        return memo[key]
    k = e.kind
    a = e.args
    if k == "sym":
        d = ONE
    elif k == "add":
        d = _add(_diff(a[0], v, memo), _diff(a[1], v, memo))
    elif k == "sub":
        d = _sub(_diff(a[0], v, memo), _diff(a[1], v, memo))
    elif k == "neg":
        d = _neg(_diff(a[0], v, memo))
    elif k == "mul":
        d = _add(_mul(_diff(a[0], v, memo), a[1]), _mul(a[0], _diff(a[1], v, memo)))
    elif k == "div":
        num, den = a
        d = _sub(_div_(_diff(num, v, memo), den),
                 _div_(_mul(num, _diff(den, v, memo)), _pow(den, const(2))))
    elif k == "pow":
        base, ex = a
        db = _diff(base, v, memo)
        if v not in ex.free_symbols:
            lowered = const(ex.value - 1) if ex.kind == "const" else _sub(ex, ONE)
            d = _mul(_mul(ex, _pow(base, lowered)), db)
        else:
            inner = _add(_mul(_diff(ex, v, memo), log(base)), _div_(_mul(ex, db), base))
            d = _mul(e, inner)
    else:
        u = a[0]
        du = _diff(u, v, memo)
        if k == "exp":
            outer = e
        elif k in ("log", "logabs"):
            d = _div_(du, u)
            memo[key] = d
            return d
        elif k == "sin":
            outer = cos(u)
        elif k == "cos":
            outer = _neg(sin(u))
        elif k == "tan":
            outer = _div_(ONE, _pow(cos(u), const(2)))
        elif k == "sinh":
            outer = cosh(u)
        elif k == "cosh":
            outer = sinh(u)
        elif k == "tanh":
            outer = _sub(ONE, _pow(tanh(u), const(2)))
        elif k == "sqrt":
            outer = _div_(ONE, _mul(const(2), e))
        elif k == "bump":
            outer = bump(u, e.order + 1)
        elif k == "smoothstep":
            outer = _mul(const(1.0 / _bump.bump_mass()), bump(u))
        elif k == "conj":
            raise NonDifferentiable(f"conj blocks differentiation with respect to {v!r}")
        else:  # pragma: no cover - KINDS is closed
            raise AssertionError(k)
        d = _mul(du, outer)
    memo[key] = d
    return d


# --------------------------------------------------------------- substitution

def substitute(e: Expr, name: str, replacement: Expr) -> Expr:
    """Replace every occurrence of the symbol ``name`` by ``replacement``."""
    replacement = as_expr(replacement)
    memo: dict = {}

    def go(node: Expr) -> Expr:
        if name not in node.free_symbols:
            return node
        if node.kind == "sym":
            return replacement
        key = id(node)
        if key not in memo:
            memo[key] = Expr(node.kind, tuple(go(c) for c in node.args),
                             node.value, node.name, node.order)
        return memo[key]

    return go(e)


def bind(e: Expr, params: Mapping[str, Number]) -> Expr:
    """Substitute constants for every parameter in ``params``."""
    for name, value in params.items():
        e = substitute(e, name, const(value))
    return e


# ----------------------------------------------------------------- simplify

def _fold(e: Expr) -> Expr:
    try:
        v = evaluate(e)
    except (DomainError, ValueError):
        return e
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        return e
    return const(v)


def _split_pow(e: Expr):
    if e.kind == "pow":
        return e.args[0], e.args[1]
    return e, ONE


def _squared(e: Expr, fn: str):
    if e.kind == "pow" and e.args[0].kind == fn and _is_two(e.args[1]):
        return e.args[0].args[0]
    return None


def _is_two(e: Expr) -> bool:
    return e.kind == "const" and e.value == 2


def _pythagorean(l: Expr, r: Expr) -> bool:
    """sin(u)^2 + cos(u)^2 in either order."""
    for f, g in (("sin", "cos"), ("cos", "sin")):
        u = _squared(l, f)
        if u is not None and u == _squared(r, g):
            return True
    return False


def _rewrite(e: Expr) -> Expr:
    k = e.kind
    a = e.args
    if k in ("const", "sym"):
        return e
    if all(c.kind == "const" for c in a):
        return _fold(e)
    if k == "add":
        if _is0(a[0]): return a[1]
        if _is0(a[1]): return a[0]
        if _pythagorean(*a): return ONE
    elif k == "sub":
        if _is0(a[1]): return a[0]
        if _is0(a[0]): return _neg(a[1])
        if a[0] == a[1]: return ZERO
    elif k == "neg":
        if a[0].kind == "neg": return a[0].args[0]
    elif k == "mul":
        l, r = a
        if _is0(l) or _is0(r): return ZERO
        if _is1(l): return r
        if _is1(r): return l
        # c1 * (c2 * u) -> (c1 c2) * u
        if l.kind == "const" and r.kind == "mul" and r.args[0].kind == "const":
            return Expr("mul", (const(l.value * r.args[0].value), r.args[1]))
        if r.kind == "const":
            return Expr("mul", (r, l))
        if l == r:
            return Expr("pow", (l, TWO))
        if r.kind == "div" and _is1(r.args[0]) and r.args[1] == l: return ONE
        if l.kind == "div" and _is1(l.args[0]) and l.args[1] == r: return ONE
        # same base: b^c * b^d = b^(c+d) holds exactly for principal powers
        (b1, c1), (b2, c2) = _split_pow(l), _split_pow(r)
        if b1 == b2 and (l.kind == "pow" or r.kind == "pow"):
            return Expr("pow", (b1, Expr("add", (c1, c2))))
    elif k == "div":
        n, d = a
        if _is0(n): return ZERO
        if _is1(d): return n
        if n == d: return ONE
        (b1, c1), (b2, c2) = _split_pow(n), _split_pow(d)
        if b1 == b2 and (n.kind == "pow" or d.kind == "pow"):
            return Expr("pow", (b1, Expr("sub", (c1, c2))))
    elif k == "pow":
        b, c = a
        if _is0(c): return ONE
        if _is1(c): return b
        if _is1(b): return ONE
    elif k == "exp":
        if a[0].kind == "log": return a[0].args[0]
    return e


def simplify(e: Expr) -> Expr:
    """Conservative, terminating rewrite to a fixpoint.

    Rules: constant folding, 0/1 identities, syntactic cancellation
    (p - p, p / p, p * (1/p)), merging of powers with identical bases,
    sin(u)^2 + cos(u)^2 -> 1, exp(log(u)) -> u and collapse of double
    negation. No expansion or
    factoring is attempted.
    """
    for _ in range(50):
        memo: dict = {}

        def go(node: Expr) -> Expr:
            key = id(node)
            if key in memo:
                return memo[key]
            if node.args:
                kids = tuple(go(c) for c in node.args)
                if any(k is not c for k, c in zip(kids, node.args)):
                    node = Expr(node.kind, kids, node.value, node.name, node.order)
            out = _rewrite(node)
            memo[key] = out
            return out

        new = go(e)
        if new == e:
            return new
        e = new
    return e


def size(e: Expr) -> int:
    """Number of distinct nodes (shared subtrees counted once)."""
    seen = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if id(n) in seen:
            continue
        seen.add(id(n))
        stack.extend(n.args)
    return len(seen)
