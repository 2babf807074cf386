"""Generalized functions as representative families u_eps(x).

A :class:`GenFunc` stands for the class of its representative in the
Colombeau algebra G(R) = E(R)/N(R). All algebra is componentwise on the
representatives; equality in G is tested empirically by :func:`equal_in_g`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Mapping, Sequence

import numpy as np

from . import expr as E
from .errors import (
    BadMollifier, DomainError, DomainProbeFailure, MissingParam, ParamClash,
    UnboundSymbol, UnknownBuiltin, UnsupportedTarget,
)
from .expr import EPS, Expr, I, PI, X
from .parser import format_expr, parse
from .testfunctions import TestFunction, mollifier as standard_mollifier

PROBE_X = np.linspace(-10.0, 10.0, 401)
PROBE_EPS = (1.0, 0.1, 0.01)
RESERVED = frozenset({"x", "eps"})


@dataclass(frozen=True, eq=False)
class GenFunc:
    rep: Expr
    params: Mapping[str, complex] = field(default_factory=dict)
    singular_points: tuple[float, ...] = (0.0,)
    label: str = ""

    @cached_property
    def bound(self) -> Expr:
        """The representative with every parameter replaced by its value."""
        return E.bind(self.rep, self.params)

    def __call__(self, x, eps):
        return E.evaluate(self.bound, {"x": x, "eps": eps})

    def __str__(self):
        return self.label or format_expr(self.rep)

    # operator sugar mirroring the module functions
    def __add__(self, other): return add(self, _lift(other))
    def __radd__(self, other): return add(_lift(other), self)
    def __sub__(self, other): return sub(self, _lift(other))
    def __rsub__(self, other): return sub(_lift(other), self)
    def __mul__(self, other):
        if isinstance(other, GenFunc):
            return mul(self, other)
        return scale(other, self)
    def __rmul__(self, other): return scale(other, self)
    def __neg__(self): return scale(-1, self)


def _lift(v) -> GenFunc:
    return v if isinstance(v, GenFunc) else constant(v)


def _probe(rep: Expr, what: str):
    xs = PROBE_X
    for eps in PROBE_EPS:
        try:
            vals = E.evaluate(rep, {"x": xs, "eps": eps})
        except DomainError as exc:
            raise DomainProbeFailure(f"{what}: {exc} (eps={eps})") from exc
        vals = np.broadcast_to(vals, xs.shape)
        if not np.all(np.isfinite(vals)):
            bad = xs[~np.isfinite(vals)][0]
            raise DomainProbeFailure(f"{what}: non-finite value at x={bad}, eps={eps}")


def make(rep, params: Mapping[str, complex] | None = None,
         singular_points: Sequence[float] = (0.0,), label: str | None = None) -> GenFunc:
    """Validate and wrap a representative.

    ``rep`` may be an Expr or expression text. Every free symbol other than
    ``x`` and ``eps`` must be bound by ``params``; the bound representative
    must evaluate to finite values on the probe grid.
    """
    if isinstance(rep, str):
        text, rep = rep, parse(rep)
    else:
        text = None
    params = {k: complex(v) for k, v in (params or {}).items()}
    for name in sorted(rep.free_symbols - RESERVED):
        if name not in params:
            raise UnboundSymbol(name)
    g = GenFunc(rep, params, tuple(sorted(float(s) for s in singular_points)),
                label or text or format_expr(rep))
    _probe(g.bound, g.label)
    return g


def constant(c) -> GenFunc:
    return GenFunc(E.const(c), {}, (), label=f"{complex(c).real:g}" if complex(c).imag == 0 else str(c))


def _merge(p: Mapping, q: Mapping) -> dict:
    out = dict(p)
    for k, v in q.items():
        if k in out and out[k] != v:
            raise ParamClash(k, out[k], v)
        out[k] = v
    return out


def _combine(kind: str, u: GenFunc, v: GenFunc, sep: str) -> GenFunc:
    sing = tuple(sorted(set(u.singular_points) | set(v.singular_points)))
    return GenFunc(Expr(kind, (u.rep, v.rep)), _merge(u.params, v.params), sing,
                   f"({u}){sep}({v})")


def add(u: GenFunc, v: GenFunc) -> GenFunc:
    return _combine("add", u, v, " + ")


def sub(u: GenFunc, v: GenFunc) -> GenFunc:
    return _combine("sub", u, v, " - ")


def mul(u: GenFunc, v: GenFunc) -> GenFunc:
    return _combine("mul", u, v, "*")


def scale(c, u: GenFunc) -> GenFunc:
    c = complex(c)
    return GenFunc(Expr("mul", (E.const(c), u.rep)), dict(u.params), u.singular_points,
                   f"{_fmt_num(c)}*({u})")


def conjugate(u: GenFunc) -> GenFunc:
    return GenFunc(E.conj(u.rep), dict(u.params), u.singular_points, f"conj({u})")


def derivative(u: GenFunc, order: int = 1) -> GenFunc:
    """d^order/dx^order of the representative; singular points are kept."""
    rep = u.rep
    for _ in range(order):
        rep = E.simplify(E.differentiate(rep, "x"))
    tick = "'" * order if order <= 3 else f"^({order})"
    return GenFunc(rep, dict(u.params), u.singular_points, f"({u}){tick}")


def compose_smooth(f: str, u: GenFunc, exponent=None) -> GenFunc:
    """Superposition F(u) for F in exp, sin, cos or a constant power."""
    if f in ("exp", "sin", "cos"):
        rep = Expr(f, (u.rep,))
        label = f"{f}({u})"
    elif f in ("pow", "power"):
        if exponent is None:
            raise MissingParam("power composition needs an exponent")
        c = complex(exponent)
        if c.real < 0:
            bound = u.bound
            for eps in PROBE_EPS:
                vals = np.abs(E.evaluate(bound, {"x": PROBE_X, "eps": eps}))
                if np.min(vals) < 1e-12:
                    raise DomainProbeFailure(
                        f"({u})^{_fmt_num(c)}: base not bounded away from 0 (eps={eps})")
        rep = Expr("pow", (u.rep, E.const(c)))
        label = f"({u})^{_fmt_num(c)}"
    else:
        raise ValueError(f"unsupported superposition {f!r}")
    g = GenFunc(rep, dict(u.params), u.singular_points, label)
    _probe(g.bound, label)
    return g


def _fmt_num(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return f"{c.real:g}"
    return f"({c.real:g}{c.imag:+g}i)"


# ------------------------------------------------------------------ builtins

def _lam(params: Mapping, name: str) -> float:
    for key in ("lam", "lambda"):
        if key in params:
            return params[key]
    raise MissingParam(f"builtin {name!r} needs parameter 'lam'")


def _sign(params: Mapping) -> int:
    if "sign" not in params:
        raise MissingParam("builtin 'i_eps_power' needs parameter 'sign'")
    s = params["sign"]
    if s in ("+", 1, 1.0):
        return 1
    if s in ("-", -1, -1.0):
        return -1
    raise ValueError(f"sign must be + or -, got {s!r}")


def i_eps_power_expr(sign: int, lam) -> Expr:
    """(eps + sign*i*x)^(-lam)."""
    base = EPS + I * X if sign > 0 else EPS - I * X
    return base ** E.const(-complex(lam) if complex(lam).imag else -float(np.real(lam)))


def exchange_expr(lam) -> Expr:
    lam = complex(lam)
    c = E.const(lam.real if lam.imag == 0 else lam)
    return ((EPS + I * X) / (EPS - I * X)) ** c


SIGMA = I * E.log((EPS - I * X) / (EPS + I * X))
DELTA = (E.const(1) / PI) * (EPS / (EPS ** 2 + X ** 2))
PV_INV = X / (X ** 2 + EPS ** 2)
POISSON = E.const(1) / (EPS ** 2 + X ** 2)
THETA = (PI + SIGMA) / (E.const(2) * PI)


def builtin(name: str, params: Mapping | None = None) -> GenFunc:
    """Named representative families.

    Parameter values are substituted as constants, so two instances with
    different parameters (U(lam) and U(-lam), say) multiply without clashes.
    """
    params = dict(params or {})
    if name == "i_eps_power":
        s, lam = _sign(params), _lam(params, name)
        rep = i_eps_power_expr(s, lam)
        label = f"(eps {'+' if s > 0 else '-'} i*x)^(-{_fmt_num(lam)})"
    elif name == "exchange_U":
        lam = _lam(params, name)
        rep = exchange_expr(lam)
        label = f"U(x, {_fmt_num(lam)})"
    elif name == "exchange_U_compact":
        from .physics import compact_exchange_expr
        lam = _lam(params, name)
        rep = compact_exchange_expr(lam)
        label = f"Uc(xi, {_fmt_num(lam)})"
    elif name == "sigma":
        rep, label = SIGMA, "sigma"
    elif name == "delta":
        rep, label = DELTA, "delta"
    elif name == "theta":
        rep, label = THETA, "theta"
    elif name == "pv_inv":
        rep, label = PV_INV, "pv(1/x)"
    elif name == "poisson_kernel":
        rep, label = POISSON, "1/(eps^2 + x^2)"
    else:
        raise UnknownBuiltin(name)
    return make(rep, {}, (0.0,), label)


BUILTINS = ("i_eps_power", "exchange_U", "exchange_U_compact", "sigma", "delta",
            "theta", "pv_inv", "poisson_kernel")


# ------------------------------------------------------ mollifier embedding

@dataclass(frozen=True)
class EmbedTarget:
    """A classical distribution that :func:`embed_mollified` can convolve."""

    kind: str  # theta | delta | polynomial
    order: int = 0
    coeffs: tuple = ()

    @staticmethod
    def theta() -> "EmbedTarget":
        return EmbedTarget("theta")

    @staticmethod
    def delta_derivative(k: int = 0) -> "EmbedTarget":
        return EmbedTarget("delta", order=k)

    @staticmethod
    def polynomial(coeffs) -> "EmbedTarget":
        return EmbedTarget("polynomial", coeffs=tuple(coeffs))


def _check_mollifier(rho: TestFunction):
    if not rho.is_compact or not all(math.isfinite(s) for s in rho.support):
        raise BadMollifier(f"{rho.name}: mollifier must have compact support")
    mass = rho.integral
    if abs(mass - 1.0) > 1e-10:
        raise BadMollifier(f"{rho.name}: mass {mass.real:.12g} is not 1")


def _moment(rho: TestFunction, m: int) -> float:
    from .quadrature import integrate
    a, b = rho.support
    if m == 0:
        return 1.0  # unit mass, checked to 1e-10
    if m % 2 and rho.center == 0:
        return 0.0  # odd moments of an even mollifier
    return integrate(lambda s: s ** m * rho(s), [a, rho.center, b], tol_rel=1e-14).value.real


def embed_mollified(target: EmbedTarget, rho: TestFunction | None = None) -> GenFunc:
    """Class of w * rho_eps with rho_eps(x) = rho(x/eps)/eps.

    Delta derivatives and polynomials are convolved in closed form; theta
    becomes the mollifier's cumulative integral (a Chebyshev-backed
    ``smoothstep`` node), which requires the standard bump mollifier.
    """
    rho = rho or standard_mollifier()
    _check_mollifier(rho)
    if target.kind == "delta":
        k = target.order
        if not 0 <= k <= 3:
            raise UnsupportedTarget(f"delta derivative order {k} (supported: 0..3)")
        rep = E.substitute(rho.expr, "x", X / EPS) / EPS
        for _ in range(k):
            rep = E.differentiate(rep, "x")
        rep = E.simplify(rep)
        label = "delta" if k == 0 else f"delta^({k})"
        label = f"{label} * rho_eps"
    elif target.kind == "theta":
        if rho.kind != "bump":
            raise UnsupportedTarget("theta embedding needs a bump mollifier")
        t = X / EPS
        if rho.center:
            t = t - rho.center
        if rho.scale != 1:
            t = t / rho.scale
        rep = E.smoothstep(t)
        label = "theta * rho_eps"
    elif target.kind == "polynomial":
        coeffs = target.coeffs
        moments = [_moment(rho, m) for m in range(len(coeffs))]
        rep = E.ZERO
        for j, c in enumerate(coeffs):
            if c == 0:
                continue
            for m in range(j + 1):
                w = c * comb(j, m) * moments[m] * (-1) ** m
                if w == 0:
                    continue
                term = E.const(w)
                if j - m:
                    term = term * X ** (j - m)
                if m:
                    term = term * EPS ** m
                rep = rep + term
        rep = E.simplify(rep)
        label = f"poly{list(coeffs)} * rho_eps"
    else:
        raise UnsupportedTarget(target.kind)
    return make(rep, {}, (0.0,), label)


# -------------------------------------------------------------- equality in G

@dataclass
class EqualityReport:
    slopes: dict  # derivative order -> fitted slope of log sup|d^k(u-v)| vs log eps
    verdict: str  # EqualInG | AssociatedOnly | Distinct
    details: dict


def equal_in_g(u: GenFunc, v: GenFunc, M: int = 3, k_max: int = 3,
               K: tuple[float, float] = (-5.0, 5.0), sched=None) -> EqualityReport:
    """Empirical semi-decision of u = v in G(R).

    Negligibility of u - v is probed for derivative orders 0..k_max on the
    compact K; if it fails, one association check of u - v against 0 with
    the default test functions decides between AssociatedOnly and Distinct.
    """
    from .association import EpsSchedule, check_association, derivative_sups, ClassicalDist

    sched = sched or EpsSchedule()
    diff = GenFunc(E.simplify(Expr("sub", (u.bound, v.bound))), {},
                   tuple(sorted(set(u.singular_points) | set(v.singular_points))),
                   f"({u}) - ({v})")
    slopes, all_tiny, table = {}, True, {}
    for k in range(k_max + 1):
        est = derivative_sups(diff, K, k, sched)
        slopes[k] = est.slope
        table[k] = est.sups.tolist()
        if not np.all((est.sups < 1e-13) | est.rounding):
            all_tiny = False
    details = {"eps": sched.values.tolist(), "sups": table}
    if all_tiny or all(s >= M for s in slopes.values()):
        return EqualityReport(slopes, "EqualInG", details)
    report = check_association(diff, ClassicalDist.zero(), sched=sched)
    details["association"] = report
    verdict = "AssociatedOnly" if report.passed else "Distinct"
    return EqualityReport(slopes, verdict, details)
