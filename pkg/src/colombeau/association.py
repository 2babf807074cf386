"""Pairings <u_eps, phi>, eps-sweeps and the association relation.

Also hosts the empirical moderation / negligibility estimates, which share
the derivative-sup machinery with :func:`colombeau.genfunc.equal_in_g`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import expr as E
from .errors import InsufficientSmoothness, QuadratureBudgetExceeded
from .expr import Expr
from .genfunc import GenFunc
from .parser import format_expr
from .quadrature import integrate
from .testfunctions import TestFunction, default_test_functions

DEFAULT_TOL = 1e-10
DEFAULT_BUDGET = 1_000_000
ROUNDING_FLOOR = 1e-11  # sups below this fraction of the term scale are rounding noise
INNER_ZONE = 64.0
NOISE_FLOOR = 1e-12  # successive differences below this are summation noise


@dataclass(frozen=True)
class EpsSchedule:
    """Geometric sequence eps0 * ratio^j, j = 0..count-1."""

    eps0: float = 2.0 ** -4
    ratio: float = 0.5
    count: int = 20

    def __post_init__(self):
        if not self.eps0 > 0:
            raise ValueError("eps0 must be positive")
        if not 0 < self.ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        if self.count < 6:
            raise ValueError("a schedule needs at least 6 values")

    @property
    def values(self) -> np.ndarray:
        return self.eps0 * self.ratio ** np.arange(self.count)

    @classmethod
    def oscillatory(cls) -> "EpsSchedule":
        return cls(count=7)


class Pairing(NamedTuple):
    value: complex
    error: float


@dataclass
class PairingPoint:
    eps: float
    value: complex
    quad_err: float
    flagged: bool = False


@dataclass
class PairingCurve:
    phi: str
    points: list[PairingPoint]

    @property
    def eps(self) -> np.ndarray:
        return np.array([p.eps for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points], dtype=complex)

    @property
    def errors(self) -> np.ndarray:
        return np.array([p.quad_err for p in self.points])


# ------------------------------------------------------------------ pairing

def _breakpoints(support, singular_points, eps):
    a, b = support
    pts = [a, b]
    for s in singular_points:
        cand = [s]
        for j in range(-7, 7):
            cand += [s - eps * 2.0 ** j, s + eps * 2.0 ** j]
        r = INNER_ZONE * eps
        while r < (b - a) + abs(s - a) + abs(s - b):
            r *= 2.0
            cand += [s - r, s + r]
        pts += [p for p in cand if a < p < b]
    return sorted(set(pts))


def _quad_pairing(u, phi, eps, tol, budget):
    if not eps > 0:
        raise ValueError("eps must be positive")
    rep = u.bound
    phi_expr = phi.expr

    def f(x):
        return E.evaluate(rep, {"x": x, "eps": eps}) * E.evaluate(phi_expr, {"x": x})

    bps = _breakpoints(phi.support, u.singular_points, eps)
    return integrate(f, bps, tol_rel=tol, budget=budget, min_width=min(eps / 100, 1e-12))


def pairing_at(u: GenFunc, phi: TestFunction, eps: float, tol: float = DEFAULT_TOL,
               budget: int = DEFAULT_BUDGET) -> Pairing:
    """Adaptive quadrature of u_eps(x) phi(x) over the support of phi.

    Panels are graded geometrically around each singular point of ``u``, from
    eps/128 out to 64 eps and then doubling to the edge of the support.
    """
    res = _quad_pairing(u, phi, eps, tol, budget)
    return Pairing(res.value, res.error)


def pairing_curve(u: GenFunc, phi: TestFunction, sched: EpsSchedule | None = None,
                  tol: float = DEFAULT_TOL) -> PairingCurve:
    sched = sched or EpsSchedule()
    points = []
    for eps in sched.values:
        try:
            res = _quad_pairing(u, phi, float(eps), tol, DEFAULT_BUDGET)
            val, err, flagged = res.value, res.error, res.flagged
        except QuadratureBudgetExceeded as exc:
            val, err, flagged = exc.value, exc.error, True
        points.append(PairingPoint(float(eps), complex(val), float(err), flagged))
    return PairingCurve(phi.name, points)


# ----------------------------------------------------------- classification

@dataclass
class Verdict:
    kind: str  # Converged | Divergent | Inconclusive
    limit: complex | None = None
    rate: float | None = None  # contraction factor of successive differences
    exponent: float | None = None  # fitted slope of log|P| vs log eps
    error: float | None = None

    def __str__(self):
        if self.kind == "Converged":
            rate = "flat" if self.rate is None else f"{self.rate:.3g}"
            return f"Converged(limit={self.limit:.10g}, rate={rate})"
        if self.kind == "Divergent":
            return f"Divergent(exponent={self.exponent:.4g})"
        return "Inconclusive"


def _log_slope(eps: np.ndarray, mags: np.ndarray) -> float:
    tiny = np.finfo(float).tiny
    return float(np.polyfit(np.log(eps), np.log(np.maximum(mags, tiny)), 1)[0])


def classify_limit(curve: PairingCurve, tol_abs: float = 1e-5,
                   tol_rel: float = 1e-5) -> Verdict:
    """Decide Converged / Divergent / Inconclusive from the tail of a curve.

    Divergent when the log-log slope over the last 6 points is <= -0.1 with
    |P| increasing. Converged when the successive differences over the last
    4 points are non-increasing (up to quadrature noise) and the final one is
    below tol_abs + tol_rel*|limit|; the limit is the last value.
    """
    if len(curve.points) < 6:
        raise ValueError("classification needs at least 6 points")
    eps, vals, errs = curve.eps, curve.values, curve.errors
    mags = np.abs(vals)
    slope = _log_slope(eps[-6:], mags[-6:])
    if slope <= -0.1 and np.all(np.diff(mags[-6:]) > 0):
        return Verdict("Divergent", exponent=slope)
    diffs = np.abs(np.diff(vals))
    tail = diffs[-3:]
    noise = 2.0 * (errs[-4:-1] + errs[-3:]) + NOISE_FLOOR * max(1.0, np.max(mags[-4:]))
    monotone = np.all(tail[1:] <= tail[:-1] + noise[1:])
    limit = complex(vals[-1])
    final = float(diffs[-1])
    if monotone and final < tol_abs + tol_rel * abs(limit):
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = tail[:-1] / tail[1:]
        ok = np.isfinite(ratios) & (tail[1:] > noise[1:])
        rate = float(np.mean(ratios[ok])) if np.any(ok) else None
        return Verdict("Converged", limit=limit, rate=rate, exponent=slope, error=final)
    return Verdict("Inconclusive", limit=limit, exponent=slope, error=final)


def richardson(curve: PairingCurve, order: float = 1.0) -> complex:
    """Diagnostic only: Richardson extrapolation of the last two points."""
    (e1, p1), (e2, p2) = [(q.eps, q.value) for q in curve.points[-2:]]
    r = (e1 / e2) ** order
    return (r * p2 - p1) / (r - 1)


# --------------------------------------------------- classical distributions

@dataclass(frozen=True)
class DistTerm:
    kind: str  # delta | fp | pv | heaviside | smooth
    coeff: complex = 1.0
    order: int = 0  # delta: derivative order k >= 0; fp: power k >= 1
    sign: int = 1  # heaviside: theta(sign * x)
    expr: Expr | None = None

    def __str__(self):
        re, im = self.coeff.real + 0.0, self.coeff.imag + 0.0  # drop signed zeros
        if im == 0:
            cs = f"{re:.12g}"
        elif re == 0:
            cs = f"({im:.12g}i)"
        else:
            cs = f"({re:.12g}{im:+.12g}i)"
        body = {
            "delta": "delta" if self.order == 0 else f"delta^({self.order})",
            "fp": f"fp(x^-{self.order})",
            "pv": "pv(1/x)",
            "heaviside": f"theta({'+' if self.sign > 0 else '-'})",
            "smooth": f"smooth[{format_expr(self.expr)}]" if self.expr is not None else "smooth",
        }[self.kind]
        return f"{cs}*{body}"


@dataclass(frozen=True)
class ClassicalDist:
    """A finite formal sum of classical distributions."""

    terms: tuple[DistTerm, ...] = ()

    @staticmethod
    def zero() -> "ClassicalDist":
        return ClassicalDist(())

    @staticmethod
    def delta(k: int = 0, coeff=1.0) -> "ClassicalDist":
        if k < 0:
            raise ValueError("delta derivative order must be >= 0")
        return ClassicalDist((DistTerm("delta", complex(coeff), order=k),))

    @staticmethod
    def fp(k: int, coeff=1.0) -> "ClassicalDist":
        """Hadamard finite part of x^(-k)."""
        if k < 1:
            raise ValueError("finite part power must be >= 1")
        return ClassicalDist((DistTerm("fp", complex(coeff), order=k),))

    @staticmethod
    def pv(coeff=1.0) -> "ClassicalDist":
        return ClassicalDist((DistTerm("pv", complex(coeff)),))

    @staticmethod
    def heaviside(sign: int = 1, coeff=1.0) -> "ClassicalDist":
        return ClassicalDist((DistTerm("heaviside", complex(coeff), sign=1 if sign > 0 else -1),))

    @staticmethod
    def smooth(e: Expr, coeff=1.0) -> "ClassicalDist":
        return ClassicalDist((DistTerm("smooth", complex(coeff), expr=e),))

    def __add__(self, other: "ClassicalDist") -> "ClassicalDist":
        return ClassicalDist(self.terms + other.terms)

    def __sub__(self, other: "ClassicalDist") -> "ClassicalDist":
        return self + (-1) * other

    def __rmul__(self, c) -> "ClassicalDist":
        c = complex(c)
        return ClassicalDist(tuple(DistTerm(t.kind, c * t.coeff, t.order, t.sign, t.expr)
                                   for t in self.terms))

    __mul__ = __rmul__

    def __neg__(self):
        return (-1) * self

    def __str__(self):
        return " + ".join(str(t) for t in self.terms) or "0"

    def derivative(self) -> "ClassicalDist":
        out = []
        for t in self.terms:
            if t.kind == "delta":
                out.append(DistTerm("delta", t.coeff, t.order + 1))
            elif t.kind == "pv":
                out.append(DistTerm("fp", -t.coeff, 2))
            elif t.kind == "fp":
                out.append(DistTerm("fp", -t.order * t.coeff, t.order + 1))
            elif t.kind == "heaviside":
                out.append(DistTerm("delta", t.sign * t.coeff, 0))
            else:
                out.append(DistTerm("smooth", t.coeff,
                                    expr=E.simplify(E.differentiate(t.expr, "x"))))
        return ClassicalDist(tuple(out))

    def max_order(self) -> int:
        return max([t.order for t in self.terms if t.kind in ("delta", "fp")] + [0])


def _quad(f, a, b, extra=()):
    pts = [a, b] + [p for p in extra if a < p < b]
    return integrate(f, pts, tol_rel=1e-12).value


def _graded(a, b, at=0.0, depth=40):
    """Breakpoints accumulating geometrically at ``at`` inside (a, b)."""
    pts = [at]
    for j in range(depth):
        h = 2.0 ** -j
        pts += [at - h, at + h]
    return [p for p in pts if a < p < b]


def _pair_term(t: DistTerm, phi: TestFunction) -> complex:
    a, b = phi.support
    if t.kind in ("delta", "fp") and t.order > phi.max_deriv_order:
        raise InsufficientSmoothness(f"{phi.name} has derivatives only up to order "
                                     f"{phi.max_deriv_order}, {t.kind} needs {t.order}")
    if t.kind == "delta":
        k = t.order
        if not a < 0 < b:
            return 0j
        return (-1) ** k * phi(0.0, k)
    if t.kind == "pv":
        d1, d3 = phi(0.0, 1), phi(0.0, 3)

        def odd_part(x):
            small = x < 1e-6
            xs = np.where(small, 1.0, x)
            direct = (phi(xs) - phi(-xs)) / xs
            series = 2.0 * d1 + d3 * x * x / 3.0
            return np.where(small, series, direct)

        L = max(abs(a), abs(b))
        return _quad(odd_part, 0.0, L, _graded(0.0, L))
    if t.kind == "fp":
        k = t.order
        lead = (-1) ** (k - 1) / math.factorial(k - 1) * (-1) ** k
        integrand = lambda x: np.log(np.abs(x)) * phi(x, k)
        return lead * _quad(integrand, a, b, _graded(a, b))
    if t.kind == "heaviside":
        if t.sign > 0:
            return _quad(lambda x: phi(x), max(a, 0.0), b, [phi.center]) if b > 0 else 0j
        return _quad(lambda x: phi(x), a, min(b, 0.0), [phi.center]) if a < 0 else 0j
    if t.kind == "smooth":
        e = t.expr
        return _quad(lambda x: E.evaluate(e, {"x": x}) * phi(x), a, b, [0.0, phi.center])
    raise ValueError(t.kind)


def target_pairing(w: ClassicalDist, phi: TestFunction) -> complex:
    """<w, phi> for a classical distribution, by exact rules or quadrature.

    <delta^(k), phi> = (-1)^k phi^(k)(0);
    <pv 1/x, phi> = int_0^inf (phi(x) - phi(-x))/x dx;
    <fp x^-k, phi> = ((-1)^(k-1)/(k-1)!) (-1)^k int ln|x| phi^(k)(x) dx.
    """
    return complex(sum((t.coeff * _pair_term(t, phi) for t in w.terms), 0j))


# ------------------------------------------------------------- association

@dataclass
class PhiResult:
    phi: str
    curve: PairingCurve
    verdict: Verdict
    target: complex | None
    residual: float | None
    passed: bool


@dataclass
class AssociationReport:
    target: str
    results: list[PhiResult]
    tol: float
    passed: bool

    @property
    def curves(self):
        return [r.curve for r in self.results]


def check_association(u: GenFunc, w: ClassicalDist, phis: Sequence[TestFunction] | None = None,
                      sched: EpsSchedule | None = None, tol: float = 1e-5,
                      tol_abs: float = 1e-5, tol_rel: float = 1e-5) -> AssociationReport:
    """Does u ~ w? Every phi must converge and match <w, phi> to tol*max(1, |<w, phi>|)."""
    phis = list(phis) if phis is not None else default_test_functions()
    sched = sched or EpsSchedule()
    results = []
    for phi in phis:
        curve = pairing_curve(u, phi, sched)
        verdict = classify_limit(curve, tol_abs, tol_rel)
        target = target_pairing(w, phi)
        if verdict.kind == "Converged":
            residual = abs(verdict.limit - target)
            ok = residual <= tol * max(1.0, abs(target))
        else:
            residual, ok = None, False
        results.append(PhiResult(phi.name, curve, verdict, target, residual, ok))
    return AssociationReport(str(w), results, tol, all(r.passed for r in results))


# ------------------------------------------------------ moderation estimates

def _additive_terms(e: Expr, out: list):
    if e.kind in ("add", "sub"):
        _additive_terms(e.args[0], out)
        _additive_terms(e.args[1], out)
    elif e.kind == "neg":
        _additive_terms(e.args[0], out)
    else:
        out.append(e)
    return out


@dataclass
class GrowthEstimate:
    order: int
    eps: np.ndarray
    sups: np.ndarray
    rounding: np.ndarray  # sup is at rounding level relative to its terms
    slope: float  # least-squares slope of log sup vs log eps over the smallest 6 eps
    residual: float

    @property
    def N(self) -> float:
        return -self.slope

    @property
    def moderate(self) -> bool:
        if not np.all(np.isfinite(self.sups)):
            return False
        if math.isinf(self.slope) or self.slope >= -0.05:
            return True  # bounded or decaying
        return self.residual < 0.1


def _sup_grid(K, singular_points, eps):
    lo, hi = K
    xs = [np.linspace(lo, hi, 2001)]
    t = np.linspace(-8.0, 8.0, 161)
    for s in singular_points:
        local = s + eps * t
        xs.append(local[(local >= lo) & (local <= hi)])
    return np.unique(np.concatenate(xs))


def derivative_sups(u: GenFunc, K=(-1.0, 1.0), k: int = 0,
                    sched: EpsSchedule | None = None) -> GrowthEstimate:
    """sup_K |d^k u_eps| per eps, with a log-log fit over the smallest 6 eps.

    The grid is 2001 uniform points on K plus eps-scaled points around each
    singular point, where the sup of a regularized singularity sits. Sups
    below ROUNDING_FLOOR times the sup of the summed magnitudes of the
    top-level additive terms are treated as exact zeros.
    """
    if k > 6:
        raise ValueError("derivative order above 6 is not supported")
    sched = sched or EpsSchedule()
    rep = u.bound
    for _ in range(k):
        rep = E.simplify(E.differentiate(rep, "x"))
    terms = _additive_terms(rep, [])
    eps_vals = sched.values
    sups = np.empty(len(eps_vals))
    rounding = np.zeros(len(eps_vals), dtype=bool)
    for j, eps in enumerate(eps_vals):
        xs = _sup_grid(K, u.singular_points, eps)
        env = {"x": xs, "eps": float(eps)}
        vals = np.broadcast_to(np.abs(E.evaluate(rep, env)), xs.shape)
        sups[j] = np.max(vals)
        if len(terms) > 1:
            scale = sum(np.broadcast_to(np.abs(E.evaluate(t, env)), xs.shape) for t in terms)
            rounding[j] = np.all(vals <= ROUNDING_FLOOR * scale)
    eff = np.where(rounding, 0.0, sups)
    tail_eps, tail = eps_vals[-6:], eff[-6:]
    if np.all(tail == 0):
        slope, resid = math.inf, 0.0
    else:
        tiny = np.finfo(float).tiny
        logs = np.log(np.maximum(tail, tiny))
        coef = np.polyfit(np.log(tail_eps), logs, 1)
        slope = float(coef[0])
        resid = float(np.sqrt(np.mean((np.polyval(coef, np.log(tail_eps)) - logs) ** 2)))
    return GrowthEstimate(k, eps_vals, sups, rounding, slope, resid)


def estimate_growth(u: GenFunc, K=(-1.0, 1.0), k: int = 0,
                    sched: EpsSchedule | None = None) -> GrowthEstimate:
    """Fitted moderation exponent N with sup |d^k u_eps| ~ eps^(-N) on K."""
    return derivative_sups(u, K, k, sched)


@dataclass
class NegligibilityReport:
    negligible: bool
    M: float
    estimates: list[GrowthEstimate] = field(default_factory=list)

    def __bool__(self):
        return self.negligible

    @property
    def slopes(self) -> dict:
        return {e.order: e.slope for e in self.estimates}


def check_negligible(u: GenFunc, M: float = 3, K=(-5.0, 5.0), k_max: int = 3,
                     sched: EpsSchedule | None = None) -> NegligibilityReport:
    """Candidate membership in the negligible ideal: every slope must be >= M."""
    ests = [derivative_sups(u, K, k, sched) for k in range(k_max + 1)]
    return NegligibilityReport(all(e.slope >= M for e in ests), M, ests)
