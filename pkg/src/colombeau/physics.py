"""Correlation-level physics of the chiral charged field.

n-point functions of vertex operators, the exchange identity at finite
regulator, and the compact picture on the circle x = 2 tan(xi/2) with a
winding index carrying the twisted periodicity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import expr as E
from .errors import BadEpsilonOrder, DomainError
from .expr import EPS, I, X, Expr

CHARGE_TOL = 1e-12


@dataclass
class Check:
    description: str
    anchor: str
    expected: object  # complex, float or a verdict string
    computed: object
    tol: float | None
    passed: bool


@dataclass
class DemoReport:
    name: str
    checks: list[Check] = field(default_factory=list)
    curves: list = field(default_factory=list)  # PairingCurve objects, if any
    schedule: tuple[float, ...] = ()

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, description, anchor, expected, computed, tol=None, passed=None) -> Check:
        """Record a check; numeric checks pass when |expected - computed| <= tol."""
        if passed is None:
            if tol is None:
                passed = expected == computed
            else:
                passed = bool(abs(complex(expected) - complex(computed)) <= tol)
        c = Check(description, anchor, expected, computed, tol, bool(passed))
        self.checks.append(c)
        return c


# ------------------------------------------------------------------ n-point

@dataclass(frozen=True)
class ChargeConfig:
    charges: tuple[float, ...]
    epsilons: tuple[float, ...]
    positions: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "charges", tuple(float(g) for g in self.charges))
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))
        object.__setattr__(self, "positions", tuple(float(x) for x in self.positions))
        n = len(self.charges)
        if not (len(self.epsilons) == len(self.positions) == n):
            raise ValueError("charges, epsilons and positions must have equal length")
        if any(e <= 0 for e in self.epsilons):
            raise BadEpsilonOrder("regulators must be positive")
        if any(a <= b for a, b in zip(self.epsilons, self.epsilons[1:])):
            raise BadEpsilonOrder(f"regulators must strictly decrease: {self.epsilons}")

    @property
    def n(self) -> int:
        return len(self.charges)

    @property
    def neutral(self) -> bool:
        return abs(math.fsum(self.charges)) <= CHARGE_TOL


def npoint(cfg: ChargeConfig) -> complex:
    """Vacuum expectation of n vertex operators; zero unless the charges sum to zero."""
    if not cfg.neutral:
        return 0j
    g, e, x = cfg.charges, cfg.epsilons, cfg.positions
    log_total = -0.5 * cfg.n * math.log(2 * math.pi)
    for j in range(cfg.n):
        for k in range(j + 1, cfg.n):
            base = complex(e[j] - e[k], -(x[j] - x[k]))  # Re > 0: principal log is safe
            log_total += g[j] * g[k] * cmath.log(base)
    return cmath.exp(log_total)


# ------------------------------------------------------- exchange identity

DEFAULT_GRID = np.linspace(-10.0, 10.0, 1001)
DEFAULT_EPS = (1e-1, 1e-2, 1e-3, 1e-4)


def exchange_residual(g2: float, grid=None, eps_list=None) -> float:
    """max |(eps+ix)^-g2 - U(x,-g2) (eps-ix)^-g2| / |(eps+ix)^-g2| over grid x eps_list."""
    from .genfunc import builtin, mul

    grid = DEFAULT_GRID if grid is None else np.asarray(grid, dtype=float)
    eps_list = DEFAULT_EPS if eps_list is None else eps_list
    lhs = builtin("i_eps_power", {"sign": +1, "lam": g2})
    rhs = mul(builtin("exchange_U", {"lam": -g2}), builtin("i_eps_power", {"sign": -1, "lam": g2}))
    worst = 0.0
    for eps in eps_list:
        a, b = lhs(grid, eps), rhs(grid, eps)
        worst = max(worst, float(np.max(np.abs(a - b) / np.abs(a))))
    return worst


def verify_exchange_identity(g2: float, grid=None, eps_list=None, tol: float = 1e-12) -> DemoReport:
    rep = DemoReport("exchange-identity")
    r = exchange_residual(g2, grid, eps_list)
    rep.add(f"(eps+ix)^-g2 = U(x,-g2) (eps-ix)^-g2 at eps > 0, g2={g2:g}",
            "exchange identity at finite eps", 0.0, r, tol)
    return rep


# ----------------------------------------------------------- compact picture

def xi_map(x):
    """Angle xi in (-pi, pi) with x = 2 tan(xi/2)."""
    r = 2.0 * np.arctan(np.asarray(x, dtype=float) / 2.0)
    return float(r) if r.ndim == 0 else r


def eps_map(x: float, eps: float) -> tuple[float, float]:
    """Solve exp(eps_t - i xi) = (1 + w)/(1 - w), w = (eps - ix)/2, on the principal chart."""
    w = complex(eps, -x) / 2.0
    if abs(w) >= 1.0:
        raise DomainError(f"|(eps - ix)/2| = {abs(w):g} >= 1 is outside the principal chart")
    z = cmath.log((1 + w) / (1 - w))
    return -z.imag + 0.0, z.real


@dataclass(frozen=True)
class CompactPoint:
    xi: float
    n: int = 0
    eps_tilde: float = 0.01

    def __post_init__(self):
        if not (-math.pi < self.xi <= math.pi):
            raise DomainError(f"principal angle {self.xi} not in (-pi, pi]")
        if self.eps_tilde <= 0:
            raise DomainError("regulator must be positive")

    @property
    def angle(self) -> float:
        return self.xi + 2 * math.pi * self.n


def compact_exchange_expr(lam) -> Expr:
    """(sinh((eps + i x)/2) / sinh((eps - i x)/2))^lam with x the principal angle."""
    half = E.const(0.5)
    ratio = E.sinh(half * (EPS + I * X)) / E.sinh(half * (EPS - I * X))
    return ratio ** E.const(lam)


def u_compact(p: CompactPoint, lam: float) -> complex:
    et, xi = p.eps_tilde, p.xi
    ratio = cmath.sinh(complex(et, xi) / 2) / cmath.sinh(complex(et, -xi) / 2)
    principal = cmath.exp(lam * cmath.log(ratio))
    return principal * cmath.exp(2j * math.pi * lam * p.n)


def compact_two_point_residual(g2: float, xi1: float, xi2: float, eps_tilde: float) -> float:
    """Relative gap between the line-picture two-point function and its circle form."""
    c = math.cos(xi1 / 2) * math.cos(xi2 / 2)
    if abs(c) < 1e-8:
        raise DomainError("cos(xi/2) vanishes: point at infinity of the line chart")
    # shift the first point into the tube, then read off eps and x12 from the difference
    z1 = 2 * cmath.tan(complex(xi1, eps_tilde) / 2)
    w = z1 - 2 * math.tan(xi2 / 2)
    eps, x12 = w.imag, w.real
    line = cmath.exp(-g2 * (math.log(c) + cmath.log(complex(eps, -x12))))
    circle = cmath.exp(-g2 * cmath.log(2 * cmath.sinh(complex(eps_tilde, -(xi1 - xi2)) / 2)))
    return abs(line - circle) / abs(circle)


def verify_compact_two_point(g2: float, xi1: float, xi2: float, eps_tilde: float,
                             C: float = 10.0) -> DemoReport:
    rep = DemoReport("compact-two-point")
    r = compact_two_point_residual(g2, xi1, xi2, eps_tilde)
    rep.add(f"line vs circle two-point, g2={g2:g}, xi=({xi1:g},{xi2:g}), eps_t={eps_tilde:g};"
            f" C = residual/eps_t = {r / eps_tilde:.3g}",
            "reparametrization x = 2 tan(xi/2)", 0.0, r, C * eps_tilde)
    return rep


__all__ = [
    "Check", "DemoReport", "ChargeConfig", "npoint", "exchange_residual",
    "verify_exchange_identity", "xi_map", "eps_map", "CompactPoint", "u_compact",
    "compact_exchange_expr", "compact_two_point_residual", "verify_compact_two_point",
]
