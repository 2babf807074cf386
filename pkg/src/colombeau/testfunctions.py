"""Smooth test functions used to pair against representatives."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import expr as E
from .bump import bump_mass
from .expr import Expr, X
from .quadrature import integrate

GAUSSIAN_CUTOFF = 12.0  # Gaussian kinds are truncated at +-12 widths


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A test function phi(x) with symbolic derivatives and explicit support.

    Bump kinds are written with the compactly supported ``bump`` node, so
    ``expr`` is valid on the whole line and vanishes outside ``support``.
    """

    __test__ = False  # not a pytest class

    name: str
    kind: str  # gaussian | bump | poly_times_gaussian
    expr: Expr
    support: tuple[float, float]
    center: float = 0.0
    scale: float = 1.0  # width for Gaussians, radius for bumps
    max_deriv_order: int = 8
    _derivs: dict = field(default_factory=dict, repr=False, compare=False)

    def derivative_expr(self, k: int) -> Expr:
        if k not in self._derivs:
            e = self.expr
            for _ in range(k):
                e = E.simplify(E.differentiate(e, "x"))
            self._derivs[k] = e
        return self._derivs[k]

    def __call__(self, x, order: int = 0):
        return E.evaluate(self.derivative_expr(order), {"x": x})

    @cached_property
    def integral(self) -> complex:
        a, b = self.support
        return integrate(lambda x: self(x), [a, self.center, b], tol_rel=1e-13).value

    @property
    def is_compact(self) -> bool:
        return self.kind == "bump"


def gaussian(center: float = 0.0, width: float = 1.0, name: str | None = None) -> TestFunction:
    """exp(-((x - center)/width)^2)."""
    t = (X - center) / width if center else X / width if width != 1 else X
    expr = E.exp(-(t ** 2))
    half = GAUSSIAN_CUTOFF * width
    return TestFunction(name or f"gaussian({center:g},{width:g})", "gaussian", expr,
                        (center - half, center + half), center, width)


def bump(center: float = 0.0, radius: float = 1.0, name: str | None = None,
         amplitude: float = 1.0) -> TestFunction:
    """amplitude * exp(-1/(1 - ((x - center)/radius)^2)) on (center-radius, center+radius)."""
    t = (X - center) / radius if (center or radius != 1) else X
    expr = E.bump(t)
    if amplitude != 1:
        expr = E.const(amplitude) * expr
    return TestFunction(name or f"bump({center:g},{radius:g})", "bump", expr,
                        (center - radius, center + radius), center, radius)


def poly_times_gaussian(coeffs, width: float = 1.0, name: str | None = None) -> TestFunction:
    """(sum_j coeffs[j] x^j) * exp(-(x/width)^2)."""
    poly = None
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        term = E.const(c) if j == 0 else (X if j == 1 else X ** j)
        if j and c != 1:
            term = E.const(c) * term
        poly = term if poly is None else poly + term
    poly = poly if poly is not None else E.ZERO
    t = X / width if width != 1 else X
    expr = poly * E.exp(-(t ** 2))
    half = GAUSSIAN_CUTOFF * width
    label = ",".join(f"{c:g}" for c in coeffs)
    return TestFunction(name or f"poly_gauss([{label}],{width:g})", "poly_times_gaussian",
                        expr, (-half, half), 0.0, width)


def mollifier(radius: float = 1.0) -> TestFunction:
    """The even unit-mass bump used to embed distributions by convolution."""
    return bump(0.0, radius, name="mollifier", amplitude=1.0 / (radius * bump_mass()))


def default_test_functions() -> list[TestFunction]:
    return [
        gaussian(0.0, 1.0, name="gauss"),
        bump(0.0, 1.0, name="bump"),
        bump(1.5, 1.0, name="bump-shifted"),
        poly_times_gaussian([0.0, 1.0], 1.0, name="xgauss"),
        bump(0.0, 0.5, name="bump-narrow"),
    ]


def by_name(name: str) -> TestFunction:
    """Look up a default test function, or build one from ``kind:a,b``."""
    for phi in default_test_functions():
        if phi.name == name:
            return phi
    kind, _, rest = name.partition(":")
    args = [float(v) for v in rest.split(",")] if rest else []
    if kind == "gaussian":
        return gaussian(*args)
    if kind == "bump":
        return bump(*args)
    raise KeyError(f"unknown test function {name!r}")


def test_function_names() -> list[str]:
    return [phi.name for phi in default_test_functions()]


test_function_names.__test__ = False
default_test_functions.__test__ = False
