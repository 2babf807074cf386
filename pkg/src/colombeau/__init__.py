"""Numerical toolkit for Colombeau generalized functions.

Representatives u_eps(x) are symbolic expressions in ``x`` and ``eps``;
the algebra acts on them componentwise, and association with classical
distributions is decided numerically from eps-sweeps of pairings.
"""

from .association import (
    AssociationReport, ClassicalDist, EpsSchedule, PairingCurve, Verdict,
    check_association, check_negligible, classify_limit, estimate_growth,
    pairing_at, pairing_curve, target_pairing,
)
from .demos import demo_names, run_demo
from .errors import *  # noqa: F401,F403
from .expr import Expr, differentiate, evaluate, simplify, substitute
from .genfunc import (
    EmbedTarget, EqualityReport, GenFunc, add, builtin, compose_smooth, conjugate, constant,
    derivative, embed_mollified, equal_in_g, make, mul, scale, sub,
)
from .parser import ParseError, format_expr, parse
from .physics import (
    ChargeConfig, CompactPoint, DemoReport, eps_map, npoint, u_compact,
    verify_compact_two_point, verify_exchange_identity, xi_map,
)
from .testfunctions import TestFunction, default_test_functions

__version__ = "0.1.0"
