"""Print the pairing curve of a family against one test function.

Example:
    python scripts/convergence_table.py "(eps + i*x)^(-1)" --phi xgauss
"""

import argparse
import sys

import numpy as np

from colombeau import testfunctions as T
from colombeau.association import EpsSchedule, classify_limit, pairing_curve, richardson
from colombeau.genfunc import make


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="pairing <u_eps, phi> along a geometric eps schedule")
    ap.add_argument("expr")
    ap.add_argument("--phi", default="gauss", choices=T.test_function_names())
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--singular", default="0", help="comma-separated points to grade the quadrature at")
    args = ap.parse_args(argv)
    sing = tuple(float(s) for s in args.singular.split(",") if s)
    u = make(args.expr, {}, sing)
    curve = pairing_curve(u, T.by_name(args.phi), EpsSchedule(count=args.count))
    prev = None
    print(f"{'eps':>12} {'Re':>22} {'Im':>22} {'|diff|':>10} {'quad err':>10}")
    for p in curve.points:
        diff = "" if prev is None else f"{abs(p.value - prev):10.2e}"
        print(f"{p.eps:12.4e} {p.value.real:22.15g} {p.value.imag:22.15g} {diff:>10} {p.quad_err:10.1e}")
        prev = p.value
    v = classify_limit(curve)
    print(f"\nverdict: {v}")
    if v.kind == "Converged":
        print(f"first-order Richardson estimate: {complex(richardson(curve)):.12g}")
    else:
        print(f"log-log slope over the tail: {v.exponent:.4f}")
    return 0 if np.isfinite(curve.values).all() else 1


if __name__ == "__main__":
    sys.exit(main())
