"""Command-line front end.

Every subcommand can print a table (default) or a JSON report (``--json``)
with a fixed layout::

    {"command", "inputs", "schedule", "curves", "verdict", "limit",
     "exponent", "checks"}

Exit codes: 0 on success or pass, 1 when a check fails, 2 on usage or
evaluation errors.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import expr as E
from .association import (
    ClassicalDist, EpsSchedule, PairingCurve, PairingPoint, check_association, classify_limit,
    estimate_growth, pairing_at, pairing_curve,
)
from .demos import REGISTRY, run_demo
from .errors import ColombeauError
from .genfunc import equal_in_g, make
from .parser import ParseError, Parser, format_expr, parse
from .physics import ChargeConfig, DemoReport, npoint
from .testfunctions import by_name, default_test_functions

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ColombeauError):
    pass


# ------------------------------------------------------------ value parsing

def parse_number(text: str) -> complex:
    """Accept 1.5, -2e-3, 1+2i, 3i, pi, 2*pi and similar constant expressions."""
    t = text.strip()
    if re.fullmatch(r"[-+0-9.eE]*i", t.replace(" ", "")) or re.fullmatch(r"[-+0-9.eE]+", t):
        try:
            return complex(t.replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
    try:
        return complex(E.evaluate(parse(t)))
    except ColombeauError as exc:
        raise UsageError(f"not a number: {text!r} ({exc})") from None


def parse_bindings(items) -> dict[str, complex]:
    """name=value pairs, given repeatedly or comma separated."""
    out = {}
    for item in items or ():
        for part in item.split(","):
            if not part.strip():
                continue
            name, sep, value = part.partition("=")
            if not sep or not name.strip():
                raise UsageError(f"expected name=value, got {part!r}")
            out[name.strip()] = parse_number(value)
    return out


def parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


# ------------------------------------------------------- target mini-syntax

_DIST_WORDS = ("delta", "fp", "pv", "theta", "smooth")


def _dist_atom(p: Parser) -> ClassicalDist:
    word = p.advance()
    if word.text == "delta":
        k = 0
        if p.at("op", "^"):
            p.advance()
            e = p.parse_power() if not p.at("op", "(") else p.parse_atom()
            k = _int_const(p, e, "delta derivative order")
        return ClassicalDist.delta(k)
    if word.text == "smooth":
        p.expect(":")
        return ClassicalDist.smooth(p.parse_expr())
    p.expect("(")
    if word.text == "theta":
        sign = p.advance()
        if sign.text not in ("+", "-"):
            p.error("theta takes '+' or '-'", sign)
        p.expect(")")
        return ClassicalDist.heaviside(+1 if sign.text == "+" else -1)
    start = p.tok
    inner = p.parse_expr()
    p.expect(")")
    x = E.sym("x")
    if word.text == "pv":
        if inner != E.Expr("div", (E.const(1.0), x)):
            p.error("pv expects 1/x", start)
        return ClassicalDist.pv()
    # fp(x^-k) or fp(1/x^k)
    if inner.kind == "pow" and inner.args[0] == x:
        k = -_int_const(p, inner.args[1], "finite-part power", start)
    elif inner.kind == "div" and inner.args[0] == E.const(1.0):
        d = inner.args[1]
        k = 1 if d == x else (_int_const(p, d.args[1], "finite-part power", start)
                              if d.kind == "pow" and d.args[0] == x else 0)
    else:
        k = 0
    if k < 1:
        p.error("fp expects x^-k with integer k >= 1", start)
    return ClassicalDist.fp(k)


def _int_const(p: Parser, e: E.Expr, what: str, tok=None) -> int:
    try:
        v = E.evaluate(e)
    except ColombeauError:
        v = None
    if v is None or v.imag != 0 or v.real != int(v.real):
        p.error(f"{what} must be an integer", tok)
    return int(v.real)


def _dist_term(p: Parser) -> ClassicalDist:
    coeff = 1 + 0j
    while True:
        if p.at("ident") and p.tok.text in _DIST_WORDS:
            return coeff * _dist_atom(p)
        if p.at("op", "-"):
            p.advance()
            coeff = -coeff
            continue
        factor = p.parse_power()
        try:
            coeff *= E.evaluate(factor)
        except ColombeauError:
            p.error("coefficients must be constant")
        p.expect("*")


def parse_target(text: str) -> ClassicalDist:
    """Sum of terms like ``2.0*delta^(1)``, ``fp(x^-2)``, ``pv(1/x)``, ``theta(+)``, ``smooth: EXPR``."""
    p = Parser(text)
    total = _dist_term(p)
    while p.at("op", "+") or p.at("op", "-"):
        sign = 1 if p.advance().text == "+" else -1
        total = total + sign * _dist_term(p)
    p.finish()
    return total


# ------------------------------------------------------------------- config

@dataclass
class CliConfig:
    eps0: float = 2.0 ** -4
    ratio: float = 0.5
    count: int = 20
    tol_abs: float = 1e-5
    tol_rel: float = 1e-5
    tol: float = 1e-5
    phis: list[str] = field(default_factory=list)
    output: str = "table"  # table | json
    params: dict[str, complex] = field(default_factory=dict)
    singular_points: tuple[float, ...] = (0.0,)

    @classmethod
    def from_args(cls, args) -> "CliConfig":
        return cls(args.eps0, args.ratio, args.count, args.tol_abs, args.tol_rel, args.tol,
                   [s for s in (args.phi or "").split(",") if s], "json" if args.json else "table",
                   parse_bindings(args.param), tuple(parse_floats(args.singular)))

    @property
    def schedule(self) -> EpsSchedule:
        try:
            return EpsSchedule(self.eps0, self.ratio, self.count)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def test_functions(self):
        if not self.phis:
            return default_test_functions()
        try:
            return [by_name(n) for n in self.phis]
        except (KeyError, ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from None


# ------------------------------------------------------------------ reports

def _num(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": _num(float(v.real)), "im": _num(float(v.imag))}
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    return v


def _curve_json(curve) -> dict:
    return {"phi": curve.phi,
            "points": [{"eps": _num(p.eps), "re": _num(p.value.real), "im": _num(p.value.imag),
                        "quad_err": _num(p.quad_err)} for p in curve.points]}


def _check_json(c) -> dict:
    return {"description": c.description, "anchor": c.anchor, "expected": _num(c.expected),
            "computed": _num(c.computed), "tol": _num(c.tol), "pass": bool(c.passed)}


def make_report(command, inputs, schedule=(), curves=(), verdict=None, limit=None,
                exponent=None, checks=()) -> dict:
    lim = _num(complex(limit)) if limit is not None else {"re": None, "im": None}
    return {
        "command": command,
        "inputs": {k: _num(v) for k, v in inputs.items()},
        "schedule": [_num(float(e)) for e in schedule],
        "curves": [_curve_json(c) for c in curves],
        "verdict": verdict,
        "limit": lim,
        "exponent": _num(exponent),
        "checks": [_check_json(c) for c in checks],
    }


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format(obj, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    if obj is None or isinstance(obj, (bool, int, str)):
        return json.dumps(obj)
    return json.dumps(str(obj))


# -------------------------------------------------------------- formatting

def fmt_c(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def curve_table(curve) -> str:
    rows = [f"  phi = {curve.phi}", f"  {'eps':>12}  {'pairing':>40}  {'|diff|':>10}  {'quad_err':>9}"]
    prev = None
    for p in curve.points:
        diff = "" if prev is None else f"{abs(p.value - prev):.3e}"
        flag = " *" if p.flagged else ""
        rows.append(f"  {p.eps:12.5e}  {fmt_c(p.value):>40}  {diff:>10}  {p.quad_err:9.2e}{flag}")
        prev = p.value
    return "\n".join(rows)


def checks_table(checks) -> str:
    rows = []
    for c in checks:
        mark = "PASS" if c.passed else "FAIL"
        exp = fmt_c(c.expected) if isinstance(c.expected, (int, float, complex)) and not isinstance(c.expected, bool) else c.expected
        got = fmt_c(c.computed) if isinstance(c.computed, (int, float, complex)) and not isinstance(c.computed, bool) else c.computed
        tol = "" if c.tol is None else f" (tol {c.tol:.2g})"
        rows.append(f"  [{mark}] {c.description}\n         expected {exp}, computed {got}{tol}")
    return "\n".join(rows)


# ---------------------------------------------------------------- commands

@dataclass
class Outcome:
    report: dict
    text: str
    code: int = EXIT_OK


def _genfunc(expr_text: str, cfg: CliConfig):
    return make(parse(expr_text), cfg.params, cfg.singular_points)


def cmd_parse(args, cfg):
    e = parse(args.expr)
    text = format_expr(e)
    return Outcome(make_report("parse", {"expr": args.expr, "formatted": text}), text)


def cmd_eval(args, cfg):
    binding = dict(cfg.params)
    binding.update(parse_bindings(args.at))
    value = complex(E.evaluate(parse(args.expr), binding))
    inputs = {"expr": args.expr, **{k: v for k, v in binding.items()}}
    return Outcome(make_report("eval", inputs, limit=value), fmt_c(value))


def cmd_diff(args, cfg):
    d = E.simplify(E.differentiate(parse(args.expr), args.var))
    text = format_expr(d)
    return Outcome(make_report("diff", {"expr": args.expr, "var": args.var, "derivative": text}), text)


def cmd_pair(args, cfg):
    u = _genfunc(args.expr, cfg)
    phi = cfg.test_functions()[0]
    res = pairing_at(u, phi, args.eps)
    curve = PairingCurve(phi.name, [PairingPoint(args.eps, res.value, res.error, False)])
    rep = make_report("pair", {"expr": args.expr, "phi": phi.name, "eps": args.eps},
                      schedule=[args.eps], curves=[curve], limit=res.value)
    return Outcome(rep, f"<u, {phi.name}> at eps={args.eps:g}: {fmt_c(res.value)}  (error {res.error:.2e})")


def cmd_associate(args, cfg):
    u = _genfunc(args.expr, cfg)
    sched = cfg.schedule
    phis = cfg.test_functions()
    if args.target is not None:
        w = parse_target(args.target)
        report = check_association(u, w, phis, sched, cfg.tol, cfg.tol_abs, cfg.tol_rel)
        results = report.results
        passed = report.passed
    else:
        w, results = None, []
        for phi in phis:
            curve = pairing_curve(u, phi, sched)
            results.append((phi.name, curve, classify_limit(curve, cfg.tol_abs, cfg.tol_rel)))
        passed = all(v.kind == "Converged" for _, _, v in results)
    checks, curves, lines = [], [], []
    rep = DemoReport("associate")
    for r in results:
        if w is not None:
            name, curve, verdict = r.phi, r.curve, r.verdict
            computed = verdict.limit if verdict.kind == "Converged" else verdict.kind
            rep.add(f"limit vs <{w}, {name}>", "association", r.target, computed,
                    cfg.tol * max(1.0, abs(r.target)), passed=r.passed)
        else:
            name, curve, verdict = r
            rep.add(f"pairing with {name} converges", "association", "Converged", verdict.kind)
        curves.append(curve)
        lines.append(curve_table(curve) + f"\n  verdict: {verdict}")
    first = results[0].verdict if w is not None else results[0][2]
    overall = "pass" if passed else "fail"
    report = make_report("associate", {"expr": args.expr, "target": args.target or ""},
                         sched.values, curves, overall, first.limit, first.exponent, rep.checks)
    head = f"u = {format_expr(u.bound)}" + (f"\ntarget: {w}" if w is not None else "")
    text = "\n".join([head, *lines, checks_table(rep.checks), f"association: {overall.upper()}"])
    return Outcome(report, text, EXIT_OK if passed else EXIT_FAIL)


def cmd_moderate(args, cfg):
    u = _genfunc(args.expr, cfg)
    K = tuple(parse_floats(args.interval))
    if len(K) != 2 or not K[0] < K[1]:
        raise UsageError("--interval expects a,b with a < b")
    est = estimate_growth(u, K, args.k, cfg.schedule)
    verdict = "moderate" if est.moderate else "not moderate"
    rows = [f"  {e:12.5e}  {s:.6e}" for e, s in zip(est.eps, est.sups)]
    text = "\n".join([f"sup |d^{args.k} u| on [{K[0]:g}, {K[1]:g}]", *rows,
                      f"N = {est.N:.6g}  ({verdict})"])
    report = make_report("moderate", {"expr": args.expr, "k": args.k, "K_lo": K[0], "K_hi": K[1]},
                         est.eps, verdict=verdict, exponent=est.N)
    report["inputs"]["sups"] = [_num(float(s)) for s in est.sups]
    return Outcome(report, text)


def cmd_equal(args, cfg):
    u, v = _genfunc(args.lhs, cfg), _genfunc(args.rhs, cfg)
    res = equal_in_g(u, v, M=args.M, k_max=args.k_max, sched=cfg.schedule)
    slopes = {str(k): _num(float(s)) for k, s in res.slopes.items()}
    text = "\n".join([f"order {k}: slope {s:.4g}" for k, s in res.slopes.items()] + [f"verdict: {res.verdict}"])
    report = make_report("equal", {"lhs": args.lhs, "rhs": args.rhs, "M": args.M, "k_max": args.k_max},
                         cfg.schedule.values, verdict=res.verdict)
    report["inputs"]["slopes"] = slopes
    return Outcome(report, text)


def cmd_npoint(args, cfg):
    charges, eps, xs = parse_floats(args.charges), parse_floats(args.eps), parse_floats(args.x)
    value = npoint(ChargeConfig(charges, eps, xs))
    report = make_report("npoint", {"charges": charges, "eps": eps, "x": xs}, limit=value)
    return Outcome(report, fmt_c(value))


def cmd_demo(args, cfg):
    rep = run_demo(args.name)
    text = "\n".join([f"demo {rep.name}", checks_table(rep.checks),
                      f"{sum(c.passed for c in rep.checks)}/{len(rep.checks)} checks passed"])
    report = make_report("demo", {"name": rep.name}, rep.schedule, rep.curves,
                         "pass" if rep.passed else "fail", checks=rep.checks)
    return Outcome(report, text, EXIT_OK if rep.passed else EXIT_FAIL)


def cmd_list_demos(args, cfg):
    names = list(REGISTRY)
    report = make_report("list-demos", {"demos": ", ".join(names)})
    return Outcome(report, "\n".join(names))


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--json", action="store_true", help="emit a JSON report")
    g.add_argument("--out", metavar="PATH", help="also write the JSON report to PATH")
    g.add_argument("--param", action="append", metavar="NAME=VALUE",
                   help="bind a parameter (complex values as a+bi); repeatable")
    g.add_argument("--eps0", type=float, default=2.0 ** -4)
    g.add_argument("--ratio", type=float, default=0.5)
    g.add_argument("--count", type=int, default=20)
    g.add_argument("--tol-abs", type=float, default=1e-5)
    g.add_argument("--tol-rel", type=float, default=1e-5)
    g.add_argument("--tol", type=float, default=1e-5, help="residual tolerance against a target")
    g.add_argument("--phi", metavar="NAMES", help="comma-separated test functions")
    g.add_argument("--singular", default="0", metavar="X1,X2", help="singular points of u")

    ap = argparse.ArgumentParser(prog="colombeau", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    add("parse", cmd_parse, "parse and pretty-print an expression").add_argument("--expr", required=True)
    p = add("eval", cmd_eval, "evaluate an expression")
    p.add_argument("--expr", required=True)
    p.add_argument("--at", action="append", metavar="x=..,eps=..", help="bindings")
    p = add("diff", cmd_diff, "symbolic derivative")
    p.add_argument("--expr", required=True)
    p.add_argument("--var", default="x")
    p = add("pair", cmd_pair, "pairing <u_eps, phi> at one eps")
    p.add_argument("--expr", required=True)
    p.add_argument("--eps", type=float, required=True)
    p = add("associate", cmd_associate, "eps-sweep limits, optionally against a target")
    p.add_argument("--expr", required=True)
    p.add_argument("--target", metavar="SPEC")
    p = add("moderate", cmd_moderate, "growth exponent of sup |d^k u_eps|")
    p.add_argument("--expr", required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--interval", default="-1,1", metavar="A,B")
    p = add("equal", cmd_equal, "empirical equality in G")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--M", type=int, default=3)
    p.add_argument("--k-max", type=int, default=3)
    p = add("npoint", cmd_npoint, "n-point function of vertex operators")
    p.add_argument("--charges", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--x", required=True)
    add("demo", cmd_demo, "run a named demo").add_argument("name")
    add("list-demos", cmd_list_demos, "list demo names")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = CliConfig.from_args(args)
        out = args.fn(args, cfg)
    except ParseError as exc:
        print(f"parse error: {exc.message}\n{exc.caret()}", file=sys.stderr)
        return EXIT_USAGE
    except (ColombeauError, ValueError, ZeroDivisionError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps(out.report)
    print(text if cfg.output == "json" else out.text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    return out.code


if __name__ == "__main__":
    sys.exit(main())
