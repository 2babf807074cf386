"""Text syntax for :class:`~colombeau.expr.Expr`.

Grammar (ASCII only)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right associative
    atom   := number | symbol | func '(' expr ')' | '(' expr ')'

so ``-x^2`` is ``-(x^2)`` and ``x^-2`` is ``x^(-2)``. ``i`` and ``pi`` are
reserved constants, ``x`` and ``eps`` are the reserved variables, and any
other identifier is a free parameter. There is no implicit multiplication.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import ColombeauError
from .expr import FUNCTIONS, Expr, bump, const, sym

RESERVED_CONSTANTS = {"i": 1j, "pi": math.pi}
_PARSE_FUNCS = tuple(f for f in FUNCTIONS if f != "bump") + ("bump",)
_BUMP_DERIV = re.compile(r"bump_d([1-9][0-9]*)$")

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),:])"
    r")"
)


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(ColombeauError):
    def __init__(self, message: str, span: SourceSpan, text: str = ""):
        super().__init__(f"{message} at offset {span.start}")
        self.message = message
        self.span = span
        self.text = text

    def caret(self) -> str:
        """The input with a caret line under the offending position."""
        return f"{self.text}\n{' ' * self.span.start}^ {self.message}"


@dataclass(frozen=True)
class Token:
    kind: str  # number, ident, op, end
    text: str
    span: SourceSpan


def tokenize(text: str) -> list[Token]:
    if not text.isascii():
        bad = next(i for i, ch in enumerate(text) if not ch.isascii())
        raise ParseError("non-ASCII character", SourceSpan(bad, bad + 1), text)
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             SourceSpan(pos, pos + 1), text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), SourceSpan(start, m.end())))
        pos = m.end()
    tokens.append(Token("end", "", SourceSpan(len(text), len(text))))
    return tokens


class Parser:
    """Recursive-descent parser over a token list.

    Exposed so that small wrappers (the CLI's target-distribution syntax)
    can reuse the expression rules on the same token stream.
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "end":
            self.pos += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.span, self.text)

    def expect(self, text: str) -> Token:
        if not self.at("op", text):
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            self.error(f"expected {text!r}, found {found}")
        return self.advance()

    def parse_expr(self) -> Expr:
        left = self.parse_term()
        while self.at("op", "+") or self.at("op", "-"):
            op = self.advance().text
            right = self.parse_term()
            left = Expr("add" if op == "+" else "sub", (left, right))
        return left

    def parse_term(self) -> Expr:
        left = self.parse_unary()
        while self.at("op", "*") or self.at("op", "/"):
            op = self.advance().text
            right = self.parse_unary()
            left = Expr("mul" if op == "*" else "div", (left, right))
        return left

    def parse_unary(self) -> Expr:
        if self.at("op", "-"):
            self.advance()
            return Expr("neg", (self.parse_unary(),))
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.at("op", "^"):
            self.advance()
            return Expr("pow", (base, self.parse_unary()))
        return base

    def parse_atom(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return const(float(t.text))
        if t.kind == "ident":
            self.advance()
            name = t.text
            if self.at("op", "("):
                m = _BUMP_DERIV.match(name)
                if name not in _PARSE_FUNCS and not m:
                    self.error(f"unknown function {name!r}", t)
                self.advance()
                arg = self.parse_expr()
                self.expect(")")
                if m:
                    return bump(arg, int(m.group(1)))
                if name == "bump":
                    return bump(arg)
                return Expr(name, (arg,))
            if name in _PARSE_FUNCS or _BUMP_DERIV.match(name):
                self.error(f"function {name!r} needs an argument list", self.tok)
            if name in RESERVED_CONSTANTS:
                return const(RESERVED_CONSTANTS[name])
            return sym(name)
        if self.at("op", "("):
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        found = "end of input" if t.kind == "end" else repr(t.text)
        self.error(f"expected a number, symbol, function or '(', found {found}")

    def finish(self):
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r} after complete expression")


def parse(text: str) -> Expr:
    """Parse ``text`` into an Expr; raises :class:`ParseError` with a span."""
    p = Parser(text)
    e = p.parse_expr()
    p.finish()
    return e


# ------------------------------------------------------------------ format

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}
_ATOM = 5
_BINOP = {"add": " + ", "sub": " - ", "mul": "*", "div": "/", "pow": "^"}


def _format_real(v: float) -> str:
    if v == math.pi:
        return "pi"
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _format_const(c: complex) -> tuple[str, int]:
    re_, im = c.real, c.imag
    if im == 0 and re_ >= 0 and math.isfinite(re_):
        return _format_real(re_), _ATOM
    if re_ == 0 and im == 1:
        return "i", _ATOM
    # not expressible as a single literal: emit an equivalent expression
    if im == 0:
        return "-" + _format_real(-re_), _PREC["neg"]
    imag = "i" if abs(im) == 1 else f"{_format_real(abs(im))}*i"
    if re_ == 0:
        return ("-" if im < 0 else "") + imag, (_PREC["neg"] if im < 0 else _PREC["mul"])
    real = _format_real(abs(re_))
    text = ("-" if re_ < 0 else "") + real + (" - " if im < 0 else " + ") + imag
    return text, _PREC["add"]


def _fmt(e: Expr) -> tuple[str, int]:
    k = e.kind
    if k == "const":
        return _format_const(e.value)
    if k == "sym":
        return e.name, _ATOM
    if k == "neg":
        inner, p = _fmt(e.args[0])
        if p < _PREC["neg"]:
            inner = f"({inner})"
        return "-" + inner, _PREC["neg"]
    if k in _BINOP:
        prec = _PREC[k]
        (ls, lp), (rs, rp) = _fmt(e.args[0]), _fmt(e.args[1])
        if k == "pow":
            left_min, right_min = _ATOM, _PREC["neg"]
        else:
            left_min, right_min = prec, prec + 1
        if lp < left_min:
            ls = f"({ls})"
        if rp < right_min:
            rs = f"({rs})"
        return ls + _BINOP[k] + rs, prec
    arg, _ = _fmt(e.args[0])
    name = k if not (k == "bump" and e.order) else f"bump_d{e.order}"
    return f"{name}({arg})", _ATOM


def format_expr(e: Expr) -> str:
    """Render ``e`` with minimal parentheses; ``parse`` inverts it."""
    return _fmt(e)[0]
