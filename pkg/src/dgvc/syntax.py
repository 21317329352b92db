"""Tokenizer and arithmetic-expression parser shared by the polynomial
reader and the scenario DSL.

Every token and AST node carries a :class:`Span` so that diagnostics can
point at ``line:column``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import DgvcError


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"

    def to_json(self) -> dict:
        return {"line": self.line, "col": self.col, "end_line": self.end_line, "end_col": self.end_col}


class ParseError(DgvcError):
    """Lexical or syntax error with a position and the expected-token set."""

    def __init__(self, message: str, span: Span, expected: Iterable[str] = ()):
        self.span = span
        self.expected = sorted(set(expected))
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{span}: {message}{exp}")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, INT, OP, EOF
    text: str
    span: Span


PUNCT = ("->", "==", "(", ")", "[", "]", "{", "}", ",", ";", ":", "=", "+", "-", "*", "/", "^")


def tokenize(src: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and src[i] != "\n":
                i += 1
            continue
        start = (line, col)
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            text = src[i:j]
            col += j - i
            i = j
            toks.append(Token("INT", text, Span(start[0], start[1], line, col)))
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] in "_'"):
                j += 1
            text = src[i:j]
            col += j - i
            i = j
            toks.append(Token("NAME", text, Span(start[0], start[1], line, col)))
            continue
        for p in PUNCT:
            if src.startswith(p, i):
                i += len(p)
                col += len(p)
                toks.append(Token("OP", p, Span(start[0], start[1], line, col)))
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", Span(line, col, line, col + 1))
    toks.append(Token("EOF", "", Span(line, col, line, col)))
    return toks


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        if t.kind != "EOF":
            self.pos += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind in ("OP", "NAME") and t.text == text

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.kind in ("OP", "NAME") and t.text == text:
            return self.next()
        raise ParseError(f"unexpected {describe(t)}", t.span, [repr(text)])

    def expect_kind(self, kind: str, label: str) -> Token:
        t = self.peek()
        if t.kind == kind:
            return self.next()
        raise ParseError(f"unexpected {describe(t)}", t.span, [label])


def describe(t: Token) -> str:
    if t.kind == "EOF":
        return "end of input"
    return f"{t.text!r}"


# ---------------------------------------------------------------- expressions

@dataclass(frozen=True)
class Num:
    value: int
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    arg: "Expr"
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"
    span: Span = field(compare=False, repr=False)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int
    span: Span = field(compare=False, repr=False)


Expr = Num | Var | Neg | BinOp | Pow


def _join(a: Span, b: Span) -> Span:
    return Span(a.line, a.col, b.end_line, b.end_col)


def parse_expr(ts: TokenStream) -> Expr:
    left = _parse_term(ts)
    while ts.peek().kind == "OP" and ts.peek().text in ("+", "-"):
        op = ts.next().text
        right = _parse_term(ts)
        left = BinOp(op, left, right, _join(left.span, right.span))
    return left


def _parse_term(ts: TokenStream) -> Expr:
    left = _parse_unary(ts)
    while ts.peek().kind == "OP" and ts.peek().text in ("*", "/"):
        op = ts.next().text
        right = _parse_unary(ts)
        left = BinOp(op, left, right, _join(left.span, right.span))
    return left


def _parse_unary(ts: TokenStream) -> Expr:
    t = ts.peek()
    if t.kind == "OP" and t.text == "-":
        ts.next()
        arg = _parse_unary(ts)
        return Neg(arg, _join(t.span, arg.span))
    if t.kind == "OP" and t.text == "+":
        ts.next()
        return _parse_unary(ts)
    return _parse_power(ts)


def _parse_power(ts: TokenStream) -> Expr:
    base = _parse_atom(ts)
    if ts.accept("^"):
        neg = ts.accept("-") is not None
        t = ts.expect_kind("INT", "integer exponent")
        e = int(t.text)
        return Pow(base, -e if neg else e, _join(base.span, t.span))
    return base


def _parse_atom(ts: TokenStream) -> Expr:
    t = ts.peek()
    if t.kind == "INT":
        ts.next()
        return Num(int(t.text), t.span)
    if t.kind == "NAME":
        ts.next()
        return Var(t.text, t.span)
    if t.kind == "OP" and t.text == "(":
        ts.next()
        e = parse_expr(ts)
        ts.expect(")")
        return e
    raise ParseError(f"unexpected {describe(t)}", t.span, ["number", "name", "'('"])


def parse_expression(src: str) -> Expr:
    ts = TokenStream(tokenize(src))
    e = parse_expr(ts)
    t = ts.peek()
    if t.kind != "EOF":
        raise ParseError(f"unexpected {describe(t)}", t.span, ["end of input", "operator"])
    return e


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_expr(e: Expr, parent: int = 0) -> str:
    """Render an expression with the minimal parentheses needed to re-parse
    to the same tree."""
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        s = "-" + format_expr(e.arg, 3)
        return f"({s})" if parent >= 2 else s
    if isinstance(e, Pow):
        return f"{format_expr(e.base, 4)}^{e.exp}"
    p = _PREC[e.op]
    s = f"{format_expr(e.left, p)} {e.op} {format_expr(e.right, p + 1)}"
    return f"({s})" if p < parent else s


def eval_expr(e: Expr, leaf, one, scalar):
    """Fold an expression tree into an algebra.

    ``leaf(name, span)`` maps a variable name to an algebra element,
    ``one`` is the unit and ``scalar(q)`` embeds a rational.
    Division is only allowed by nonzero constants.
    """
    if isinstance(e, Num):
        return scalar(Fraction(e.value))
    if isinstance(e, Var):
        return leaf(e.name, e.span)
    if isinstance(e, Neg):
        return -eval_expr(e.arg, leaf, one, scalar)
    if isinstance(e, Pow):
        if e.exp < 0:
            raise ParseError("negative exponents are not allowed here", e.span)
        b = eval_expr(e.base, leaf, one, scalar)
        r = one
        for _ in range(e.exp):
            r = r * b
        return r
    a = eval_expr(e.left, leaf, one, scalar)
    if e.op == "/":
        q = constant_value(e.right)
        if q is None or q == 0:
            raise ParseError("division only by nonzero constants", e.right.span)
        return a * scalar(1 / q)
    b = eval_expr(e.right, leaf, one, scalar)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    return a * b


def constant_value(e: Expr) -> Fraction | None:
    if isinstance(e, Num):
        return Fraction(e.value)
    if isinstance(e, Neg):
        v = constant_value(e.arg)
        return None if v is None else -v
    if isinstance(e, Pow):
        v = constant_value(e.base)
        if v is None or (v == 0 and e.exp < 0):
            return None
        return v ** e.exp
    if isinstance(e, BinOp):
        a, b = constant_value(e.left), constant_value(e.right)
        if a is None or b is None:
            return None
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        return None if b == 0 else a / b
    return None
