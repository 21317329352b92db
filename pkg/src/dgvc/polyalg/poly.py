"""Exact multivariate polynomials over Q.

Terms are stored as ``{exponent tuple: Fraction}`` with no zero
coefficients.  The global monomial order is graded reverse lexicographic
(weighted degree first, then the reverse-lex tie break on variable index).
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import VariableMismatchError
from ..syntax import ParseError, eval_expr, parse_expression

Exp = tuple[int, ...]
Terms = dict[Exp, Fraction]


def fmt_q(q) -> str:
    """Canonical exact-rational string, ``"p/q"`` or ``"p"``."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_q(s: str) -> Fraction:
    return Fraction(s)


def degree_of(exp: Exp, weights: tuple[int, ...]) -> int:
    return sum(e * w for e, w in zip(exp, weights))


def order_key(exp: Exp, weights: tuple[int, ...]) -> tuple:
    # larger key == larger monomial in grevlex
    return (degree_of(exp, weights), tuple(-e for e in reversed(exp)))


def divides(a: Exp, b: Exp) -> bool:
    return all(map(operator.le, a, b))


def exp_add(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


def exp_lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def terms_add(a: Terms, b: Terms, scale=1) -> Terms:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def terms_mul(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = exp_add(ma, mb)
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


@dataclass(frozen=True)
class PolyRing:
    names: tuple[str, ...]
    weights: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.weights is None:
            object.__setattr__(self, "weights", (1,) * len(self.names))
        if len(self.weights) != len(self.names):
            raise ValueError("one weight per variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def const(self, c) -> "MultiPoly":
        c = Fraction(c)
        return MultiPoly(self, {(0,) * self.nvars: c} if c else {})

    def gen(self, i: int | str) -> "MultiPoly":
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): Fraction(1)})

    def gens(self) -> list["MultiPoly"]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exp: Exp, c=1) -> "MultiPoly":
        return MultiPoly(self, {tuple(exp): Fraction(c)} if c else {})

    def parse(self, src: str) -> "MultiPoly":
        return self.from_expr(parse_expression(src))

    def from_expr(self, expr) -> "MultiPoly":
        def leaf(name, span):
            if name not in self.names:
                raise ParseError(f"unknown variable {name!r}", span, self.names)
            return self.gen(name)

        return eval_expr(expr, leaf, self.one(), self.const)


class MultiPoly:
    """Immutable polynomial in a fixed :class:`PolyRing`."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Exp, Fraction]):
        self.ring = ring
        self.terms: Terms = {tuple(m): Fraction(c) for m, c in terms.items() if c}
        for m in self.terms:
            if len(m) != ring.nvars:
                raise ValueError("exponent length does not match the ring")
        self._hash = None

    # -- structure
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def sorted_terms(self) -> list[tuple[Exp, Fraction]]:
        w = self.ring.weights
        return sorted(self.terms.items(), key=lambda t: order_key(t[0], w), reverse=True)

    def lead(self) -> tuple[Exp, Fraction]:
        w = self.ring.weights
        m = max(self.terms, key=lambda e: order_key(e, w))
        return m, self.terms[m]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(degree_of(m, self.ring.weights) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {degree_of(m, self.ring.weights) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_parts(self) -> dict[int, "MultiPoly"]:
        out: dict[int, Terms] = {}
        for m, c in self.terms.items():
            out.setdefault(degree_of(m, self.ring.weights), {})[m] = c
        return {d: MultiPoly(self.ring, t) for d, t in out.items()}

    def variables_used(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    # -- arithmetic
    def _check(self, other: "MultiPoly"):
        if other.ring != self.ring:
            raise VariableMismatchError(f"{self.ring.names} vs {other.ring.names}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly(self.ring, terms_add(self.terms, o.terms))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly(self.ring, terms_add(self.terms, o.terms, -1))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return MultiPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultiPoly(self.ring, {m: c * other for m, c in self.terms.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly(self.ring, terms_mul(self.terms, o.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        r = self.ring.one()
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, tuple(self.sorted_terms())))
        return self._hash

    def scale_monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        return self * (1 / self.lead()[1])

    # -- evaluation / calculus
    def evaluate(self, point: Iterable) -> Fraction:
        pt = [Fraction(p) for p in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v *= x ** e
            total += v
        return total

    def diff(self, i: int) -> "MultiPoly":
        out: Terms = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return MultiPoly(self.ring, out)

    def substitute(self, values: Mapping[int, "MultiPoly"], ring: PolyRing | None = None) -> "MultiPoly":
        """Replace variable ``i`` by ``values[i]``; other variables are mapped
        by name into ``ring`` (default: the ring of the values)."""
        target = ring or next(iter(values.values())).ring
        out = target.zero()
        for m, c in self.terms.items():
            t = target.const(c)
            for i, e in enumerate(m):
                if not e:
                    continue
                if i in values:
                    t = t * values[i] ** e
                else:
                    t = t * target.gen(self.ring.names[i]) ** e
            out = out + t
        return out

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        return format_terms(self.sorted_terms(), self.ring.names)


def format_monomial(m: Exp, names: tuple[str, ...]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_terms(terms: list[tuple[Exp, Fraction]], names: tuple[str, ...]) -> str:
    if not terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(terms):
        mon = format_monomial(m, names)
        a = abs(c)
        if not mon:
            body = fmt_q(a)
        elif a == 1:
            body = mon
        else:
            body = f"{fmt_q(a)}*{mon}"
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)
