"""Exact rational functions in canonical form (gcd removed, monic denominator)."""

from __future__ import annotations

from fractions import Fraction

from ..errors import PoleError, VariableMismatchError
from .modules import module_kernel, vec_to_column
from .poly import MultiPoly, PolyRing, exp_sub, divides


def poly_divmod(f: MultiPoly, g: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Division with remainder by a single polynomial (grevlex leading terms).

    The remainder is zero whenever g divides f exactly.
    """
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    lm, lc = g.lead()
    q: dict = {}
    r = f
    rem: dict = {}
    while not r.is_zero():
        m, c = r.lead()
        if divides(lm, m):
            t = exp_sub(m, lm)
            q[t] = q.get(t, 0) + c / lc
            r = r - g * f.ring.monomial(t, c / lc)
        else:
            rem[m] = c
            r = r - f.ring.monomial(m, c)
    return MultiPoly(f.ring, q), MultiPoly(f.ring, rem)


def exact_div(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    q, r = poly_divmod(f, g)
    if not r.is_zero():
        raise ValueError("inexact polynomial division")
    return q


def _univariate_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    a, b = f, g
    while not b.is_zero():
        _, r = poly_divmod(a, b)
        a, b = b, r
    return a.scale_monic()


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Monic gcd of two polynomials over Q."""
    if f.ring != g.ring:
        raise VariableMismatchError("gcd of polynomials in different rings")
    if f.is_zero():
        return g.scale_monic()
    if g.is_zero():
        return f.scale_monic()
    if f.is_constant() or g.is_constant():
        return f.ring.one()
    used = f.variables_used() | g.variables_used()
    if len(used) <= 1:
        return _univariate_gcd(f, g)
    # ker (f, g): R^2 -> R is free of rank one, generated by (g/h, -f/h)
    ker = module_kernel([[f, g]], f.ring)
    cols = ker.columns()
    best = None
    for a, _ in cols:
        if a.is_zero():
            continue
        if best is None or a.total_degree() < best.total_degree():
            best = a
    return exact_div(g, best).scale_monic()


class RationalFunction:
    """Quotient of two polynomials over the same parameter ring."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, *, canonical: bool = False):
        if den is None:
            den = num.ring.one()
        if num.ring != den.ring:
            raise VariableMismatchError("numerator and denominator rings differ")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not canonical:
            num, den = _canonical(num, den)
        self.num = num
        self.den = den

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __add__(self, o):
        o = self._coerce(o)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o)
        return RationalFunction(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __neg__(self):
        return RationalFunction(-self.num, self.den, canonical=True)

    def __mul__(self, o):
        o = self._coerce(o)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def _coerce(self, o) -> "RationalFunction":
        if isinstance(o, RationalFunction):
            return o
        if isinstance(o, MultiPoly):
            return RationalFunction(o)
        if isinstance(o, (int, Fraction)):
            return RationalFunction(self.ring.const(o))
        raise TypeError(f"cannot coerce {type(o).__name__}")

    def __eq__(self, o):
        if isinstance(o, (int, Fraction, MultiPoly)):
            o = self._coerce(o)
        if not isinstance(o, RationalFunction):
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def evaluate(self, point) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise PoleError("denominator vanishes at the evaluation point")
        return self.num.evaluate(point) / d

    def __str__(self):
        if self.den == self.ring.one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _canonical(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    if num.is_zero():
        return num, den.ring.one()
    g = poly_gcd(num, den)
    if not g.is_constant():
        num = exact_div(num, g)
        den = exact_div(den, g)
    lc = den.lead()[1]
    return num * (1 / lc), den * (1 / lc)
