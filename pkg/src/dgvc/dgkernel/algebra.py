"""Free graded-commutative algebras over a polynomial ring and their derivations.

A supermonomial is an exponent tuple over the generators; generators of odd
degree appear with exponent 0 or 1.  Elements are dicts mapping supermonomials
to nonzero base-ring coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from ..polyalg.poly import MultiPoly, PolyRing

Mono = tuple[int, ...]
Element = dict  # Mono -> MultiPoly


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    @property
    def odd(self) -> bool:
        return self.degree % 2 != 0


def elem_add(a: Element, b: Element, scale: MultiPoly | None = None) -> Element:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m)
        c = c if scale is None else c * scale
        v = c if v is None else v + c
        if v.is_zero():
            out.pop(m, None)
        else:
            out[m] = v
    return out


def elem_scale(a: Element, s) -> Element:
    out = {}
    for m, c in a.items():
        v = c * s
        if not v.is_zero():
            out[m] = v
    return out


def elem_is_zero(a: Element) -> bool:
    return not a


class FreeGCAlgebra:
    """``R[g_1, .., g_k]`` graded-commutative, generators in degrees <= -1."""

    def __init__(self, base: PolyRing, generators: Sequence[Generator]):
        self.base = base
        self.generators = tuple(generators)
        self.k = len(self.generators)
        self.degrees = tuple(g.degree for g in self.generators)
        self.odd = tuple(g.odd for g in self.generators)
        self._index = {g.name: i for i, g in enumerate(self.generators)}

    def index(self, name: str) -> int:
        return self._index[name]

    @property
    def unit_mono(self) -> Mono:
        return (0,) * self.k

    def mono_degree(self, m: Mono) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def one(self) -> Element:
        return {self.unit_mono: self.base.one()}

    def scalar(self, p: MultiPoly) -> Element:
        return {} if p.is_zero() else {self.unit_mono: p}

    def gen(self, i: int | str) -> Element:
        if isinstance(i, str):
            i = self._index[i]
        return {tuple(int(j == i) for j in range(self.k)): self.base.one()}

    def mul_mono(self, a: Mono, b: Mono) -> tuple[int, Mono] | None:
        """Product of supermonomials as (sign, monomial), or None when zero."""
        sign = 1
        odd_in_a_after = 0  # running count of odd generators of a with larger index
        # sign = (-1)^{#pairs i>j, a_i odd, b_j odd}
        for j in range(self.k - 1, -1, -1):
            if self.odd[j]:
                if b[j] and a[j]:
                    return None
                if b[j] and odd_in_a_after % 2:
                    sign = -sign
                if a[j]:
                    odd_in_a_after += 1
        return sign, tuple(x + y for x, y in zip(a, b))

    def mul(self, x: Element, y: Element) -> Element:
        out: Element = {}
        for ma, ca in x.items():
            for mb, cb in y.items():
                r = self.mul_mono(ma, mb)
                if r is None:
                    continue
                s, m = r
                out = elem_add(out, {m: ca * cb * s})
        return out

    def monomials_of_degree(self, i: int) -> list[Mono]:
        return list(_monomials(self.degrees, self.odd, i))

    def mono_str(self, m: Mono) -> str:
        parts = []
        for g, e in zip(self.generators, m):
            if e == 1:
                parts.append(g.name)
            elif e:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) or "1"

    def elem_str(self, x: Element) -> str:
        if not x:
            return "0"
        out = []
        for m in sorted(x, key=lambda m: (self.mono_degree(m), m), reverse=True):
            c = x[m]
            ms = self.mono_str(m)
            cs = str(c)
            if ms == "1":
                out.append(f"({cs})" if len(c.terms) > 1 else cs)
            elif c == self.base.one():
                out.append(ms)
            else:
                out.append(f"({cs})*{ms}")
        return " + ".join(out)


@lru_cache(maxsize=None)
def _monomials(degrees: tuple[int, ...], odd: tuple[bool, ...], target: int) -> tuple[Mono, ...]:
    """All supermonomials of total degree ``target`` (generators of degree <= -1)."""
    k = len(degrees)
    out: list[Mono] = []

    def rec(i: int, remaining: int, acc: list[int]):
        if i == k:
            if remaining == 0:
                out.append(tuple(acc))
            return
        d = degrees[i]
        if d >= 0:
            acc.append(0)
            rec(i + 1, remaining, acc)
            acc.pop()
            return
        top = 1 if odd[i] else remaining // d
        for e in range(0, max(top, 0) + 1):
            if e * d < remaining:
                break
            acc.append(e)
            rec(i + 1, remaining - e * d, acc)
            acc.pop()

    if target <= 0:
        rec(0, target, [])
    out.sort(reverse=True)
    return tuple(out)


class Derivation:
    """Degree +1 derivation determined by its values on generators."""

    def __init__(self, alg: FreeGCAlgebra, images: Sequence[Element]):
        self.alg = alg
        self.images = tuple(dict(x) for x in images)
        self._cache: dict[Mono, Element] = {}

    def on_mono(self, m: Mono) -> Element:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        alg = self.alg
        i = next((j for j, e in enumerate(m) if e), None)
        if i is None:
            res: Element = {}
        else:
            rest = list(m)
            rest[i] -= 1
            rest = tuple(rest)
            rest_el = {rest: alg.base.one()}
            first = alg.mul(self.images[i], rest_el)
            tail = alg.mul(alg.gen(i), self.on_mono(rest))
            sign = -1 if alg.odd[i] else 1
            res = elem_add(first, tail, alg.base.const(sign))
        self._cache[m] = res
        return res

    def __call__(self, x: Element) -> Element:
        out: Element = {}
        for m, c in x.items():
            out = elem_add(out, self.on_mono(m), c)
        return out


def image_of(images: Mapping[str, Element], alg: FreeGCAlgebra) -> list[Element]:
    return [dict(images.get(g.name, {})) for g in alg.generators]
