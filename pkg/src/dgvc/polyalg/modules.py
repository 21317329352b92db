"""Ideals, submodules and finitely presented modules over a polynomial ring.

Everything here is immutable once built; Groebner bases are computed once on
first use and cached.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from ..config import LIMITS, Limits
from ..errors import UngradedError, VariableMismatchError
from . import linalg
from .groebner import Vec, groebner_basis, lead_key, reduce_vec, syzygies, vkey
from .poly import Exp, MultiPoly, PolyRing, degree_of, divides, exp_add, exp_sub

INFINITE = "infinite"


def poly_to_vec(p: MultiPoly, pos: int = 0) -> Vec:
    return {(pos, m): c for m, c in p.terms.items()}


def column_to_vec(col: Sequence[MultiPoly]) -> Vec:
    v: Vec = {}
    for pos, p in enumerate(col):
        for m, c in p.terms.items():
            v[(pos, m)] = c
    return v


def vec_to_column(v: Vec, ring: PolyRing, rank: int) -> list[MultiPoly]:
    parts: list[dict] = [{} for _ in range(rank)]
    for (p, m), c in v.items():
        parts[p][m] = c
    return [MultiPoly(ring, t) for t in parts]


# ------------------------------------------------------------------ ideals

class PolyIdeal:
    """Ideal of a polynomial ring given by generators."""

    def __init__(self, ring: PolyRing, generators: Sequence[MultiPoly], limits: Limits | None = None):
        for g in generators:
            if g.ring != ring:
                raise VariableMismatchError(f"generator in {g.ring.names}, ideal in {ring.names}")
        self.ring = ring
        self.generators = tuple(g for g in generators)
        self.limits = limits or LIMITS

    @cached_property
    def groebner(self) -> tuple[MultiPoly, ...]:
        return buchberger(self)

    def normal_form(self, p: MultiPoly) -> MultiPoly:
        return normal_form(p, self.groebner)

    def contains(self, p: MultiPoly) -> bool:
        return self.normal_form(p).is_zero()

    def is_zero_ideal(self) -> bool:
        return not self.groebner

    def is_unit(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.groebner)

    def __mul__(self, other: "PolyIdeal") -> "PolyIdeal":
        return PolyIdeal(self.ring, [a * b for a in self.generators for b in other.generators], self.limits)

    def __add__(self, other: "PolyIdeal") -> "PolyIdeal":
        return PolyIdeal(self.ring, list(self.generators) + list(other.generators), self.limits)

    def power(self, n: int) -> "PolyIdeal":
        """J^n, generated by products of reduced bases of J^(n-1) and J (memoized)."""
        if n == 0:
            return PolyIdeal(self.ring, [self.ring.one()], self.limits)
        if n == 1:
            return self
        cache = self.__dict__.setdefault("_powers", {})
        if n not in cache:
            prev = self.power(n - 1)
            prods = {a * b for a in prev.groebner for b in self.groebner}
            cache[n] = PolyIdeal(self.ring, sorted(prods, key=str), self.limits)
        return cache[n]

    def same_ideal(self, other: "PolyIdeal") -> bool:
        return self.groebner == other.groebner

    def quotient_module(self) -> "FpGradedModule":
        return FpGradedModule(self.ring, 1, [poly_to_vec(g) for g in self.generators],
                              shifts=(0,) if self.is_homogeneous() else None, limits=self.limits)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def __repr__(self):
        return f"PolyIdeal({', '.join(map(str, self.generators))})"


def buchberger(ideal: PolyIdeal) -> tuple[MultiPoly, ...]:
    """Reduced Groebner basis of ``ideal`` for the global grevlex order."""
    w = ideal.ring.weights
    gb = groebner_basis([poly_to_vec(g) for g in ideal.generators if not g.is_zero()], w,
                        ideal.limits, is_ideal=True)
    return tuple(MultiPoly(ideal.ring, {m: c for (_, m), c in v.items()}) for v in gb)


def normal_form(p: MultiPoly, basis: Sequence[MultiPoly]) -> MultiPoly:
    for g in basis:
        if g.ring != p.ring:
            raise VariableMismatchError(f"{p.ring.names} vs {g.ring.names}")
    if p.is_zero():
        return p
    r = reduce_vec(poly_to_vec(p), [poly_to_vec(g) for g in basis if not g.is_zero()], p.ring.weights)
    return MultiPoly(p.ring, {m: c for (_, m), c in r.items()})


def quotient_dimension(ideal: PolyIdeal) -> int | str:
    """dim_Q of R/I, or ``"infinite"``."""
    return ideal.quotient_module().dimension()


# ------------------------------------------------------------- submodules

class Submodule:
    """Submodule of ``R^rank`` generated by vectors; optional generator
    degrees (``shifts``) of the ambient free module make it graded."""

    def __init__(self, ring: PolyRing, rank: int, generators: Sequence[Vec],
                 shifts: Sequence[int] | None = None, limits: Limits | None = None):
        self.ring = ring
        self.rank = rank
        self.generators = tuple(dict(g) for g in generators if g)
        self.shifts = tuple(shifts) if shifts is not None else None
        self.limits = limits or LIMITS

    @cached_property
    def gb(self) -> tuple[Vec, ...]:
        return tuple(groebner_basis(self.generators, self.ring.weights, self.limits, is_ideal=self.rank == 1))

    def columns(self) -> list[list[MultiPoly]]:
        return [vec_to_column(g, self.ring, self.rank) for g in self.generators]

    def contains(self, v: Vec) -> bool:
        return not reduce_vec(v, self.gb, self.ring.weights)

    def degree_of_vec(self, v: Vec) -> int | None:
        if self.shifts is None:
            return None
        degs = {degree_of(m, self.ring.weights) + self.shifts[p] for (p, m) in v}
        return degs.pop() if len(degs) == 1 else None

    def generator_degrees(self) -> tuple[int, ...] | None:
        if self.shifts is None:
            return None
        out = []
        for g in self.generators:
            d = self.degree_of_vec(g)
            if d is None:
                return None
            out.append(d)
        return tuple(out)

    def quotient(self) -> "FpGradedModule":
        return FpGradedModule(self.ring, self.rank, self.generators, self.shifts, self.limits)

    def as_module(self) -> "FpGradedModule":
        """Presentation of the submodule itself (generators modulo syzygies)."""
        syz = syzygies(list(self.generators), self.rank, self.ring.weights, self.limits)
        return FpGradedModule(self.ring, len(self.generators), syz, self.generator_degrees(), self.limits)


def module_kernel(matrix: Sequence[Sequence[MultiPoly]], ring: PolyRing, ncols: int | None = None,
                  source_shifts: Sequence[int] | None = None, limits: Limits | None = None) -> Submodule:
    """Kernel of the map ``R^m -> R^r`` given by an r x m matrix (rows)."""
    r = len(matrix)
    m = ncols if ncols is not None else (len(matrix[0]) if matrix else 0)
    cols = []
    for j in range(m):
        v: Vec = {}
        for i in range(r):
            for mon, c in matrix[i][j].terms.items():
                v[(i, mon)] = c
        cols.append(v)
    if all(not c for c in cols):
        zero = (0,) * ring.nvars
        gens = [{(j, zero): Fraction(1)} for j in range(m)]
    else:
        gens = syzygies(cols, r, ring.weights, limits)
    return Submodule(ring, m, gens, source_shifts, limits)


def apply_matrix(matrix: Sequence[Sequence[MultiPoly]], v: Vec, ring: PolyRing) -> Vec:
    out: dict = {}
    for (j, mon), c in v.items():
        for i, row in enumerate(matrix):
            for m2, c2 in row[j].terms.items():
                k = (i, exp_add(mon, m2))
                val = out.get(k, 0) + c * c2
                if val:
                    out[k] = val
                else:
                    out.pop(k, None)
    return out


# ---------------------------------------------------------- graded modules

class FpGradedModule:
    """Cokernel ``R^rank / <relations>``; graded when ``shifts`` is given and
    every relation is homogeneous for it."""

    def __init__(self, ring: PolyRing, rank: int, relations: Sequence[Vec],
                 shifts: Sequence[int] | None = None, limits: Limits | None = None):
        self.ring = ring
        self.rank = rank
        self.relations = tuple(dict(r) for r in relations if r)
        self.limits = limits or LIMITS
        sh = tuple(shifts) if shifts is not None else None
        if sh is not None:
            for rel in self.relations:
                degs = {degree_of(m, ring.weights) + sh[p] for (p, m) in rel}
                if len(degs) > 1:
                    sh = None
                    break
        self.shifts = sh

    @property
    def is_graded(self) -> bool:
        return self.shifts is not None

    @cached_property
    def gb(self) -> tuple[Vec, ...]:
        return tuple(groebner_basis(self.relations, self.ring.weights, self.limits, is_ideal=self.rank == 1))

    def leading_monomials(self) -> dict[int, list[Exp]]:
        out: dict[int, list[Exp]] = {p: [] for p in range(self.rank)}
        for g in self.gb:
            p, m = lead_key(g, self.ring.weights)
            out[p].append(m)
        return out

    def is_zero(self) -> bool:
        zero = (0,) * self.ring.nvars
        lms = self.leading_monomials()
        return all(zero in lms[p] for p in range(self.rank))

    def is_finite(self) -> bool:
        n = self.ring.nvars
        for p, lms in self.leading_monomials().items():
            zero = (0,) * n
            if zero in lms:
                continue
            for i in range(n):
                if not any(m[i] > 0 and all(m[k] == 0 for k in range(n) if k != i) for m in lms):
                    return False
        return True

    @cached_property
    def standard_basis(self) -> tuple[tuple[int, Exp], ...] | None:
        """Standard monomials ``(position, exponent)`` when finite."""
        if not self.is_finite():
            return None
        n = self.ring.nvars
        out = []
        for p, lms in sorted(self.leading_monomials().items()):
            zero = (0,) * n
            if zero in lms:
                continue
            # the staircase is an order ideal: grow it one variable step at a time
            layer = [zero]
            while layer:
                out.extend((p, e) for e in layer)
                nxt = set()
                for e in layer:
                    for i in range(n):
                        f = e[:i] + (e[i] + 1,) + e[i + 1:]
                        if f not in nxt and not any(divides(m, f) for m in lms):
                            nxt.add(f)
                layer = list(nxt)
        out.sort(key=lambda k: vkey(k, self.ring.weights), reverse=True)
        return tuple(out)

    def dimension(self) -> int | str:
        sb = self.standard_basis
        return INFINITE if sb is None else len(sb)

    def normal_form(self, v: Vec) -> Vec:
        return reduce_vec(v, self.gb, self.ring.weights)

    def finite(self) -> "FiniteModule":
        sb = self.standard_basis
        if sb is None:
            raise ValueError("module is not finite-dimensional")
        index = {k: i for i, k in enumerate(sb)}
        n = len(sb)
        mats = []
        for var in range(self.ring.nvars):
            M = linalg.zeros(n, n)
            unit = tuple(int(i == var) for i in range(self.ring.nvars))
            for j, (p, e) in enumerate(sb):
                img = self.normal_form({(p, exp_add(e, unit)): Fraction(1)})
                for k, c in img.items():
                    M[index[k]][j] = c
            mats.append(M)
        return FiniteModule(n, tuple(mats), sb)

    def coordinates(self, v: Vec) -> list[Fraction]:
        """Coordinates of the class of ``v`` in the standard basis."""
        sb = self.standard_basis
        index = {k: i for i, k in enumerate(sb)}
        out = [Fraction(0)] * len(sb)
        for k, c in self.normal_form(v).items():
            out[index[k]] = c
        return out

    def hilbert_series(self) -> "HilbertSeries":
        if not self.is_graded:
            raise UngradedError("Hilbert series needs a graded module")
        num: dict[int, int] = {}
        for p, lms in self.leading_monomials().items():
            part = hilbert_numerator(tuple(sorted(set(lms))), self.ring.weights)
            for d, c in part.items():
                num[d + self.shifts[p]] = num.get(d + self.shifts[p], 0) + c
        return HilbertSeries(num, self.ring.weights)

    def hilbert_function(self, upto: int) -> list[int]:
        return self.hilbert_series().coefficients(upto)

    def __repr__(self):
        return f"FpGradedModule(rank={self.rank}, relations={len(self.relations)})"


# ----------------------------------------------------------- Hilbert series

def _minimalize(gens):
    gens = sorted(set(gens), key=lambda m: (sum(m), m))
    out = []
    for g in gens:
        if not any(divides(h, g) for h in out):
            out.append(g)
    return tuple(out)


@lru_cache(maxsize=4096)
def hilbert_numerator(gens: tuple[Exp, ...], weights: tuple[int, ...]) -> dict[int, int]:
    """Numerator K(t) with HS(R/I) = K(t) / prod(1 - t^w) for a monomial ideal."""
    gens = _minimalize(gens)
    if not gens:
        return {0: 1}
    if any(not any(g) for g in gens):
        return {}
    supports = [frozenset(i for i, e in enumerate(g) if e) for g in gens]
    if all(not (a & b) for a, b in itertools.combinations(supports, 2)):
        out = {0: 1}
        for g in gens:
            out = _poly_mul(out, {0: 1, degree_of(g, weights): -1})
        return out
    counts: dict[int, int] = {}
    for g, s in zip(gens, supports):
        if len(s) > 1:
            for i in s:
                counts[i] = counts.get(i, 0) + 1
    var = max(counts, key=lambda i: (counts[i], -i))
    piv = tuple(int(i == var) for i in range(len(weights)))
    with_piv = hilbert_numerator(_minimalize(gens + (piv,)), weights)
    colon = _minimalize(tuple(exp_sub(g, tuple(min(a, b) for a, b in zip(g, piv))) for g in gens))
    quot = hilbert_numerator(colon, weights)
    shifted = {d + weights[var]: c for d, c in quot.items()}
    return _poly_add(with_piv, shifted)


def _poly_mul(a, b):
    out: dict[int, int] = {}
    for da, ca in a.items():
        for db, cb in b.items():
            out[da + db] = out.get(da + db, 0) + ca * cb
    return {d: c for d, c in out.items() if c}


def _poly_add(a, b):
    out = dict(a)
    for d, c in b.items():
        out[d] = out.get(d, 0) + c
    return {d: c for d, c in out.items() if c}


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator(t) / prod_w (1 - t^w)`` with an integer Laurent numerator."""

    numerator_terms: dict
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "numerator_terms", {d: c for d, c in self.numerator_terms.items() if c})

    def coefficients(self, upto: int, start: int = 0) -> list[int]:
        """Coefficients of t^start .. t^upto of the series expansion."""
        lo = min([start] + list(self.numerator_terms))
        series = [0] * (upto - lo + 1)
        for d, c in self.numerator_terms.items():
            if d <= upto:
                series[d - lo] += c
        for w in self.weights:
            for k in range(w, len(series)):
                series[k] += series[k - w]
        return series[start - lo:]

    def __eq__(self, other):
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        a = self.numerator_terms
        for w in other.weights:
            a = _poly_mul(a, {0: 1, w: -1})
        b = other.numerator_terms
        for w in self.weights:
            b = _poly_mul(b, {0: 1, w: -1})
        return a == b

    def __hash__(self):
        return hash(tuple(self.coefficients(30)))

    def __sub__(self, other: "HilbertSeries") -> "HilbertSeries":
        return self + other.scale(-1)

    def __add__(self, other: "HilbertSeries") -> "HilbertSeries":
        a = self.numerator_terms
        for w in other.weights:
            a = _poly_mul(a, {0: 1, w: -1})
        b = other.numerator_terms
        for w in self.weights:
            b = _poly_mul(b, {0: 1, w: -1})
        return HilbertSeries(_poly_add(a, b), self.weights + other.weights).reduced()

    def scale(self, k: int) -> "HilbertSeries":
        return HilbertSeries({d: c * k for d, c in self.numerator_terms.items()}, self.weights)

    def shift(self, s: int) -> "HilbertSeries":
        return HilbertSeries({d + s: c for d, c in self.numerator_terms.items()}, self.weights)

    def reduced(self) -> "HilbertSeries":
        """Cancel denominator factors (1 - t^w) that divide the numerator."""
        num = {d: c for d, c in self.numerator_terms.items() if c}
        if not num:
            return HilbertSeries({}, ())
        ws = list(self.weights)
        changed = True
        while changed:
            changed = False
            for w in sorted(set(ws)):
                q = _divide_by(num, w)
                if q is not None:
                    num = q
                    ws.remove(w)
                    changed = True
                    break
        return HilbertSeries(num, tuple(sorted(ws)))

    def at_one(self) -> int | None:
        """Value at t = 1 when the reduced denominator is trivial."""
        r = self.reduced()
        if r.weights:
            return None
        return sum(r.numerator_terms.values())

    def __str__(self):
        r = self
        num = _fmt_laurent(r.numerator_terms)
        if not r.weights or not any(r.numerator_terms.values()):
            return num
        den = "*".join(f"(1 - t^{w})" if w != 1 else "(1 - t)" for w in r.weights)
        return f"({num})/({den})"

    def to_json(self) -> dict:
        return {
            "numerator": {str(d): c for d, c in sorted(self.numerator_terms.items())},
            "denominator_weights": list(self.weights),
            "text": str(self.reduced()),
        }


def _divide_by(num: dict[int, int], w: int) -> dict[int, int] | None:
    if not num:
        return {}
    lo, hi = min(num), max(num)
    rem = {d: c for d, c in num.items()}
    q: dict[int, int] = {}
    # divide by (1 - t^w) from the low end: q_d = r_d, r_{d+w} += q_d
    for d in range(lo, hi + 1):
        c = rem.get(d, 0)
        if c:
            if d + w > hi:
                return None
            q[d] = c
            rem[d] = 0
            rem[d + w] = rem.get(d + w, 0) + c
    if any(rem.values()):
        return None
    return {d: c for d, c in q.items() if c}


def _fmt_laurent(terms: dict[int, int]) -> str:
    terms = {d: c for d, c in terms.items() if c}
    if not terms:
        return "0"
    parts = []
    for k, d in enumerate(sorted(terms)):
        c = terms[d]
        mon = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
        a = abs(c)
        body = str(a) if not mon else (mon if a == 1 else f"{a}*{mon}")
        if k == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------- finite modules

@dataclass(frozen=True)
class FiniteModule:
    """A finite-dimensional module over Q[x_1..x_n]: a Q-basis together with
    the commuting multiplication matrices of the variables."""

    dim: int
    mult: tuple
    basis_labels: tuple = ()

    def joint_generalized_kernel(self, shifts: dict[int, Fraction]) -> list[list[Fraction]]:
        """Basis of the subspace killed by a power of every (x_i - a_i)."""
        if self.dim == 0:
            return []
        rows: list[list[int]] = []
        for i, a in shifts.items():
            # integer arithmetic throughout: a global scalar does not move the kernel
            op = linalg.sub_scalar(self.mult[i], a)
            den = math.lcm(*(c.denominator for row in op for c in row))
            op = [[int(c * den) for c in row] for row in op]
            rows.extend(linalg.matpow(op, self.dim, one=1))
        return linalg.nullspace_int(rows, self.dim) if rows else [
            [Fraction(int(r == c)) for r in range(self.dim)] for c in range(self.dim)]

    def local_length(self, point: Sequence[Fraction]) -> int:
        return len(self.joint_generalized_kernel({i: Fraction(a) for i, a in enumerate(point)}))

    def support_length(self, vanishing: Sequence[int]) -> int:
        """Length of the part supported where the listed coordinates vanish."""
        if not vanishing:
            return self.dim
        return len(self.joint_generalized_kernel({i: Fraction(0) for i in vanishing}))

    def restricted(self, basis_cols: list[list[Fraction]]) -> "FiniteModule":
        mats = tuple(linalg.restrict(m, basis_cols) for m in self.mult)
        return FiniteModule(len(basis_cols), mats)

    def rational_points(self) -> list[tuple[tuple[Fraction, ...], int]]:
        """Rational points of the support with their local lengths.

        The remaining length (non-rational support) is ``dim - sum``.
        """
        if self.dim == 0:
            return []
        found: list[tuple[tuple[Fraction, ...], int]] = []
        nv = len(self.mult)

        def rec(mod: FiniteModule, prefix: tuple[Fraction, ...]):
            if mod.dim == 0:
                return
            if len(prefix) == nv:
                found.append((prefix, mod.dim))
                return
            op = mod.mult[len(prefix)]
            for root in linalg.rational_roots(linalg.charpoly(op)):
                ker = linalg.nullspace(linalg.matpow(linalg.sub_scalar(op, root), mod.dim), mod.dim)
                if ker:
                    rec(mod.restricted(ker), prefix + (root,))

        rec(self, ())
        return found
