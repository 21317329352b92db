"""Intersection calculus on products of projective spaces.

Chow rings are ``Q[h_1..h_k] / (h_i^{n_i+1})``.  K-classes are kept split
(signed multisets of line bundles ``O(a_1, .., a_k)``), which makes the
lambda-ring and Schur operations exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from . import series
from .errors import VirtualClassInputError
from .polyalg.poly import MultiPoly, PolyRing, degree_of, fmt_q

Degree = tuple[int, ...]


@dataclass(frozen=True)
class AmbientVariety:
    """``P^{n_1} x ... x P^{n_k}`` with homogeneous coordinate names."""

    dims: tuple[int, ...]
    coords: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if len(self.dims) != len(self.coords):
            raise ValueError("one coordinate list per factor")
        for n, names in zip(self.dims, self.coords):
            if len(names) != n + 1:
                raise ValueError(f"P({n}) needs {n + 1} coordinates, got {len(names)}")

    @classmethod
    def projective(cls, n: int, names: Sequence[str] | None = None) -> "AmbientVariety":
        return cls((n,), (tuple(names or [f"x{i}" for i in range(n + 1)]),))

    @classmethod
    def product(cls, dims: Sequence[int], coords: Sequence[Sequence[str]] | None = None) -> "AmbientVariety":
        if coords is None:
            letters = "xyzuvw"
            coords = [[f"{letters[k]}{i}" for i in range(n + 1)] for k, n in enumerate(dims)]
        return cls(tuple(dims), tuple(tuple(c) for c in coords))

    @property
    def nfactors(self) -> int:
        return len(self.dims)

    @property
    def dimension(self) -> int:
        return sum(self.dims)

    @property
    def hyperplane_names(self) -> tuple[str, ...]:
        if self.nfactors == 1:
            return ("h",)
        return tuple(f"h{i + 1}" for i in range(self.nfactors))

    @property
    def all_coords(self) -> tuple[str, ...]:
        return tuple(c for names in self.coords for c in names)

    def __str__(self):
        return "x".join(f"P({n})" for n in self.dims)

    # -- classes
    def one(self) -> "ChowClass":
        return ChowClass(self, {(0,) * self.nfactors: Fraction(1)})

    def zero(self) -> "ChowClass":
        return ChowClass(self, {})

    def hyperplane(self, i: int = 0) -> "ChowClass":
        return ChowClass(self, {tuple(int(k == i) for k in range(self.nfactors)): Fraction(1)})

    def divisor(self, degree: Degree) -> "ChowClass":
        """First Chern class of ``O(degree)``."""
        return ChowClass(self, {tuple(int(k == i) for k in range(self.nfactors)): Fraction(a)
                                for i, a in enumerate(degree) if a})

    def point_class(self) -> "ChowClass":
        return ChowClass(self, {self.dims: Fraction(1)})

    def ample(self) -> "ChowClass":
        return self.divisor((1,) * self.nfactors)

    def unit_degree(self, i: int) -> Degree:
        return tuple(int(k == i) for k in range(self.nfactors))

    def tangent(self) -> "KClass":
        """Euler sequences: T = sum_i ((n_i + 1) O(e_i) - O)."""
        parts: dict[Degree, int] = {}
        zero = (0,) * self.nfactors
        for i, n in enumerate(self.dims):
            e = self.unit_degree(i)
            parts[e] = parts.get(e, 0) + n + 1
            parts[zero] = parts.get(zero, 0) - 1
        return KClass(self, parts)

    def line(self, degree: Degree | int) -> "KClass":
        if isinstance(degree, int):
            degree = (degree,)
        return KClass(self, {tuple(degree): 1})

    def trivial(self, r: int) -> "KClass":
        return KClass(self, {(0,) * self.nfactors: r})

    def chi_line(self, degree: Degree) -> Fraction:
        """chi(O(a_1..a_k)) via the Kuenneth product of binomial polynomials."""
        out = Fraction(1)
        for n, a in zip(self.dims, degree):
            out *= binomial_poly(n + a, n)
        return out

    def to_json(self) -> str:
        return str(self)


def binomial_poly(top: int, n: int) -> Fraction:
    """C(top, n) extended to all integers ``top`` as a polynomial of degree n."""
    v = Fraction(1)
    for j in range(n):
        v *= Fraction(top - j, j + 1)
    return v


class ChowClass:
    """Element of the Chow ring of an :class:`AmbientVariety`."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient: AmbientVariety, terms: Mapping[Degree, Fraction]):
        self.ambient = ambient
        self.terms = {tuple(m): Fraction(c) for m, c in terms.items()
                      if c and all(e <= n for e, n in zip(m, ambient.dims))}

    def codim_part(self, k: int) -> "ChowClass":
        return ChowClass(self.ambient, {m: c for m, c in self.terms.items() if sum(m) == k})

    def degree0(self) -> Fraction:
        return self.terms.get((0,) * self.ambient.nfactors, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, o):
        o = self._coerce(o)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, 0) + c
        return ChowClass(self.ambient, out)

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.ambient, {m: -c for m, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return ChowClass(self.ambient, {m: c * o for m, c in self.terms.items()})
        o = self._coerce(o)
        out: dict[Degree, Fraction] = {}
        dims = self.ambient.dims
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                if all(e <= n for e, n in zip(m, dims)):
                    out[m] = out.get(m, 0) + c1 * c2
        return ChowClass(self.ambient, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        r = self.ambient.one()
        for _ in range(k):
            r = r * self
        return r

    def _coerce(self, o) -> "ChowClass":
        if isinstance(o, ChowClass):
            if o.ambient != self.ambient:
                raise ValueError("classes on different ambients")
            return o
        if isinstance(o, (int, Fraction)):
            return self.ambient.one() * o
        raise TypeError(type(o).__name__)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = self.ambient.one() * o
        if not isinstance(o, ChowClass):
            return NotImplemented
        return self.ambient == o.ambient and self.terms == o.terms

    def __hash__(self):
        return hash((self.ambient, tuple(sorted(self.terms.items()))))

    def apply_series(self, coeffs: Sequence[Fraction]) -> "ChowClass":
        """sum_k coeffs[k] * self^k, truncated at the ambient dimension."""
        out = self.ambient.zero()
        p = self.ambient.one()
        for k, c in enumerate(coeffs):
            if k > self.ambient.dimension:
                break
            if c:
                out = out + p * c
            p = p * self
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def monomial_str(self, m: Degree) -> str:
        parts = []
        for name, e in zip(self.ambient.hyperplane_names, m):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for k, (m, c) in enumerate(sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))):
            mon = self.monomial_str(m)
            a = abs(c)
            body = fmt_q(a) if mon == "1" else (mon if a == 1 else f"{fmt_q(a)}*{mon}")
            out.append((("-" if c < 0 else "") if k == 0 else (" - " if c < 0 else " + ")) + body)
        return "".join(out)

    def __repr__(self):
        return f"ChowClass({self})"

    def to_json(self) -> dict:
        return {
            "ambient": str(self.ambient),
            "terms": [{"monomial": self.monomial_str(m), "coefficient": fmt_q(c)}
                      for m, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, ambient: AmbientVariety, data: dict) -> "ChowClass":
        names = ambient.hyperplane_names
        terms = {}
        for t in data["terms"]:
            exp = [0] * len(names)
            if t["monomial"] != "1":
                for part in t["monomial"].split("*"):
                    name, _, e = part.partition("^")
                    exp[names.index(name)] += int(e or 1)
            terms[tuple(exp)] = Fraction(t["coefficient"])
        return cls(ambient, terms)


def integrate(c: ChowClass, ambient: AmbientVariety | None = None) -> Fraction:
    """Degree of the zero-dimensional component."""
    amb = ambient or c.ambient
    return c.terms.get(amb.dims, Fraction(0))


# ------------------------------------------------------------- K-classes

class KClass:
    """Signed multiset of line bundles; ``parts[degree]`` is a multiplicity."""

    __slots__ = ("ambient", "parts")

    def __init__(self, ambient: AmbientVariety, parts: Mapping[Degree, int]):
        self.ambient = ambient
        self.parts = {tuple(d): int(m) for d, m in parts.items() if m}

    @property
    def rank(self) -> int:
        return sum(self.parts.values())

    @property
    def positive(self) -> list[Degree]:
        return sorted(d for d, m in self.parts.items() for _ in range(max(m, 0)))

    @property
    def negative(self) -> list[Degree]:
        return sorted(d for d, m in self.parts.items() for _ in range(max(-m, 0)))

    def is_honest(self) -> bool:
        return all(m > 0 for m in self.parts.values())

    def __add__(self, o: "KClass") -> "KClass":
        out = dict(self.parts)
        for d, m in o.parts.items():
            out[d] = out.get(d, 0) + m
        return KClass(self.ambient, out)

    def __neg__(self):
        return KClass(self.ambient, {d: -m for d, m in self.parts.items()})

    def __sub__(self, o: "KClass") -> "KClass":
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, int):
            return KClass(self.ambient, {d: m * o for d, m in self.parts.items()})
        out: dict[Degree, int] = {}
        for d1, m1 in self.parts.items():
            for d2, m2 in o.parts.items():
                d = tuple(a + b for a, b in zip(d1, d2))
                out[d] = out.get(d, 0) + m1 * m2
        return KClass(self.ambient, out)

    __rmul__ = __mul__

    def twist(self, degree: Degree) -> "KClass":
        return self * self.ambient.line(degree)

    def dual(self) -> "KClass":
        return KClass(self.ambient, {tuple(-a for a in d): m for d, m in self.parts.items()})

    def __eq__(self, o):
        return isinstance(o, KClass) and self.ambient == o.ambient and self.parts == o.parts

    def __hash__(self):
        return hash((self.ambient, tuple(sorted(self.parts.items()))))

    def __str__(self):
        if not self.parts:
            return "0"
        out = []
        for k, (d, m) in enumerate(sorted(self.parts.items())):
            name = "O" if not any(d) else f"O({','.join(map(str, d))})"
            body = name if abs(m) == 1 else f"{abs(m)}*{name}"
            out.append((("-" if m < 0 else "") if k == 0 else (" - " if m < 0 else " + ")) + body)
        return "".join(out)

    def __repr__(self):
        return f"KClass({self})"

    def to_json(self) -> dict:
        return {"ambient": str(self.ambient), "rank": self.rank,
                "lines": [{"degree": list(d), "multiplicity": m} for d, m in sorted(self.parts.items())]}

    # -- lambda ring
    def lambda_series(self, k: int) -> list["KClass"]:
        """[lambda^0, .., lambda^k] using lambda_t(u - v) = lambda_t(u) / lambda_t(v)."""
        zero = KClass(self.ambient, {})
        out = [self.ambient.trivial(1)] + [zero] * k
        for d, m in sorted(self.parts.items()):
            if m > 0:
                factor = [self.ambient.trivial(1), self.ambient.line(d)]
                reps = m
            else:
                factor = [self.ambient.line(tuple(j * a for a in d)) * ((-1) ** j) for j in range(k + 1)]
                reps = -m
            for _ in range(reps):
                out = _kseries_mul(out, factor, k)
        return out

    def symmetric_series(self, k: int) -> list["KClass"]:
        """[S^0, .., S^k] from sigma_t = 1 / lambda_{-t}."""
        return _sym_from_lambda(self, k)


def _kseries_mul(a: list[KClass], b: list[KClass], k: int) -> list[KClass]:
    amb = a[0].ambient
    out = [KClass(amb, {}) for _ in range(k + 1)]
    for i, x in enumerate(a[: k + 1]):
        if not x.parts:
            continue
        for j, y in enumerate(b[: k + 1 - i]):
            if y.parts:
                out[i + j] = out[i + j] + x * y
    return out


def _sym_from_lambda(e: KClass, k: int) -> list[KClass]:
    # sigma_t(E) * lambda_{-t}(E) = 1
    lam = e.lambda_series(k)
    amb = e.ambient
    sym = [amb.trivial(1)]
    for n in range(1, k + 1):
        acc = KClass(amb, {})
        for j in range(1, n + 1):
            acc = acc + lam[j] * sym[n - j] * ((-1) ** (j + 1))
        sym.append(acc)
    return sym


def lambda_power(k: int, e: KClass) -> KClass:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return e.lambda_series(k)[k]


def conjugate(alpha: Sequence[int]) -> tuple[int, ...]:
    alpha = [a for a in alpha if a > 0]
    if not alpha:
        return ()
    return tuple(sum(1 for a in alpha if a > i) for i in range(alpha[0]))


def check_partition(alpha: Sequence[int]) -> tuple[int, ...]:
    alpha = tuple(alpha)
    if any(a < 0 for a in alpha) or any(alpha[i] < alpha[i + 1] for i in range(len(alpha) - 1)):
        raise ValueError(f"not a partition: {alpha}")
    return tuple(a for a in alpha if a)


def schur_class(alpha: Sequence[int], e: KClass) -> KClass:
    """Sigma^alpha(E) via the dual Jacobi-Trudi determinant det(lambda^{a'_i - i + j})."""
    alpha = check_partition(alpha)
    conj = conjugate(alpha)
    n = len(conj)
    if n == 0:
        return e.ambient.trivial(1)
    top = max(conj) + n
    lam = e.lambda_series(top)
    zero = KClass(e.ambient, {})

    def entry(i, j):
        k = conj[i] - i + j
        return lam[k] if 0 <= k <= top else zero

    mat = [[entry(i, j) for j in range(n)] for i in range(n)]
    return _kdet(mat, e.ambient)


def _kdet(mat: list[list[KClass]], amb: AmbientVariety) -> KClass:
    n = len(mat)
    total = KClass(amb, {})
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = amb.trivial(1)
        for i, j in enumerate(perm):
            term = term * mat[i][j]
            if not term.parts:
                break
        if term.parts:
            total = total + term * (-1 if inv % 2 else 1)
    return total


# -------------------------------------------------- characteristic classes

def _line_series(amb: AmbientVariety, degree: Degree, coeffs) -> ChowClass:
    return amb.divisor(degree).apply_series(coeffs)


def chern_character(e: KClass, ambient: AmbientVariety | None = None) -> ChowClass:
    amb = ambient or e.ambient
    n = amb.dimension
    out = amb.zero()
    for d, m in e.parts.items():
        out = out + _line_series(amb, d, series.exp_series(n)) * m
    return out


def todd_class(e: KClass, ambient: AmbientVariety | None = None) -> ChowClass:
    amb = ambient or e.ambient
    n = amb.dimension
    td = series.todd_series(n)
    inv = series.inverse(td, n)
    out = amb.one()
    for d, m in sorted(e.parts.items()):
        f = _line_series(amb, d, td if m > 0 else inv)
        for _ in range(abs(m)):
            out = out * f
    return out


def chern_class(e: KClass, ambient: AmbientVariety | None = None) -> ChowClass:
    """Total Chern class prod (1 + x)^m, negative m through the inverse series."""
    amb = ambient or e.ambient
    n = amb.dimension
    out = amb.one()
    inv = [Fraction((-1) ** k) for k in range(n + 1)]
    for d, m in sorted(e.parts.items()):
        x = amb.divisor(d)
        f = amb.one() + x if m > 0 else x.apply_series(inv)
        for _ in range(abs(m)):
            out = out * f
    return out


def chern_classes(e: KClass, ambient: AmbientVariety | None = None) -> list[ChowClass]:
    amb = ambient or e.ambient
    c = chern_class(e, amb)
    return [c.codim_part(k) for k in range(amb.dimension + 1)]


def euler_class(e: KClass, ambient: AmbientVariety | None = None) -> ChowClass:
    amb = ambient or e.ambient
    if not e.is_honest():
        raise VirtualClassInputError(f"Euler class needs an honest bundle, got {e}")
    out = amb.one()
    for d, m in sorted(e.parts.items()):
        out = out * amb.divisor(d) ** m
    return out


def chi(e: KClass) -> Fraction:
    """Euler characteristic by additivity over line bundles (no Chern calculus)."""
    return sum((e.ambient.chi_line(d) * m for d, m in e.parts.items()), Fraction(0))


def hrr(e: KClass) -> Fraction:
    """Euler characteristic via Hirzebruch-Riemann-Roch."""
    amb = e.ambient
    return integrate(chern_character(e) * todd_class(amb.tangent()))


def ssyt_count(alpha: Sequence[int], r: int) -> int:
    """Number of semistandard Young tableaux of shape alpha with entries <= r."""
    alpha = check_partition(alpha)
    cells = [(i, j) for i, row in enumerate(alpha) for j in range(row)]
    fill: dict = {}

    def rec(k):
        if k == len(cells):
            return 1
        i, j = cells[k]
        lo = 1
        if j > 0:
            lo = max(lo, fill[(i, j - 1)])
        if i > 0:
            lo = max(lo, fill[(i - 1, j)] + 1)
        total = 0
        for v in range(lo, r + 1):
            fill[(i, j)] = v
            total += rec(k + 1)
        fill.pop((i, j), None)
        return total

    return rec(0)


# ------------------------------------------------ universal Chern calculus

def _truncate(p: MultiPoly, d: int) -> MultiPoly:
    w = p.ring.weights
    return MultiPoly(p.ring, {m: c for m, c in p.terms.items() if degree_of(m, w) <= d})


def _degree_part(p: MultiPoly, d: int) -> MultiPoly:
    w = p.ring.weights
    return MultiPoly(p.ring, {m: c for m, c in p.terms.items() if degree_of(m, w) == d})


class UniversalChernRing:
    """``Q[c_1..c_d]`` with ``deg c_i = i``, truncated above degree d."""

    def __init__(self, d: int):
        if d < 0:
            raise ValueError("d must be nonnegative")
        self.d = d
        self.ring = PolyRing(tuple(f"c{i}" for i in range(1, d + 1)) or ("c0",),
                             tuple(range(1, d + 1)) or (1,))

    def c(self, i: int) -> MultiPoly:
        if i == 0:
            return self.ring.one()
        if i > self.d:
            return self.ring.zero()
        return self.ring.gen(i - 1)

    def mul(self, a: MultiPoly, b: MultiPoly) -> MultiPoly:
        return _truncate(a * b, self.d)

    def exp(self, a: MultiPoly) -> MultiPoly:
        """exp of an element without constant term."""
        out = self.ring.one()
        term = self.ring.one()
        for k in range(1, self.d + 1):
            term = self.mul(term, a) * Fraction(1, k)
            out = out + term
        return out

    def power_sums(self) -> list[MultiPoly]:
        """Newton: p_k = sum_{i<k} (-1)^{i-1} c_i p_{k-i} + (-1)^{k-1} k c_k."""
        p = [self.ring.const(self.d)]
        for k in range(1, self.d + 1):
            acc = self.c(k) * ((-1) ** (k - 1) * k)
            for i in range(1, k):
                acc = acc + self.c(i) * p[k - i] * ((-1) ** (i - 1))
            p.append(_truncate(acc, self.d))
        return p

    def chern_character(self) -> MultiPoly:
        p = self.power_sums()
        return sum((p[k] * Fraction(1, factorial(k)) for k in range(1, self.d + 1)), p[0])

    def todd(self) -> MultiPoly:
        """exp(sum_k b_k p_k) where log(x/(1-e^{-x})) = sum_k b_k x^k."""
        b = series.log_series(series.todd_series(self.d), self.d)
        p = self.power_sums()
        return self.exp(sum((p[k] * b[k] for k in range(1, self.d + 1)), self.ring.zero()))

    def coefficients(self, f: MultiPoly) -> dict[tuple[int, ...], Fraction]:
        """Degree-d coefficients keyed by weakly decreasing index tuples."""
        out = {}
        for m, c in _degree_part(f, self.d).terms.items():
            idx = tuple(sorted((i + 1 for i, e in enumerate(m) for _ in range(e)), reverse=True))
            out[idx] = c
        return out


def compositions(d: int) -> list[tuple[int, ...]]:
    """Ordered summands of d, lexicographically ascending."""
    if d == 0:
        return [()]
    out = []
    for first in range(1, d + 1):
        out.extend((first,) + rest for rest in compositions(d - first))
    return sorted(out)


def partitions(n: int, largest: int | None = None) -> list[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, largest), 0, -1):
        out.extend((first,) + rest for rest in partitions(n - first, first))
    return out


def _elementary_expansion(f: MultiPoly, nvars: int) -> dict[tuple[int, ...], Fraction]:
    """Write a symmetric polynomial in the elementary basis (lex peeling)."""
    ring = f.ring
    e = [ring.one()]
    for k in range(1, nvars + 1):
        acc = ring.zero()
        for subset in itertools.combinations(range(nvars), k):
            acc = acc + ring.monomial(tuple(int(i in subset) for i in range(nvars)))
        e.append(acc)
    out: dict[tuple[int, ...], Fraction] = {}
    rest = f
    while not rest.is_zero():
        lead = max(rest.terms)  # lex-largest exponent
        c = rest.terms[lead]
        if any(lead[i] < lead[i + 1] for i in range(nvars - 1)):
            raise ValueError("polynomial is not symmetric")
        idx: list[int] = []
        prod = ring.one()
        for k in range(1, nvars + 1):
            mult = lead[k - 1] - (lead[k] if k < nvars else 0)
            idx.extend([k] * mult)
            prod = prod * e[k] ** mult
        key = tuple(sorted(idx, reverse=True))
        out[key] = out.get(key, Fraction(0)) + c
        rest = rest - prod * c
    return out


def q_coefficients(alpha: Sequence[int], d: int) -> dict[tuple[int, ...], Fraction]:
    """Coefficients q_alpha^I of the degree-d part of ch(Sigma^alpha V) Td(V) in the c_I.

    Uses formal Chern roots: ch(Sigma^alpha V) is the Schur polynomial of
    alpha evaluated at e^{x_i}.  The table is keyed by all compositions of d;
    since the c_i commute, only the weakly decreasing key of each monomial
    carries the coefficient and the others are 0.
    """
    alpha = check_partition(alpha)
    if d == 0:
        return {(): Fraction(ssyt_count(alpha, 0))}
    ring = PolyRing(tuple(f"x{i}" for i in range(1, d + 1)))
    xs = ring.gens()
    exp_x = [_truncate(sum((x ** k * Fraction(1, factorial(k)) for k in range(d + 1)), ring.zero()), d)
             for x in xs]
    # elementary symmetric functions of the e^{x_i}
    el = [ring.one()] + [ring.zero()] * d
    for y in exp_x:
        for k in range(d, 0, -1):
            el[k] = _truncate(el[k] + el[k - 1] * y, d)
    conj = conjugate(alpha)
    n = len(conj)

    def ent(i, j):
        k = conj[i] - i + j
        return el[k] if 0 <= k <= d else ring.zero()

    schur = ring.zero()
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = ring.one()
        for i, j in enumerate(perm):
            term = _truncate(term * ent(i, j), d)
        schur = schur + term * (-1 if inv % 2 else 1)
    td_coeffs = series.todd_series(d)
    td = ring.one()
    for x in xs:
        td = _truncate(td * sum((x ** k * td_coeffs[k] for k in range(d + 1)), ring.zero()), d)
    top = _degree_part(_truncate(schur * td, d), d)
    table = _elementary_expansion(top, d)
    return {I: table.get(I, Fraction(0)) if list(I) == sorted(I, reverse=True) else Fraction(0)
            for I in compositions(d)}
