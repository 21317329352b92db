"""Torus actions on products of projective spaces and K-theoretic localization.

Characters of ``G = (G_m)^n`` are integer vectors; the character ``w`` is the
Laurent monomial ``mu1^w1 ... mun^wn``.  A monomial ``x^a`` in the homogeneous
coordinates has character ``sum_j a_j w_j`` where ``w_j`` is the weight of ``x_j``.
The fibre of ``O(a) (x) chi`` at a coordinate point is generated by a monomial
in the non-vanishing coordinates, so its character is ``a . w_p + chi``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .chow import AmbientVariety
from .errors import (InvalidPresentationError, NonIsolatedFixedLocusError, PoleError, SimplificationError,
                     ZeroWeightError)
from .polyalg import RationalFunction
from .polyalg.poly import MultiPoly, PolyRing, fmt_q
from .dgkernel.global_model import KoszulModel

Char = tuple[int, ...]


def _add(a: Char, b: Char) -> Char:
    return tuple(x + y for x, y in zip(a, b))


def _neg(a: Char) -> Char:
    return tuple(-x for x in a)


def _scale(a: Char, k: int) -> Char:
    return tuple(k * x for x in a)


# ------------------------------------------------------------------ Rep(G)

class Laurent:
    """An element of Rep(G): a Laurent polynomial with rational coefficients."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: dict | None = None):
        self.rank = rank
        self.terms = {tuple(k): Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def char(cls, c: Char, coeff=1) -> "Laurent":
        return cls(len(c), {tuple(c): coeff})

    @classmethod
    def const(cls, rank: int, c=1) -> "Laurent":
        return cls(rank, {(0,) * rank: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, o):
        o = self._coerce(o)
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out.get(k, 0) + v
        return Laurent(self.rank, out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(self.rank, {k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in o.terms.items():
                k = _add(k1, k2)
                out[k] = out.get(k, 0) + v1 * v2
        return Laurent(self.rank, out)

    __rmul__ = __mul__

    def _coerce(self, o) -> "Laurent":
        if isinstance(o, Laurent):
            if o.rank != self.rank:
                raise ValueError("torus ranks differ")
            return o
        if isinstance(o, (int, Fraction)):
            return Laurent.const(self.rank, o)
        raise TypeError(f"cannot coerce {type(o).__name__}")

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = Laurent.const(self.rank, o)
        return isinstance(o, Laurent) and self.terms == o.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def substitute_power(self, c: int) -> "Laurent":
        """mu_i -> mu_i^c."""
        return Laurent(self.rank, {_scale(k, c): v for k, v in self.terms.items()})

    def at_one(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def dual(self) -> "Laurent":
        return Laurent(self.rank, {_neg(k): v for k, v in self.terms.items()})

    def __str__(self):
        return format_laurent(self.terms, self.rank)

    def __repr__(self):
        return f"Laurent({self})"


def mu_names(rank: int) -> tuple[str, ...]:
    return ("mu",) if rank == 1 else tuple(f"mu{i + 1}" for i in range(rank))


def format_char(c: Char) -> str:
    names = mu_names(len(c))
    parts = []
    for n, e in zip(names, c):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts) or "1"


def format_laurent(terms: dict, rank: int) -> str:
    if not terms:
        return "0"
    out = []
    for k in sorted(terms, key=lambda k: (sum(k), k)):
        v = terms[k]
        mono = format_char(k)
        sign = "-" if v < 0 else "+"
        a = abs(v)
        if mono == "1":
            body = fmt_q(a)
        elif a == 1:
            body = mono
        else:
            body = f"{fmt_q(a)}*{mono}"
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


# ----------------------------------------------------------------- FRep(G)

class FRep:
    """An element of the fraction field of Rep(G), kept in lowest terms."""

    __slots__ = ("rank", "rf")

    def __init__(self, rank: int, rf: RationalFunction):
        self.rank = rank
        self.rf = rf

    @staticmethod
    def ring(rank: int) -> PolyRing:
        return PolyRing(mu_names(rank))

    @classmethod
    def from_laurent(cls, f: Laurent) -> "FRep":
        ring = cls.ring(f.rank)
        if f.is_zero():
            return cls(f.rank, RationalFunction(ring.zero()))
        low = tuple(min(0, min(k[i] for k in f.terms)) for i in range(f.rank))
        num = MultiPoly(ring, {tuple(a - b for a, b in zip(k, low)): v for k, v in f.terms.items()})
        den = ring.monomial(tuple(-b for b in low), 1)
        return cls(f.rank, RationalFunction(num, den))

    def __add__(self, o):
        return FRep(self.rank, self.rf + _frep(o, self.rank).rf)

    __radd__ = __add__

    def __sub__(self, o):
        return FRep(self.rank, self.rf - _frep(o, self.rank).rf)

    def __mul__(self, o):
        return FRep(self.rank, self.rf * _frep(o, self.rank).rf)

    __rmul__ = __mul__

    def __truediv__(self, o):
        return FRep(self.rank, self.rf / _frep(o, self.rank).rf)

    def __neg__(self):
        return FRep(self.rank, -self.rf)

    def __eq__(self, o):
        return self.rf == _frep(o, self.rank).rf

    def is_laurent(self) -> bool:
        return len(self.rf.den.terms) == 1

    def to_laurent(self) -> Laurent:
        """Exact simplification to Rep(G); fails if a genuine denominator remains."""
        den = self.rf.den
        if len(den.terms) != 1:
            raise SimplificationError(f"{self} is not a Laurent polynomial")
        (dexp, dc), = den.terms.items()
        return Laurent(self.rank, {tuple(a - b for a, b in zip(k, dexp)): v / dc
                                   for k, v in self.rf.num.terms.items()})

    def __str__(self):
        if self.is_laurent():
            return str(self.to_laurent())
        return str(self.rf)


def _frep(o, rank: int) -> FRep:
    if isinstance(o, FRep):
        return o
    if isinstance(o, Laurent):
        return FRep.from_laurent(o)
    if isinstance(o, (int, Fraction)):
        return FRep.from_laurent(Laurent.const(rank, o))
    raise TypeError(f"cannot coerce {type(o).__name__}")


def specialize_nonequivariant(f: FRep | Laurent) -> Fraction:
    """Value at mu_i = 1.

    The fraction is kept in lowest terms, so a finite value exists exactly when the
    reduced denominator does not vanish at 1.
    """
    if isinstance(f, Laurent):
        return f.at_one()
    one = (1,) * f.rank
    if f.rf.den.evaluate(one) == 0:
        raise PoleError(f"{f} has a pole at mu = 1")
    return f.rf.evaluate(one)


def lambda_class(chars: Iterable[Char], rank: int) -> Laurent:
    """[Lambda^bullet V^*] = prod (1 - chi^{-1}) for V with the given characters."""
    out = Laurent.const(rank)
    for c in chars:
        out = out * (Laurent.const(rank) - Laurent.char(_neg(c)))
    return out


def lambda_inverse(chars: Sequence[Char], rank: int) -> FRep:
    """Inverse of [Lambda^bullet V^*] in FRep(G); needs every character moving."""
    for c in chars:
        if not any(c):
            raise ZeroWeightError("trivial character in a class that must be inverted: "
                                  "its lambda class vanishes and is not a unit after localization")
    return FRep.from_laurent(Laurent.const(rank)) / FRep.from_laurent(lambda_class(chars, rank))


def symmetric_series(chars: Sequence[Char], rank: int, order: int) -> list[Laurent]:
    """[Sym^d V^*] for d = 0..order, the characters of complete symmetric polynomials."""
    out = []
    duals = [_neg(c) for c in chars]
    for d in range(order + 1):
        acc = Laurent(rank)
        for combo in itertools.combinations_with_replacement(range(len(duals)), d):
            c = (0,) * rank
            for i in combo:
                c = _add(c, duals[i])
            acc = acc + Laurent.char(c)
        out.append(acc)
    return out


# --------------------------------------------------------------- actions

@dataclass(frozen=True)
class TorusAction:
    """A diagonal action of (G_m)^rank: one weight vector per homogeneous coordinate."""

    rank: int
    weights: tuple[tuple[Char, ...], ...]       # per factor, per coordinate

    @classmethod
    def make(cls, weights: Sequence, rank: int | None = None) -> "TorusAction":
        """Accepts per-factor lists of ints (rank one) or of integer vectors.
        A flat list of ints is a single projective factor."""
        if weights and not isinstance(weights[0], (list, tuple)):
            weights = [weights]
        factors = []
        for f in weights:
            row = []
            for w in f:
                row.append((int(w),) if isinstance(w, int) else tuple(int(x) for x in w))
            factors.append(tuple(row))
        r = rank or len(factors[0][0])
        if any(len(w) != r for f in factors for w in f):
            raise ValueError("weight vectors of different lengths")
        return cls(r, tuple(factors))

    def check(self, ambient: AmbientVariety) -> None:
        if tuple(len(f) - 1 for f in self.weights) != tuple(ambient.dims):
            raise ValueError(f"weights {self.weights} do not match {ambient}")
        for k, f in enumerate(self.weights):
            if len(set(f)) != len(f):
                raise NonIsolatedFixedLocusError(
                    f"coordinate weights {[w[0] if self.rank == 1 else list(w) for w in f]} of factor {k + 1} are not pairwise distinct: "
                    "the fixed locus is non-isolated, which is unsupported")

    def scaled(self, c: int) -> "TorusAction":
        return TorusAction(self.rank, tuple(tuple(_scale(w, c) for w in f) for f in self.weights))

    def monomial_char(self, exps: Sequence[int]) -> Char:
        flat = [w for f in self.weights for w in f]
        c = (0,) * self.rank
        for e, w in zip(exps, flat):
            c = _add(c, _scale(w, e))
        return c

    def fixed_points(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*[range(len(f)) for f in self.weights]))

    def tangent_chars(self, p: tuple[int, ...]) -> list[Char]:
        """Characters of T_p; the local coordinate x_j/x_i has the inverse character."""
        out = []
        for k, i in enumerate(p):
            for j, w in enumerate(self.weights[k]):
                if j != i:
                    out.append(_add(self.weights[k][i], _neg(w)))
        return out

    def fibre_char(self, degree: Sequence[int], lin: Char, p: tuple[int, ...]) -> Char:
        c = lin
        for k, i in enumerate(p):
            c = _add(c, _scale(self.weights[k][i], degree[k]))
        return c


@dataclass(frozen=True)
class EquivariantLine:
    degree: tuple[int, ...]
    lin: Char


def split_bundle(action: TorusAction, summands: Sequence) -> list[EquivariantLine]:
    """Summands given as degree ints/tuples, or (degree, linearization) pairs."""
    out = []
    for s in summands:
        if isinstance(s, EquivariantLine):
            out.append(s)
            continue
        if isinstance(s, (tuple, list)) and len(s) == 2 and isinstance(s[0], (tuple, list)):
            deg, lin = s
        else:
            deg, lin = s, (0,) * action.rank
        deg = (deg,) if isinstance(deg, int) else tuple(deg)
        lin = (lin,) if isinstance(lin, int) else tuple(lin)
        out.append(EquivariantLine(deg, lin))
    return out


# ------------------------------------------------------- equivariant chi

def _factor_oracle(weights: tuple[Char, ...], k: int, rank: int) -> Laurent:
    """Character of sum (-1)^i H^i(P^n, O(k)) by listing monomials (Cech monomials for H^n)."""
    n = len(weights) - 1
    out = Laurent(rank)
    if k >= 0:
        for combo in itertools.combinations_with_replacement(range(n + 1), k):
            c = (0,) * rank
            for j in combo:
                c = _add(c, weights[j])
            out = out + Laurent.char(c)
    elif k <= -n - 1:
        # x^{-1-b} with b >= 0, |b| = -k-n-1
        base = (0,) * rank
        for w in weights:
            base = _add(base, _neg(w))
        for combo in itertools.combinations_with_replacement(range(n + 1), -k - n - 1):
            c = base
            for j in combo:
                c = _add(c, _neg(weights[j]))
            out = out + Laurent.char(c, (-1) ** n)
    return out


def chi_oracle(action: TorusAction, line: EquivariantLine) -> Laurent:
    out = Laurent.char(line.lin)
    for k, f in enumerate(action.weights):
        out = out * _factor_oracle(f, line.degree[k], action.rank)
    return out


def chi_fixed_point_sum(action: TorusAction, line: EquivariantLine) -> FRep:
    total = FRep.from_laurent(Laurent(action.rank))
    for p in action.fixed_points():
        num = Laurent.char(action.fibre_char(line.degree, line.lin, p))
        total = total + FRep.from_laurent(num) * lambda_inverse(action.tangent_chars(p), action.rank)
    return total


@dataclass
class EquivariantChi:
    fixed_point_sum: FRep
    oracle: Laurent

    @property
    def value(self) -> Laurent:
        return self.oracle

    @property
    def ok(self) -> bool:
        return self.fixed_point_sum.is_laurent() and self.fixed_point_sum.to_laurent() == self.oracle

    def to_json(self) -> dict:
        return {"fixed_point_sum": str(self.fixed_point_sum), "oracle": str(self.oracle), "ok": self.ok,
                "at_mu_1": fmt_q(self.oracle.at_one())}


def equivariant_chi(action: TorusAction, ambient: AmbientVariety, F: Sequence) -> EquivariantChi:
    """chi^G of a split equivariant bundle, by localization and by counting monomials."""
    action.check(ambient)
    lines = split_bundle(action, F)
    fps = FRep.from_laurent(Laurent(action.rank))
    orc = Laurent(action.rank)
    for ln in lines:
        if len(ln.degree) != ambient.nfactors:
            raise ValueError(f"degree {ln.degree} does not match {ambient}")
        fps = fps + chi_fixed_point_sum(action, ln)
        orc = orc + chi_oracle(action, ln)
    if not fps.is_laurent():
        raise SimplificationError(f"fixed-point sum {fps} did not simplify to a Laurent polynomial")
    return EquivariantChi(fps, orc)


# ----------------------------------------------------------- fixed loci

@dataclass
class FixedPointRecord:
    index: tuple[int, ...]
    label: str
    tangent: list[Char]          # characters of T_p X^0
    bundle: list[Char]           # characters of E_p
    nu0: list[Char]              # moving part of the ambient tangent
    nu1: list[Char]              # moving part of the obstruction fibre
    fixed_obstruction: int       # rank of the fixed part of E_p

    def __post_init__(self):
        for c in self.nu0 + self.nu1:
            if not any(c):
                raise ZeroWeightError(f"trivial character in the moving part at {self.label}")

    def to_json(self) -> dict:
        return {"point": self.label, "tangent": [format_char(c) for c in self.tangent],
                "bundle": [format_char(c) for c in self.bundle],
                "nu0": [format_char(c) for c in self.nu0], "nu1": [format_char(c) for c in self.nu1],
                "fixed_obstruction_rank": self.fixed_obstruction}


def section_linearization(action: TorusAction, X: KoszulModel, lin: Sequence | None = None) -> list[Char]:
    """Linearizations making each section component invariant (checked if given)."""
    out = []
    for i, f in enumerate(X.section):
        chars = {action.monomial_char(m) for m in f.terms}
        given = None if lin is None else lin[i]
        if given is not None:
            given = (given,) if isinstance(given, int) else tuple(given)
        if len(chars) > 1:
            raise InvalidPresentationError(f"section component s{i + 1} = {f} is not semi-invariant")
        if chars:
            need = _neg(chars.pop())
            if given is not None and given != need:
                raise InvalidPresentationError(
                    f"s{i + 1} = {f} is not invariant for the linearization {format_char(given)}; "
                    f"it needs {format_char(need)}")
            out.append(need)
        else:
            out.append(given if given is not None else (0,) * action.rank)
    return out


def fixed_locus(action: TorusAction, X: KoszulModel, lin: Sequence | None = None) -> list[FixedPointRecord]:
    action.check(X.ambient)
    lins = section_linearization(action, X, lin)
    out = []
    for p in action.fixed_points():
        hom = []
        for k, i in enumerate(p):
            hom += [1 if j == i else 0 for j in range(len(action.weights[k]))]
        if any(f.evaluate(hom) != 0 for f in X.section):
            continue
        tangent = action.tangent_chars(p)
        bundle = [action.fibre_char(d, l, p) for d, l in zip(X.degrees, lins)]
        label = "[" + "|".join(":".join(str(h) for h in hom[sum(len(f) for f in action.weights[:k]):
                                                            sum(len(f) for f in action.weights[:k + 1])])
                               for k in range(len(p))) + "]"
        out.append(FixedPointRecord(p, label, tangent, bundle,
                                    [c for c in tangent if any(c)], [c for c in bundle if any(c)],
                                    sum(1 for c in bundle if not any(c))))
    return out


# ------------------------------------------------------ localization

@dataclass
class LocalizationReport:
    lhs: Laurent
    rhs: FRep
    contributions: list = field(default_factory=list)     # (label, FRep)

    @property
    def ok(self) -> bool:
        return self.rhs.is_laurent() and self.rhs.to_laurent() == self.lhs

    @property
    def specialized(self) -> Fraction:
        return specialize_nonequivariant(self.lhs)

    def to_json(self) -> dict:
        return {"lhs": str(self.lhs), "rhs": str(self.rhs), "ok": self.ok,
                "specialized": fmt_q(self.specialized),
                "contributions": [{"point": lab, "value": str(v)} for lab, v in self.contributions]}


def localize_virtual(action: TorusAction, X: KoszulModel, E: Sequence | None = None,
                     lin: Sequence | None = None) -> LocalizationReport:
    """Global character of [Lambda E^*] (x) F against the sum over fixed points of X."""
    r = action.rank
    records = fixed_locus(action, X, lin)
    lins = section_linearization(action, X, lin)
    twist = split_bundle(action, E if E is not None else [(0,) * X.ambient.nfactors])
    bundle = [EquivariantLine(d, l) for d, l in zip(X.degrees, lins)]
    # LHS: sum_j (-1)^j chi^G(Lambda^j E^* (x) F), each summand by equivariant_chi
    lhs = Laurent(r)
    for j in range(len(bundle) + 1):
        for subset in itertools.combinations(bundle, j):
            deg = tuple(-sum(b.degree[k] for b in subset) for k in range(X.ambient.nfactors))
            ch = (0,) * r
            for b in subset:
                ch = _add(ch, _neg(b.lin))
            for t in twist:
                ln = EquivariantLine(tuple(a + b for a, b in zip(deg, t.degree)), _add(ch, t.lin))
                res = equivariant_chi(action, X.ambient, [ln])
                if not res.ok:
                    raise SimplificationError(f"equivariant chi disagrees with its oracle for {ln}")
                lhs = lhs + (-1) ** j * res.value
    # RHS: fixed points of X; local data F_p [O_{X^G}]_p over Lambda(nu0^*) Lambda(nu1^*)^{-1}
    rhs = FRep.from_laurent(Laurent(r))
    contribs = []
    for rec in records:
        fp = Laurent(r)
        for t in twist:
            fp = fp + Laurent.char(action.fibre_char(t.degree, t.lin, rec.index))
        local = fp * (0 if rec.fixed_obstruction else 1)
        val = FRep.from_laurent(local * lambda_class(rec.nu1, r)) * lambda_inverse(rec.nu0, r)
        contribs.append((rec.label, val))
        rhs = rhs + val
    return LocalizationReport(lhs, rhs, contribs)
