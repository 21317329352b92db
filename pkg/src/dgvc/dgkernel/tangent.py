"""Tangent complexes at rational points, the [0,1] condition, boundedness and K."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..config import LIMITS, Limits
from ..errors import NotZeroOneError, PointNotOnPi0Error
from ..polyalg import linalg
from ..polyalg.poly import fmt_q
from .cohomology import ChainComplex, Pi0Summary, cohomology_group, pi0
from .presentation import DgManifoldPresentation

Matrix = list[list[Fraction]]


@dataclass
class TangentComplexAtPoint:
    point: tuple[Fraction, ...]
    dims: list[int]             # dims[k] = dim T^k
    maps: list[Matrix]          # maps[k]: T^k -> T^{k+1}, shape dims[k+1] x dims[k]
    cohomology: list[int]       # dim H^k for k = 0..len(dims)-1

    def h(self, k: int) -> int:
        return self.cohomology[k] if 0 <= k < len(self.cohomology) else 0

    def to_json(self) -> dict:
        return {
            "point": [fmt_q(c) for c in self.point],
            "dims": self.dims,
            "maps": [[[fmt_q(c) for c in row] for row in m] for m in self.maps],
            "cohomology": self.cohomology,
        }


def tangent_complex_at(P: DgManifoldPresentation, point: Sequence) -> TangentComplexAtPoint:
    P.ensure_valid()
    pt = tuple(Fraction(c) for c in point)
    if len(pt) != P.nvars:
        raise PointNotOnPi0Error(f"point has {len(pt)} coordinates, chart has {P.nvars}")
    for f in P.j_generators:
        if f.evaluate(pt) != 0:
            raise PointNotOnPi0Error(f"point {[fmt_q(c) for c in pt]} is not on pi_0: {f} does not vanish")
    depth = -P.min_degree
    by_deg = [list(range(P.nvars))] + [P.generators_of_degree(-k) for k in range(1, depth + 1)]
    dims = [len(b) for b in by_deg]
    alg = P.alg
    unit = alg.unit_mono
    maps: list[Matrix] = []
    # T^0 -> T^1: gradient of d(g) for g of degree -1
    m0 = []
    for i in by_deg[1] if depth >= 1 else []:
        f = P.images[i].get(unit, P.base.zero())
        m0.append([f.diff(v).evaluate(pt) for v in range(P.nvars)])
    if depth >= 1:
        maps.append(m0)
    # T^k -> T^{k+1}: coefficient of single generators in d(g), deg g = -(k+1)
    for k in range(1, depth):
        cols = by_deg[k]
        col_index = {i: c for c, i in enumerate(cols)}
        mat = []
        for i in by_deg[k + 1]:
            row = [Fraction(0)] * len(cols)
            for m, c in P.images[i].items():
                if sum(m) == 1:
                    j = m.index(1)
                    if j in col_index:
                        row[col_index[j]] = c.evaluate(pt)
            mat.append(row)
        maps.append(mat)
    ranks = [linalg.rank(m) if m and m[0] else 0 for m in maps]
    coh = []
    for k in range(len(dims)):
        out_rank = ranks[k] if k < len(ranks) else 0
        in_rank = ranks[k - 1] if k >= 1 else 0
        coh.append(dims[k] - out_rank - in_rank)
    return TangentComplexAtPoint(pt, dims, maps, coh)


@dataclass
class ZeroOneVerdict:
    verdict: bool | None        # None: undetermined
    witness: str
    points: list[TangentComplexAtPoint] = field(default_factory=list)
    undetermined_length: int = 0

    def to_json(self) -> dict:
        return {
            "verdict": "undetermined" if self.verdict is None else self.verdict,
            "witness": self.witness,
            "points": [t.to_json() for t in self.points],
            "undetermined_length": self.undetermined_length,
        }


def is_zero_one_manifold(P: DgManifoldPresentation, summary: Pi0Summary | None = None) -> ZeroOneVerdict:
    P.ensure_valid()
    if P.only_degree_minus_one():
        return ZeroOneVerdict(True, "all generators have degree -1, so t^n = 0 for n >= 2")
    summary = summary or pi0(P)
    if summary.empty:
        return ZeroOneVerdict(True, "pi_0 is empty")
    if not summary.zero_dimensional:
        return ZeroOneVerdict(None, "positive-dimensional pi_0 with generators below degree -1")
    tcs = [tangent_complex_at(P, p) for p, _ in summary.points]
    for t in tcs:
        bad = [k for k in range(2, len(t.cohomology)) if t.cohomology[k]]
        if bad:
            return ZeroOneVerdict(False, f"H^{bad[0]} of the tangent complex at "
                                         f"({', '.join(fmt_q(c) for c in t.point)}) is nonzero", tcs)
    if summary.nonrational_length:
        return ZeroOneVerdict(None, f"undetermined at non-rational points of total length "
                                    f"{summary.nonrational_length}", tcs, summary.nonrational_length)
    return ZeroOneVerdict(True, "H^i(T_x) = 0 for i >= 2 at every point of pi_0", tcs)


def require_zero_one(P: DgManifoldPresentation) -> ZeroOneVerdict:
    v = is_zero_one_manifold(P)
    if v.verdict is not True:
        raise NotZeroOneError(f"not a [0,1]-manifold: {v.witness}")
    return v


@dataclass
class BoundednessReport:
    mu_bound: int
    checked: list[tuple[int, int | str]]   # (degree, dimension) for degrees < -mu
    ok: bool

    def to_json(self) -> dict:
        return {"mu_bound": self.mu_bound, "ok": self.ok,
                "checked": [{"degree": i, "dimension": d} for i, d in self.checked]}


def boundedness_bound(P: DgManifoldPresentation, truncate: int | None = None,
                      limits: Limits | None = None) -> BoundednessReport:
    limits = limits or LIMITS
    D = limits.truncate if truncate is None else truncate
    verdict = require_zero_one(P)
    summary = pi0(P, limits)
    if verdict.points:
        tcs = verdict.points
    elif summary.zero_dimensional:
        tcs = [tangent_complex_at(P, p) for p, _ in summary.points]
    else:
        tcs = []
    if tcs:
        mu = max(t.h(1) for t in tcs)
    else:
        # no rational points to inspect: use the number of degree -1 generators
        mu = len(P.generators_of_degree(-1)) if not summary.empty else 0
    cx = ChainComplex(P.structure_bundle(), limits)
    checked = []
    ok = True
    for i in range(-mu - 1, -D - 1, -1):
        g = cohomology_group(cx, i)
        checked.append((i, g.dimension))
        if not g.is_zero:
            ok = False
    return BoundednessReport(mu, checked, ok)


@dataclass
class KSheafReport:
    ranks: list[tuple[tuple[Fraction, ...], int]]
    constant: bool
    rank: int | None
    t1_rank: int
    t0_rank: int

    def to_json(self) -> dict:
        return {"rank": self.rank, "constant": self.constant, "t0_rank": self.t0_rank,
                "t1_rank": self.t1_rank,
                "per_point": [{"point": [fmt_q(c) for c in p], "rank": r} for p, r in self.ranks]}


def k_sheaf(P: DgManifoldPresentation) -> KSheafReport:
    """Rank of K = ker(t^1 -> t^2) at every rational point of pi_0."""
    verdict = require_zero_one(P)
    t1 = len(P.generators_of_degree(-1))
    if P.only_degree_minus_one():
        return KSheafReport([], True, t1, t1, P.nvars)
    ranks = []
    for t in verdict.points:
        d1 = t.maps[1] if len(t.maps) > 1 else []
        r = linalg.rank(d1) if d1 and d1[0] else 0
        ranks.append((t.point, t1 - r))
    values = {r for _, r in ranks}
    constant = len(values) <= 1
    rank = values.pop() if len(values) == 1 else (t1 if not ranks else None)
    return KSheafReport(ranks, constant, rank, t1, P.nvars)


def virtual_dimension(P: DgManifoldPresentation) -> int:
    rep = k_sheaf(P)
    if not rep.constant or rep.rank is None:
        raise NotZeroOneError("the rank of K is not constant on pi_0")
    return P.nvars - rep.rank
