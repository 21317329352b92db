"""Cohomology of dg-bundles (the structure sheaf included) on an affine chart."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from ..config import LIMITS, Limits
from ..errors import ResourceLimitError
from ..polyalg import INFINITE, FpGradedModule, HilbertSeries, PolyIdeal, module_kernel
from ..polyalg.poly import MultiPoly, PolyRing, fmt_q
from .presentation import DgBundlePresentation, DgManifoldPresentation


class ChainComplex:
    """The complex of free R-modules underlying a dg-bundle."""

    def __init__(self, bundle: DgBundlePresentation, limits: Limits | None = None):
        self.bundle = bundle
        self.ring: PolyRing = bundle.base
        self.limits = limits or LIMITS
        self._basis: dict[int, list] = {}
        self._mats: dict[int, list[list[MultiPoly]]] = {}

    @property
    def top(self) -> int:
        return self.bundle.max_degree

    def basis(self, i: int) -> list:
        if i not in self._basis:
            b = self.bundle.basis(i) if i <= self.top else []
            if len(b) > self.limits.max_matrix:
                raise ResourceLimitError(f"chain group in degree {i} has rank {len(b)} > {self.limits.max_matrix}")
            self._basis[i] = b
        return self._basis[i]

    def rank(self, i: int) -> int:
        return len(self.basis(i))

    def shifts(self, i: int) -> list[int] | None:
        out = []
        for key in self.basis(i):
            w = self.bundle.key_weight(key)
            if w is None:
                return None
            out.append(w)
        return out

    def matrix(self, i: int) -> list[list[MultiPoly]]:
        """Rows indexed by basis(i+1), columns by basis(i)."""
        if i not in self._mats:
            src = self.basis(i)
            dst = self.basis(i + 1)
            index = {k: r for r, k in enumerate(dst)}
            zero = self.ring.zero()
            mat = [[zero] * len(src) for _ in dst]
            for c, (m, k) in enumerate(src):
                for key, coeff in self.bundle.delta_basis(m, k).items():
                    mat[index[key]][c] = coeff
            self._mats[i] = mat
        return self._mats[i]

    def composes_to_zero(self, i: int) -> bool:
        a = self.matrix(i)
        b = self.matrix(i + 1)
        zero = self.ring.zero()
        for r in range(len(b)):
            for c in range(self.rank(i)):
                acc = zero
                for k in range(len(a)):
                    acc = acc + b[r][k] * a[k][c]
                if not acc.is_zero():
                    return False
        return True


@dataclass
class CohomologyGroup:
    degree: int
    module: FpGradedModule
    dimension: int | str
    hilbert: HilbertSeries | None
    points: list[tuple[tuple[Fraction, ...], int]] | None
    nonrational_length: int

    @property
    def is_zero(self) -> bool:
        return self.module.is_zero()

    def local_length(self, point) -> int:
        if self.points is None:
            raise ValueError("cohomology is not finite-dimensional")
        pt = tuple(Fraction(p) for p in point)
        return next((l for p, l in self.points if p == pt), 0)

    def to_json(self) -> dict:
        out = {
            "degree": self.degree,
            "dimension": self.dimension if isinstance(self.dimension, str) else int(self.dimension),
        }
        if self.hilbert is not None:
            out["hilbert_series"] = str(self.hilbert.reduced())
        if self.points is not None:
            out["per_point"] = [{"point": [fmt_q(c) for c in p], "length": l} for p, l in self.points]
            out["nonrational_length"] = self.nonrational_length
        if self.dimension == INFINITE and self.hilbert is None:
            out["note"] = "infinite-dimensional and ungraded"
        return out


def cohomology_module(cx: ChainComplex, i: int) -> FpGradedModule:
    """H^i = ker d^i / im d^{i-1} as a subquotient presentation."""
    ring = cx.ring
    s = cx.rank(i)
    shifts = cx.shifts(i)
    if s == 0:
        return FpGradedModule(ring, 0, [], [], cx.limits)
    out_mat = cx.matrix(i)
    if out_mat:
        ker = module_kernel(out_mat, ring, ncols=s, source_shifts=shifts, limits=cx.limits)
        kgens = list(ker.generators)
        kshifts = ker.generator_degrees()
    else:
        zero = (0,) * ring.nvars
        kgens = [{(j, zero): Fraction(1)} for j in range(s)]
        kshifts = tuple(shifts) if shifts is not None else None
    t = len(kgens)
    if t == 0:
        return FpGradedModule(ring, 0, [], [], cx.limits)
    in_mat = cx.matrix(i - 1) if cx.rank(i - 1) else []
    bcols = []
    if in_mat:
        for c in range(cx.rank(i - 1)):
            v = {}
            for r in range(s):
                for mon, coef in in_mat[r][c].terms.items():
                    v[(r, mon)] = coef
            if v:
                bcols.append(v)
    if not bcols:
        return FpGradedModule(ring, t, [], kshifts, cx.limits)
    # relations: a in R^t with sum a_j k_j in im(B)
    cols = kgens + bcols
    big = [[ring.zero()] * len(cols) for _ in range(s)]
    for c, v in enumerate(cols):
        for (r, mon), coef in v.items():
            big[r][c] = big[r][c] + ring.monomial(mon, coef)
    syz = module_kernel(big, ring, ncols=len(cols), limits=cx.limits)
    rels = []
    for g in syz.generators:
        rel = {(p, mon): c for (p, mon), c in g.items() if p < t}
        if rel:
            rels.append(rel)
    return FpGradedModule(ring, t, rels, kshifts, cx.limits)


def cohomology_group(cx: ChainComplex, i: int) -> CohomologyGroup:
    mod = cohomology_module(cx, i)
    dim = mod.dimension()
    hs = mod.hilbert_series() if mod.is_graded else None
    points = None
    nonrat = 0
    if dim != INFINITE:
        if dim == 0:
            points = []
        else:
            points = mod.finite().rational_points()
            nonrat = dim - sum(l for _, l in points)
    return CohomologyGroup(i, mod, dim, hs, points, nonrat)


def cohomology(P: DgManifoldPresentation | DgBundlePresentation, degree: int,
               truncate: int | None = None, limits: Limits | None = None) -> CohomologyGroup:
    """H^degree of the structure sheaf (or of a dg-bundle) on the chart."""
    bundle = P if isinstance(P, DgBundlePresentation) else P.structure_bundle()
    bundle.ensure_valid()
    return cohomology_group(ChainComplex(bundle, limits), degree)


def cohomology_table(P: DgManifoldPresentation | DgBundlePresentation, low: int, high: int | None = None,
                     limits: Limits | None = None) -> list[CohomologyGroup]:
    bundle = P if isinstance(P, DgBundlePresentation) else P.structure_bundle()
    bundle.ensure_valid()
    cx = ChainComplex(bundle, limits)
    high = cx.top if high is None else high
    return [cohomology_group(cx, i) for i in range(high, low - 1, -1)]


# --------------------------------------------------------------------- pi_0

def monomial_dimension(lms: list[tuple[int, ...]], n: int) -> int:
    """Krull dimension of R / (monomials) as the largest free variable set."""
    best = 0
    for size in range(n, -1, -1):
        for subset in _subsets(n, size):
            if all(any(m[i] > 0 for i in range(n) if i not in subset) for m in lms):
                return size
    return best


def _subsets(n, size):
    from itertools import combinations
    return [set(c) for c in combinations(range(n), size)]


@dataclass
class Pi0Summary:
    ideal: PolyIdeal
    dimension: int  # -1 when empty
    length: int | str
    points: list[tuple[tuple[Fraction, ...], int]] | None
    nonrational_length: int

    @property
    def empty(self) -> bool:
        return self.dimension < 0

    @property
    def zero_dimensional(self) -> bool:
        return self.dimension == 0

    def to_json(self) -> dict:
        out = {
            "ideal": [str(g) for g in self.ideal.generators],
            "groebner_basis": [str(g) for g in self.ideal.groebner],
            "dimension": self.dimension,
            "empty": self.empty,
        }
        if self.dimension == 0:
            out["length"] = self.length
            out["points"] = [{"point": [fmt_q(c) for c in p], "length": l} for p, l in self.points]
            out["nonrational_length"] = self.nonrational_length
        return out


def pi0(P: DgManifoldPresentation, limits: Limits | None = None) -> Pi0Summary:
    P.ensure_valid()
    ideal = PolyIdeal(P.base, [g for g in P.j_generators if not g.is_zero()], limits)
    if ideal.is_unit():
        return Pi0Summary(ideal, -1, 0, [], 0)
    lms = [g.lead()[0] for g in ideal.groebner]
    dim = monomial_dimension(lms, P.base.nvars)
    if dim > 0:
        return Pi0Summary(ideal, dim, INFINITE, None, 0)
    mod = ideal.quotient_module()
    length = mod.dimension()
    pts = mod.finite().rational_points()
    return Pi0Summary(ideal, 0, length, pts, length - sum(l for _, l in pts))
