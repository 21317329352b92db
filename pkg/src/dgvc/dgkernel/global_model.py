"""Derived zero loci of sections of split bundles on products of projective spaces."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from ..chow import AmbientVariety, KClass
from ..config import LIMITS, Limits
from ..errors import InvalidPresentationError
from ..polyalg import INFINITE, PolyIdeal
from ..polyalg.poly import MultiPoly, PolyRing, fmt_q
from .cohomology import ChainComplex, cohomology_group, monomial_dimension
from .presentation import DgManifoldPresentation, Diagnostic, affine_zero_locus, koszul_presentation

Degree = tuple[int, ...]


def ambient_ring(ambient: AmbientVariety) -> PolyRing:
    return PolyRing(ambient.all_coords)


def multidegree(p: MultiPoly, ambient: AmbientVariety) -> Degree | None:
    """Multidegree of a multihomogeneous polynomial (None if inhomogeneous)."""
    spans = []
    start = 0
    for n in ambient.dims:
        spans.append(range(start, start + n + 1))
        start += n + 1
    degs = {tuple(sum(m[i] for i in s) for s in spans) for m in p.terms}
    return degs.pop() if len(degs) == 1 else None


@dataclass(frozen=True)
class PointRecord:
    chart: tuple[int, ...]
    affine: tuple[Fraction, ...]
    homogeneous: tuple[Fraction, ...]

    def label(self) -> str:
        return "[" + ":".join(fmt_q(c) for c in self.homogeneous) + "]"


class KoszulModel:
    """Koszul algebra of ``E = sum O(a_i)`` with differential contraction by ``s``."""

    def __init__(self, ambient: AmbientVariety, degrees: Sequence[Degree], section: Sequence[MultiPoly],
                 limits: Limits | None = None):
        self.ambient = ambient
        self.degrees = tuple(tuple(d) for d in degrees)
        self.ring = ambient_ring(ambient)
        self.section = tuple(section)
        self.limits = limits or LIMITS
        diags = []
        if len(self.section) != len(self.degrees):
            diags.append(Diagnostic("s", f"section has {len(self.section)} components, bundle rank {len(self.degrees)}"))
        for i, (f, d) in enumerate(zip(self.section, self.degrees)):
            if len(d) != ambient.nfactors:
                diags.append(Diagnostic(f"s{i + 1}", f"twist {d} does not match {ambient}"))
                continue
            if f.ring != self.ring:
                diags.append(Diagnostic(f"s{i + 1}", "section component in the wrong coordinate ring"))
                continue
            if f.is_zero():
                continue
            md = multidegree(f, ambient)
            if md != d:
                diags.append(Diagnostic(f"s{i + 1}", f"component {f} has degree "
                                                     f"{md if md is not None else 'inhomogeneous'}, expected {d}"))
        if diags:
            raise InvalidPresentationError("section does not match the bundle: " + "; ".join(map(str, diags)), diags)

    # -- basic invariants
    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def dimension(self) -> int:
        return self.ambient.dimension

    @property
    def vdim(self) -> int:
        return self.dimension - self.rank

    @property
    def bundle(self) -> KClass:
        parts: dict = {}
        for d in self.degrees:
            parts[d] = parts.get(d, 0) + 1
        return KClass(self.ambient, parts)

    def lambda_class(self) -> KClass:
        """[Lambda^bullet E^*] = sum_j (-1)^j [Lambda^j E^*]."""
        out = KClass(self.ambient, {})
        dual = self.bundle.dual()
        for j, lam in enumerate(dual.lambda_series(self.rank)):
            out = out + lam * ((-1) ** j)
        return out

    def tangent_class(self) -> KClass:
        """t^bullet = [t^0] - [K] = T - E."""
        return self.ambient.tangent() - self.bundle

    # -- charts
    def charts(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*[range(n + 1) for n in self.ambient.dims]))

    def _chart_layout(self, chart: tuple[int, ...]):
        names = []
        fixed = {}
        index = 0
        for k, (n, coords) in enumerate(zip(self.ambient.dims, self.ambient.coords)):
            for i, c in enumerate(coords):
                if i == chart[k]:
                    fixed[index] = True
                else:
                    names.append(c)
                index += 1
        return tuple(names), fixed

    def chart_ring(self, chart: tuple[int, ...]) -> PolyRing:
        return PolyRing(self._chart_layout(chart)[0])

    def dehomogenize(self, f: MultiPoly, chart: tuple[int, ...]) -> MultiPoly:
        names, fixed = self._chart_layout(chart)
        ring = PolyRing(names)
        return f.substitute({i: ring.one() for i in fixed}, ring)

    def chart(self, chart: tuple[int, ...]) -> DgManifoldPresentation:
        ring = self.chart_ring(chart)
        sec = [self.dehomogenize(f, chart) for f in self.section]
        pres = koszul_presentation(ring, sec, origin=f"derived_zero_locus chart {chart}")
        return pres.ensure_valid()

    def owned_vanishing(self, chart: tuple[int, ...]) -> list[int]:
        """Affine coordinates that must vanish for a point to belong to this chart
        (coordinates before the chart coordinate in each factor)."""
        out = []
        pos = 0
        for k, n in enumerate(self.ambient.dims):
            for i in range(n + 1):
                if i == chart[k]:
                    continue
                if i < chart[k]:
                    out.append(pos)
                pos += 1
        return out

    def to_homogeneous(self, chart: tuple[int, ...], affine: Sequence[Fraction]) -> tuple[Fraction, ...]:
        out = []
        it = iter(affine)
        for k, n in enumerate(self.ambient.dims):
            for i in range(n + 1):
                out.append(Fraction(1) if i == chart[k] else next(it))
        return tuple(out)

    # -- pi_0
    @cached_property
    def pi0_dimension(self) -> int:
        best = -1
        for c in self.charts():
            ring = self.chart_ring(c)
            sec = [self.dehomogenize(f, c) for f in self.section if not f.is_zero()]
            J = PolyIdeal(ring, sec, self.limits)
            if J.is_unit():
                continue
            lms = [g.lead()[0] for g in J.groebner]
            best = max(best, monomial_dimension(lms, ring.nvars))
        return best

    @property
    def zero_dimensional(self) -> bool:
        return self.pi0_dimension == 0

    def pi0_points(self) -> tuple[list[tuple[PointRecord, int]], int]:
        """Rational points of pi_0 with lengths of O/J, and the non-rational remainder."""
        pts = []
        nonrat = 0
        for c in self.charts():
            P = self.chart(c)
            J = PolyIdeal(P.base, [g for g in P.j_generators if not g.is_zero()], self.limits)
            if J.is_unit():
                continue
            mod = J.quotient_module().finite()
            van = self.owned_vanishing(c)
            owned = mod.support_length(van)
            found = 0
            for aff, length in mod.rational_points():
                if all(aff[i] == 0 for i in van):
                    pts.append((PointRecord(c, aff, self.to_homogeneous(c, aff)), length))
                    found += length
            nonrat += owned - found
        return pts, nonrat

    def describe(self) -> dict:
        return {
            "ambient": str(self.ambient),
            "bundle": str(self.bundle),
            "section": [str(f) for f in self.section],
            "vdim": self.vdim,
        }


def derived_zero_locus(ambient: AmbientVariety, degrees: Sequence[Degree | int], section: Sequence[MultiPoly],
                       limits: Limits | None = None) -> KoszulModel:
    degs = [(d,) if isinstance(d, int) else tuple(d) for d in degrees]
    return KoszulModel(ambient, degs, section, limits)


# ------------------------------------------------------------ multiplicities

def samuel_multiplicity(P: DgManifoldPresentation, point: Sequence[Fraction], limits: Limits | None = None,
                        max_order: int | None = None) -> int:
    """e(J, p) from the n-th finite difference of k -> length_p(R/J^k)."""
    limits = limits or LIMITS
    J = PolyIdeal(P.base, [g for g in P.j_generators if not g.is_zero()], limits)
    n = P.base.nvars
    pt = tuple(Fraction(c) for c in point)
    top = max((g.total_degree() for g in J.generators), default=1)
    K = max_order or (n + 4)
    lim = limits.with_(max_degree=max(limits.max_degree, top * (K + 1) + 1))
    lengths = [0]
    for k in range(1, K + 1):
        mod = PolyIdeal(P.base, J.power(k).generators, lim).quotient_module().finite()
        lengths.append(mod.local_length(pt))

    def diff(seq, times):
        for _ in range(times):
            seq = [b - a for a, b in zip(seq, seq[1:])]
        return seq

    d = diff(lengths, n)
    if len(d) >= 2 and d[-1] != d[-2]:
        raise ValueError("Hilbert-Samuel function not yet polynomial; raise max_order")
    return d[-1]
