"""J-adic filtration, the maps delta_n onto J^n/J^{n+1}, and the
decomposability filtration of a dg-bundle restricted to pi_0."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from ..config import LIMITS, Limits
from ..errors import UnsupportedShapeError
from ..polyalg import INFINITE, FpGradedModule, HilbertSeries, PolyIdeal, linalg, module_kernel
from ..polyalg.modules import poly_to_vec
from ..polyalg.poly import MultiPoly
from .presentation import DgBundlePresentation, DgManifoldPresentation


def _j_ideal(P: DgManifoldPresentation, limits: Limits) -> PolyIdeal:
    return PolyIdeal(P.base, [g for g in P.j_generators if not g.is_zero()], limits)


def _scaled_limits(P: DgManifoldPresentation, limits: Limits, order: int) -> Limits:
    """Degree cap large enough for J^order (the caller asked for that order)."""
    top = max((g.total_degree() for g in P.j_generators if not g.is_zero()), default=0)
    return limits.with_(max_degree=max(limits.max_degree, top * order + 1))


def _kind(J: PolyIdeal) -> str:
    if J.is_zero_ideal():
        return "zero"
    if J.quotient_module().is_finite():
        return "finite"
    if J.is_homogeneous():
        return "graded"
    return "unsupported"


def _quotient_size(J: PolyIdeal, n: int, kind: str):
    """dim R/J^n (finite case) or its Hilbert series (graded case)."""
    if n == 0:
        return 0 if kind == "finite" else HilbertSeries({}, J.ring.weights)
    mod = J.power(n).quotient_module()
    if kind == "finite":
        return mod.dimension()
    return mod.hilbert_series()


def _piece_presentation(J: PolyIdeal, n: int) -> FpGradedModule:
    """J^n/J^{n+1} presented on the products f_I, tensored with R/J."""
    ring = J.ring
    gens = [g for g in J.generators if not g.is_zero()]
    prods: list[MultiPoly] = []
    seen = set()
    for combo in itertools.combinations_with_replacement(range(len(gens)), n):
        p = ring.one()
        for i in combo:
            p = p * gens[i]
        if p not in seen:
            seen.add(p)
            prods.append(p)
    higher = list(J.power(n + 1).groebner)
    cols = prods + higher
    t = len(prods)
    syz = module_kernel([cols], ring, ncols=len(cols), limits=J.limits)
    zero = (0,) * ring.nvars
    rels = [{k: c for k, c in g.items() if k[0] < t} for g in syz.generators]
    # tensor with R/J: J . e_I
    for i in range(t):
        for f in gens:
            rels.append({(i, m): c for m, c in f.terms.items()})
    shifts = [p.total_degree() for p in prods] if J.is_homogeneous() else None
    return FpGradedModule(ring, t, [r for r in rels if r], shifts, J.limits)


@dataclass
class NormalConeData:
    ideal: PolyIdeal
    kind: str
    truncate: int
    pieces: list                 # dim (or Hilbert series) of J^n/J^{n+1}, n = 0..truncate
    tensor_pieces: list          # same through the (V/JV) (x) J^n/J^{n+1} presentation
    h_iso: bool
    dg_vanishing: bool           # gr differential kills O^{-1}
    algebra_dims: dict = field(default_factory=dict)   # (i, n) -> (lhs, rhs)
    algebra_ok: bool = True

    @property
    def ok(self) -> bool:
        return self.h_iso and self.dg_vanishing and self.algebra_ok

    def to_json(self) -> dict:
        def fmt(v):
            return str(v.reduced()) if isinstance(v, HilbertSeries) else v
        return {
            "ideal": [str(g) for g in self.ideal.generators],
            "kind": self.kind,
            "truncate": self.truncate,
            "pieces": [fmt(v) for v in self.pieces],
            "h_iso": self.h_iso,
            "dg_vanishing": self.dg_vanishing,
            "algebra_ok": self.algebra_ok,
        }


def gr_J(P: DgManifoldPresentation, truncate: int | None = None, limits: Limits | None = None,
         presentation_upto: int | None = None, cohomological_depth: int = 2) -> NormalConeData:
    """Associated graded of the J-adic filtration with dimension identities.

    ``presentation_upto`` bounds the J-degree for the independent tensor
    presentation (defaults to the truncation).
    """
    limits = limits or LIMITS
    D = limits.truncate if truncate is None else truncate
    P.ensure_valid()
    limits = _scaled_limits(P, limits, D + 1)
    J = _j_ideal(P, limits)
    kind = _kind(J)
    if kind == "unsupported":
        raise UnsupportedShapeError("gr_J needs a zero-dimensional or homogeneous ideal")
    ring = P.base
    if kind == "zero":
        hs = FpGradedModule(ring, 1, [], (0,), limits).hilbert_series()
        zero_hs = HilbertSeries({}, ring.weights)
        pieces = [hs] + [zero_hs] * D
        return NormalConeData(J, kind, D, pieces, list(pieces), True, True)
    sizes = [_quotient_size(J, n, kind) for n in range(D + 2)]
    pieces = [sizes[n + 1] - sizes[n] for n in range(D + 1)]
    upto = D if presentation_upto is None else min(D, presentation_upto)
    tensor = []
    h_ok = True
    for n in range(upto + 1):
        if n == 0:
            mod = J.quotient_module()
        else:
            mod = _piece_presentation(J, n)
        val = mod.dimension() if kind == "finite" else mod.hilbert_series()
        tensor.append(val)
        if val != pieces[n]:
            h_ok = False
    # the induced differential O^{-1} -> O^0 on gr_J vanishes: f_k J^n lies in J^{n+1}
    dg_ok = True
    gens = [g for g in J.generators if not g.is_zero()]
    for n in range(0, min(D, 3) + 1):
        higher = J.power(n + 1)
        for combo in itertools.combinations_with_replacement(range(len(gens)), n):
            p = ring.one()
            for i in combo:
                p = p * gens[i]
            for f in P.j_generators:
                if not higher.contains(p * f):
                    dg_ok = False
    data = NormalConeData(J, kind, D, pieces, tensor, h_ok, dg_ok)
    # gr_J O^i = O^i (x) J^n/J^{n+1}: ranks of the free chain groups
    if kind == "finite":
        bundle = P.structure_bundle()
        for i in range(0, -cohomological_depth - 1, -1):
            r = len(bundle.basis(i))
            for n in range(min(D, 3) + 1):
                lhs = _free_piece_dim(J, r, n)
                rhs = r * pieces[n]
                data.algebra_dims[(i, n)] = (lhs, rhs)
                if lhs != rhs:
                    data.algebra_ok = False
    return data


def _free_piece_dim(J: PolyIdeal, r: int, n: int) -> int:
    """dim J^n R^r / J^{n+1} R^r computed through module staircases."""
    if r == 0:
        return 0

    def quot(k):
        if k == 0:
            return 0
        gens = J.power(k).groebner
        rels = [{(j, m): c for m, c in g.terms.items()} for j in range(r) for g in gens]
        return FpGradedModule(J.ring, r, rels, None, J.limits).dimension()

    return quot(n + 1) - quot(n)


# ------------------------------------------------------------------ delta_n

@dataclass
class DeltaReport:
    n: int
    source_dim: int
    target_dim: int
    image_rank: int
    matrix: list[list[Fraction]]
    surjective: bool
    kernel_ok: bool

    def to_json(self) -> dict:
        return {"n": self.n, "source_dim": self.source_dim, "target_dim": self.target_dim,
                "image_rank": self.image_rank, "surjective": self.surjective, "kernel_ok": self.kernel_ok}


def delta_map(P: DgManifoldPresentation, n: int, limits: Limits | None = None) -> DeltaReport:
    """delta_n : S^n(O^{-1}|pi_0) -> J^n/J^{n+1} in coordinates."""
    if n < 1:
        raise ValueError("n must be >= 1")
    limits = _scaled_limits(P, limits or LIMITS, n + 1)
    P.ensure_valid()
    J = _j_ideal(P, limits)
    kind = _kind(J)
    ones = P.generators_of_degree(-1)
    f = list(P.j_generators)
    if kind == "zero":
        return DeltaReport(n, 0, 0, 0, [], True, True)
    if kind != "finite":
        raise UnsupportedShapeError("delta_map needs zero-dimensional pi_0")
    ring = P.base
    low = J.quotient_module()
    std_low = [ring.monomial(e) for _, e in low.standard_basis]
    hi_mod = J.power(n + 1).quotient_module()
    target_dim = hi_mod.dimension() - (J.power(n).quotient_module().dimension())

    def coords(p: MultiPoly) -> list[Fraction]:
        return hi_mod.coordinates(poly_to_vec(p))

    cols = []
    for combo in itertools.combinations_with_replacement(range(len(ones)), n):
        prod = ring.one()
        for i in combo:
            prod = prod * f[i]
        for b in std_low:
            cols.append(coords(b * prod))
    matrix = linalg.transpose(cols, hi_mod.dimension()) if cols else []
    rank = linalg.rank(cols) if cols else 0
    # kernel condition on (d O^{-2}) . S^{n-1}
    kernel_ok = True
    unit = P.alg.unit_mono
    pos = {i: k for k, i in enumerate(ones)}
    for g in P.generators_of_degree(-2):
        img = P.images[g]
        lin = ring.zero()
        for m, c in img.items():
            j = m.index(1) if sum(m) == 1 else None
            if j is None or j not in pos:
                continue
            lin = lin + c * f[pos[j]]
        for combo in itertools.combinations_with_replacement(range(len(ones)), n - 1):
            prod = lin
            for i in combo:
                prod = prod * f[i]
            for b in std_low:
                if any(coords(b * prod)):
                    kernel_ok = False
    source_dim = len(cols)
    return DeltaReport(n, source_dim, target_dim, rank, matrix, rank == target_dim, kernel_ok)


# ------------------------------------------------------ decomposability

def _word_length(m) -> int:
    return sum(m)


def sym_power_ranks(P: DgManifoldPresentation, n: int, low: int) -> dict[int, int]:
    """Ranks of S^n(omega^{<=-1}) per degree b >= low, by a generating function.

    Odd generators contribute (1 + u t^d), even ones 1/(1 - u t^d).
    """
    series: dict[tuple[int, int], int] = {(0, 0): 1}
    for g in P.generators:
        d = g.degree
        new: dict[tuple[int, int], int] = {}
        for (u, t), c in series.items():
            powers = [0, 1] if g.odd else range(0, n - u + 1)
            for k in powers:
                if u + k > n or t + k * d < low:
                    break
                key = (u + k, t + k * d)
                new[key] = new.get(key, 0) + c
        series = new
    return {t: c for (u, t), c in series.items() if u == n}


@dataclass
class DecomposabilityReport:
    length: int
    rows: list[dict]
    ok: bool

    def to_json(self) -> dict:
        return {"length": self.length, "ok": self.ok, "rows": self.rows}


def decomposability_gr_check(P: DgManifoldPresentation, E: DgBundlePresentation | None = None,
                             nmax: int = 3, depth: int | None = None,
                             limits: Limits | None = None) -> DecomposabilityReport:
    """dim gr^n_D(E|pi_0) against dim(E-bar (x) S^n(omega^{<=-1})) degreewise."""
    limits = limits or LIMITS
    P.ensure_valid()
    E = E or P.structure_bundle()
    E.ensure_valid()
    J = _j_ideal(P, limits)
    kind = _kind(J)
    if kind not in ("finite",):
        if kind == "zero" or J.is_unit():
            pass
        raise UnsupportedShapeError("decomposability check needs zero-dimensional pi_0")
    length = J.quotient_module().dimension()
    D = limits.truncate if depth is None else depth
    top = E.max_degree
    alg = P.alg
    rows = []
    ok = True
    ebar: dict[int, int] = E.restricted_ranks()
    for i in range(top, top - D - 1, -1):
        dn = []
        for n in range(nmax + 2):
            dn.append(_filtration_span(P, E, i, n))
        for n in range(nmax + 1):
            lhs = length * (dn[n] - dn[n + 1])
            sym = sym_power_ranks(P, n, i - top)
            rhs = length * sum(r * sym.get(i - a, 0) for a, r in ebar.items())
            rows.append({"degree": i, "n": n, "lhs": lhs, "rhs": rhs})
            if lhs != rhs:
                ok = False
    return DecomposabilityReport(length, rows, ok)


def _filtration_span(P: DgManifoldPresentation, E: DgBundlePresentation, i: int, n: int) -> int:
    """Number of basis vectors of E^i reached by n-fold products of generators
    acting on E; the R/J-span of D^n in degree i has rank this number."""
    alg = P.alg
    k = alg.k
    reached = set()
    gens = list(range(k))
    for combo in itertools.combinations_with_replacement(gens, n):
        word = [0] * k
        for g in combo:
            word[g] += 1
        if any(word[g] > 1 and alg.odd[g] for g in range(k)):
            continue
        word = tuple(word)
        wdeg = alg.mono_degree(word)
        for (m, kk) in E.basis(i - wdeg):
            r = alg.mul_mono(word, m)
            if r is not None:
                reached.add((r[1], kk))
    return len(reached)


def filtration_compatible(P: DgManifoldPresentation, E: DgBundlePresentation | None = None,
                          nmax: int = 3, depth: int = 4, limits: Limits | None = None) -> bool:
    """delta(D^n E|pi_0) lies in D^n E|pi_0: terms that drop word length have
    coefficients in J."""
    limits = limits or LIMITS
    E = E or P.structure_bundle()
    J = _j_ideal(P, limits)
    top = E.max_degree
    for i in range(top, top - depth - 1, -1):
        for (m, k) in E.basis(i):
            wl = _word_length(m)
            for (m2, k2), c in E.delta_basis(m, k).items():
                if _word_length(m2) < min(wl, nmax) and not J.contains(c):
                    return False
    return True
