"""Virtual classes of [0,1]-manifolds and the identities relating them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Union

from .chow import (ChowClass, KClass, chern_character, chern_class, chi, compositions, euler_class,
                   integrate, partitions, q_coefficients, schur_class, todd_class)
from .config import LIMITS, Limits
from .dgkernel.cohomology import ChainComplex, cohomology_group, pi0
from .dgkernel.global_model import KoszulModel, samuel_multiplicity
from .dgkernel.presentation import DgBundlePresentation, DgManifoldPresentation
from .dgkernel.tangent import boundedness_bound, require_zero_one, virtual_dimension as _affine_vdim
from .errors import UnsupportedShapeError
from .polyalg import INFINITE, HilbertSeries
from .polyalg.poly import fmt_q

Manifold = Union[DgManifoldPresentation, KoszulModel]

TWISTS = range(-3, 4)
STORAGE_NOTE = "homological class stored as an ambient pushforward (plus point multiplicities when r = 0)"


def _pt(p) -> list[str]:
    return [fmt_q(c) for c in p]


def virtual_dimension(X: Manifold) -> int:
    if isinstance(X, KoszulModel):
        return X.vdim
    return _affine_vdim(X)


# --------------------------------------------------------------- K side

@dataclass
class KSide:
    kind: str                                   # points | graded | koszul
    per_point: list = field(default_factory=list)   # (label, point, alternating length)
    total: int | None = None
    nonrational: int = 0
    hilbert: HilbertSeries | None = None
    kclass: KClass | None = None
    table: list = field(default_factory=list)   # (degree, dimension)

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.per_point or self.kind == "points":
            out["per_point"] = [{"point": lab, "alternating_length": v} for lab, _, v in self.per_point]
            out["total"] = self.total
            out["nonrational_length"] = self.nonrational
        if self.hilbert is not None:
            out["alternating_hilbert_series"] = str(self.hilbert.reduced())
        if self.kclass is not None:
            out["kclass"] = str(self.kclass)
        if self.table:
            out["cohomology"] = [{"degree": i, "dimension": d} for i, d in self.table]
        return out


def _affine_alternating(P: DgManifoldPresentation, bundle: DgBundlePresentation | None,
                        low: int, limits: Limits) -> KSide:
    E = bundle or P.structure_bundle()
    E.ensure_valid()
    cx = ChainComplex(E, limits)
    groups = [cohomology_group(cx, i) for i in range(cx.top, low - 1, -1)]
    table = [(g.degree, g.dimension) for g in groups]
    if all(g.dimension != INFINITE for g in groups):
        acc: dict = {}
        nonrat = 0
        for g in groups:
            sign = -1 if g.degree % 2 else 1
            for p, l in g.points:
                acc[p] = acc.get(p, 0) + sign * l
            nonrat += sign * g.nonrational_length
        pts = sorted(acc)
        per = [("(" + ", ".join(_pt(p)) + ")", p, acc[p]) for p in pts]
        total = sum(acc.values()) + nonrat
        return KSide("points", per, total, nonrat, table=table)
    if all(g.hilbert is not None for g in groups):
        hs = HilbertSeries({}, P.base.weights)
        for g in groups:
            hs = hs + (g.hilbert.scale(-1) if g.degree % 2 else g.hilbert)
        return KSide("graded", hilbert=hs.reduced(), table=table)
    raise UnsupportedShapeError("cohomology is infinite-dimensional and ungraded")


def k_virtual_class(X: Manifold, limits: Limits | None = None) -> KSide:
    limits = limits or LIMITS
    if isinstance(X, KoszulModel):
        side = KSide("koszul", kclass=X.lambda_class())
        if X.zero_dimensional:
            per = []
            for rec, _ in X.pi0_points()[0]:
                P = X.chart(rec.chart)
                alt = _affine_alternating(P, None, -X.rank, limits)
                per.append((rec.label(), rec.homogeneous, dict((p, v) for _, p, v in alt.per_point).get(rec.affine, 0)))
            side.per_point = per
            side.total = sum(v for _, _, v in per)
            side.nonrational = X.pi0_points()[1]
        return side
    require_zero_one(X)
    mu = boundedness_bound(X, truncate=0, limits=limits).mu_bound
    return _affine_alternating(X, None, -mu - 1, limits)


# ------------------------------------------------------------ Chow side

@dataclass
class ChowSide:
    vdim: int
    ambient_class: ChowClass | None = None
    per_point: list = field(default_factory=list)    # (label, point, multiplicity)
    degree: Fraction | None = None
    note: str = STORAGE_NOTE

    def to_json(self) -> dict:
        out = {"vdim": self.vdim, "note": self.note}
        if self.ambient_class is not None:
            out["ambient_class"] = self.ambient_class.to_json()
            out["ambient_class_text"] = str(self.ambient_class)
        if self.per_point:
            out["per_point"] = [{"point": lab, "multiplicity": m} for lab, _, m in self.per_point]
        if self.degree is not None:
            out["degree"] = fmt_q(self.degree)
        return out


def homological_virtual_class(X: Manifold, limits: Limits | None = None) -> ChowSide:
    limits = limits or LIMITS
    r = virtual_dimension(X)
    if isinstance(X, KoszulModel):
        cls = euler_class(X.bundle) if r >= 0 else X.ambient.zero()
        side = ChowSide(r, cls)
        if r == 0:
            side.degree = integrate(cls)
            if X.zero_dimensional:
                side.per_point = [(rec.label(), rec.homogeneous, samuel_multiplicity(X.chart(rec.chart), rec.affine, limits))
                                  for rec, _ in X.pi0_points()[0]]
        return side
    if r < 0:
        return ChowSide(r, None, [], Fraction(0), "A_r vanishes for r < 0")
    summary = pi0(X, limits)
    if r == 0 and (summary.zero_dimensional or summary.empty):
        per = [("(" + ", ".join(_pt(p)) + ")", p, samuel_multiplicity(X, p, limits)) for p, _ in summary.points]
        side = ChowSide(r, None, per, Fraction(sum(m for _, _, m in per)), "point multiplicities e(J, p)")
        if summary.nonrational_length:
            side.note += "; non-rational support not resolved"
        return side
    raise UnsupportedShapeError("affine presentations support the Chow side only for r <= 0 "
                                "with zero-dimensional pi_0")


# ------------------------------------------------------- class map check

def interpolate(xs, ys) -> list[Fraction]:
    """Coefficients (low to high) of the interpolating polynomial."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += Fraction(ys[i]) * basis[k] / denom
    return coeffs


def pairing_polynomial(X: KoszulModel, F: KClass | None = None) -> list[Fraction]:
    """m -> chi(F (x) [Lambda E^*] (x) O(m,..,m)) on m = -3..3, as coefficients."""
    base = X.lambda_class() if F is None else F * X.lambda_class()
    ample = (1,) * X.ambient.nfactors
    ys = [chi(base.twist(tuple(m * a for a in ample))) for m in TWISTS]
    return interpolate([Fraction(m) for m in TWISTS], ys)


@dataclass
class Verdict:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"check": self.name, "ok": self.ok, **self.details}


def class_map_check(X: Manifold, limits: Limits | None = None) -> Verdict:
    limits = limits or LIMITS
    r = virtual_dimension(X)
    if isinstance(X, KoszulModel):
        chow = homological_virtual_class(X, limits)
        if r == 0:
            k_total = chi(X.lambda_class())
            c_total = integrate(chow.ambient_class)
            ok = k_total == c_total
            det = {"vdim": 0, "k_side": fmt_q(k_total), "chow_side": fmt_q(c_total)}
            if X.zero_dimensional:
                kside = k_virtual_class(X, limits)
                per = []
                for (lab, p, kv), (_, _, cv) in zip(kside.per_point, chow.per_point):
                    per.append({"point": lab, "k_side": kv, "chow_side": cv})
                    ok = ok and kv == cv
                ok = ok and kside.total == c_total and kside.nonrational == 0
                det["per_point"] = per
                det["k_side_total_lengths"] = kside.total
            return Verdict("class_map", ok, det)
        poly = pairing_polynomial(X)
        if r < 0:
            ok = all(c == 0 for c in poly)
            return Verdict("class_map", ok, {"vdim": r, "k_side": "0" if ok else "nonzero", "chow_side": "0"})
        if r >= len(poly):
            raise UnsupportedShapeError("virtual dimension too large for the twist range")
        ok = all(c == 0 for c in poly[r + 1:])
        lead = poly[r] * factorial(r)
        pairing = integrate(chow.ambient_class * X.ambient.ample() ** r)
        ok = ok and lead == pairing
        return Verdict("class_map", ok, {"vdim": r, "k_side": fmt_q(lead), "chow_side": fmt_q(pairing)})
    require_zero_one(X)
    if r < 0:
        k = k_virtual_class(X, limits)
        ok = k.kind == "points" and all(v == 0 for _, _, v in k.per_point) and k.total == 0
        return Verdict("class_map", ok, {"vdim": r, "k_side": "0" if ok else "nonzero", "chow_side": "0"})
    if r == 0:
        k = k_virtual_class(X, limits)
        chow = homological_virtual_class(X, limits)
        per = []
        ok = k.kind == "points" and k.nonrational == 0
        kmap = {p: v for _, p, v in k.per_point}
        for lab, p, m in chow.per_point:
            per.append({"point": lab, "k_side": kmap.get(p, 0), "chow_side": m})
            ok = ok and kmap.get(p, 0) == m
        ok = ok and k.total == chow.degree
        return Verdict("class_map", ok, {"vdim": 0, "per_point": per, "k_side": k.total,
                                         "chow_side": fmt_q(chow.degree)})
    raise UnsupportedShapeError("class map check on affine charts needs r <= 0")


# ---------------------------------------------------------- virtual chi

@dataclass
class ChiReport:
    lhs: Fraction
    rhs: Fraction

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs and self.lhs.denominator == 1

    def to_json(self) -> dict:
        return {"lhs": fmt_q(self.lhs), "rhs": fmt_q(self.rhs), "ok": self.ok}


def _alt_rank(E: DgBundlePresentation) -> int:
    return sum((-1 if d % 2 else 1) * r for d, r in E.restricted_ranks().items())


def virtual_chi(X: Manifold, F: KClass | DgBundlePresentation | None = None,
                limits: Limits | None = None) -> ChiReport:
    """Both sides of virtual Riemann-Roch, computed independently."""
    limits = limits or LIMITS
    if isinstance(X, KoszulModel):
        F = F if isinstance(F, KClass) else X.ambient.trivial(1)
        lhs = Fraction(0)
        for j, lam in enumerate(X.bundle.dual().lambda_series(X.rank)):
            lhs += (-1) ** j * chi(F * lam)
        r = X.vdim
        if r < 0:
            rhs = Fraction(0)
        else:
            amb = X.ambient
            rhs = integrate(chern_character(F) * todd_class(X.tangent_class()) * euler_class(X.bundle))
        return ChiReport(lhs, rhs)
    require_zero_one(X)
    E = F if isinstance(F, DgBundlePresentation) else X.structure_bundle()
    r = virtual_dimension(X)
    mu = boundedness_bound(X, truncate=0, limits=limits).mu_bound
    low = min((g.degree for g in E.generators), default=0) - mu - 1
    side = _affine_alternating(X, E, low, limits)
    if side.kind != "points":
        raise UnsupportedShapeError("affine virtual chi needs finite cohomology")
    lhs = Fraction(side.total)
    if r < 0:
        rhs = Fraction(0)
    elif r == 0:
        chow = homological_virtual_class(X, limits)
        rhs = Fraction(_alt_rank(E)) * chow.degree
    else:
        raise UnsupportedShapeError("affine virtual chi needs r <= 0")
    return ChiReport(lhs, rhs)


# ------------------------------------------------------ product identity

def kclass_product_check(X: Manifold, E: KClass | DgBundlePresentation | None = None,
                         limits: Limits | None = None) -> Verdict:
    limits = limits or LIMITS
    if isinstance(X, KoszulModel):
        F = E if isinstance(E, KClass) else X.ambient.trivial(1)
        lam = X.bundle.dual().lambda_series(X.rank)
        rows = []
        ok = True
        ample = (1,) * X.ambient.nfactors
        for m in TWISTS:
            tw = X.ambient.line(tuple(m * a for a in ample))
            lhs = sum(((-1) ** j * chi(F * l * tw) for j, l in enumerate(lam)), Fraction(0))
            rhs = chi(F * X.lambda_class() * tw)
            rows.append({"twist": m, "lhs": fmt_q(lhs), "rhs": fmt_q(rhs)})
            ok = ok and lhs == rhs
        return Verdict("kclass_product", ok, {"pairings": rows})
    require_zero_one(X)
    Eb = E if isinstance(E, DgBundlePresentation) else X.structure_bundle()
    mu = boundedness_bound(X, truncate=0, limits=limits).mu_bound
    low = min((g.degree for g in Eb.generators), default=0) - mu - 1
    lhs_side = _affine_alternating(X, Eb, low, limits)
    o_side = k_virtual_class(X, limits)
    if lhs_side.kind != "points" or o_side.kind != "points":
        raise UnsupportedShapeError("product check needs finite cohomology")
    rank = _alt_rank(Eb)
    lmap = {p: v for _, p, v in lhs_side.per_point}
    omap = {p: v for _, p, v in o_side.per_point}
    rows = []
    ok = lhs_side.nonrational == rank * o_side.nonrational
    for p in sorted(set(lmap) | set(omap)):
        l, o = lmap.get(p, 0), omap.get(p, 0)
        rows.append({"point": "(" + ", ".join(_pt(p)) + ")", "lhs": l, "rhs": rank * o})
        ok = ok and l == rank * o
    return Verdict("kclass_product", ok, {"alternating_rank": rank, "per_point": rows})


# ----------------------------------------------------- Chern numbers

@dataclass
class ChernNumberTable:
    d: int
    values: dict

    @property
    def integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values.values())

    def to_json(self) -> dict:
        return {"d": self.d, "integral": self.integral,
                "numbers": [{"I": list(I), "value": fmt_q(v)} for I, v in sorted(self.values.items())]}


def chern_numbers(X: Manifold) -> ChernNumberTable:
    if not isinstance(X, KoszulModel):
        raise UnsupportedShapeError("Chern numbers need a global Koszul model")
    d = X.vdim
    if d < 0:
        return ChernNumberTable(d, {})
    c = chern_class(X.tangent_class())
    parts = [c.codim_part(k) for k in range(X.ambient.dimension + 1)]
    vclass = euler_class(X.bundle)
    values = {}
    for I in compositions(d):
        prod = vclass
        for i in I:
            prod = prod * parts[i]
        values[I] = integrate(prod)
    table = ChernNumberTable(d, values)
    if not table.integral:
        raise AssertionError(f"non-integral Chern numbers {values}")
    return table


@dataclass
class CobordismCertificate:
    d: int
    bound: int
    chern: ChernNumberTable
    rows: list

    @property
    def ok(self) -> bool:
        return all(r["integral"] and r["agrees"] for r in self.rows)

    def to_json(self) -> dict:
        return {
            "d": self.d, "alpha_bound": self.bound, "ok": self.ok,
            "chern_numbers": self.chern.to_json(),
            "rows": [{"alpha": list(r["alpha"]), "value": fmt_q(r["value"]), "chi": fmt_q(r["chi"]),
                      "integral": r["integral"], "agrees": r["agrees"]} for r in self.rows],
            "note": f"necessary-condition certificate: partitions with |alpha| <= {self.bound} only",
        }


def hattori_stong_certificate(X: Manifold, bound: int | None = None,
                              limits: Limits | None = None) -> CobordismCertificate:
    limits = limits or LIMITS
    A = limits.alpha_bound if bound is None else bound
    table = chern_numbers(X)
    d = table.d
    t = X.tangent_class()
    rows = []
    for size in range(A + 1):
        for alpha in partitions(size):
            q = q_coefficients(alpha, d)
            value = sum((q[I] * table.values[I] for I in table.values), Fraction(0))
            cross = virtual_chi(X, schur_class(alpha, t), limits).lhs
            rows.append({"alpha": alpha, "value": value, "chi": cross,
                         "integral": value.denominator == 1, "agrees": value == cross})
    return CobordismCertificate(d, A, table, rows)
