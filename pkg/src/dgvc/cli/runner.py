"""Evaluate a parsed scenario into a deterministic report."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .. import equivariant as eq
from .. import virtual as vc
from ..chow import AmbientVariety, KClass
from ..config import LIMITS, Limits
from ..dgkernel import (DgBundlePresentation, DgManifoldPresentation, KoszulModel, affine_zero_locus,
                        boundedness_bound, cohomology_table, decomposability_gr_check, delta_map,
                        derived_intersection, derived_zero_locus, filtration_compatible, gr_J,
                        is_zero_one_manifold, k_sheaf, pi0, tangent_complex_at)
from ..dgkernel.global_model import multidegree
from ..dgkernel.algebra import Generator
from ..dgkernel.parse import element_from_expr, module_element_from_expr
from ..errors import DgvcError, NotZeroOneError, UnsupportedShapeError
from ..polyalg.poly import PolyRing, fmt_q
from ..syntax import ParseError, Span, constant_value
from .ast import (ActionDecl, AmbientDecl, BundleDecl, ChartDecl, Compute, DgAlgebraDecl, DgBundleDecl,
                  IntersectionDecl, LineTerm, NOSPAN, Scenario, SectionDecl, ZeroLocusDecl)
from .printer import pretty_statement


class SemanticError(DgvcError):
    def __init__(self, message: str, *spans: Span):
        self.spans = [s for s in spans if s is not None]
        where = str(self.spans[0]) + ": " if self.spans else ""
        super().__init__(where + message)
        self.message = message


@dataclass
class Obj:
    kind: str            # bundle | section | manifold | dgbundle | action
    value: object
    span: Span
    meta: dict = field(default_factory=dict)


def jsonable(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else fmt_q(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


@dataclass
class StatementResult:
    index: int
    text: str
    status: str                      # ok | failed | error
    result: object = None
    verdicts: dict = field(default_factory=dict)
    error: dict | None = None
    seconds: float = 0.0

    def to_json(self) -> dict:
        out = {"index": self.index, "statement": self.text, "status": self.status}
        if self.result is not None:
            out["result"] = jsonable(self.result)
        if self.verdicts:
            out["verdicts"] = dict(self.verdicts)
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class Report:
    source: str
    config: dict
    statements: list[StatementResult]

    @property
    def ok(self) -> bool:
        return all(s.status == "ok" for s in self.statements)

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "config": self.config,
            "statements": [s.to_json() for s in self.statements],
            "summary": {
                "statements": len(self.statements),
                "errors": sum(s.status == "error" for s in self.statements),
                "failed_verdicts": sum(s.status == "failed" for s in self.statements),
                "ok": self.ok,
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def text(self) -> str:
        lines = []
        for s in self.statements:
            lines.append(f"[{s.status}] {s.text}  ({s.seconds:.3f}s)")
            if s.error:
                lines.append(f"    error at {s.error['span']}: {s.error['message']}")
            for k, v in sorted(s.verdicts.items()):
                lines.append(f"    {k}: {'pass' if v else 'FAIL'}")
            if s.result is not None and s.status != "error":
                body = json.dumps(jsonable(s.result), sort_keys=True)
                lines.append("    " + (body if len(body) < 400 else body[:397] + "..."))
        summary = self.to_json()["summary"]
        lines.append(f"{summary['statements']} statements, {summary['errors']} errors, "
                     f"{summary['failed_verdicts']} failed verdicts: {'OK' if self.ok else 'NOT OK'}")
        return "\n".join(lines) + "\n"


def _span_json(s: Span) -> str:
    return f"{s.line}:{s.col}"


class Runner:
    def __init__(self, limits: Limits | None = None, alpha_bound: int | None = None, seed: int = 0):
        self.limits = limits or LIMITS
        self.alpha_bound = alpha_bound
        self.seed = seed
        self.ambient: AmbientVariety | None = None
        self.ambient_span: Span | None = None
        self.ring: PolyRing | None = None
        self.chart: PolyRing | None = None
        self.chart_span: Span | None = None
        self.objects: dict[str, Obj] = {}

    # ------------------------------------------------------------ driver
    def run(self, sc: Scenario, source: str = "<input>") -> Report:
        results = []
        for i, st in enumerate(sc.statements):
            t0 = time.perf_counter()
            res = StatementResult(i, pretty_statement(st), "ok")
            try:
                if isinstance(st, Compute):
                    res.result, res.verdicts = self.compute(st)
                    if not all(res.verdicts.values()):
                        res.status = "failed"
                else:
                    res.result = self.declare(st)
            except SemanticError as e:
                res.status = "error"
                res.error = {"type": "SemanticError", "message": e.message,
                             "span": _span_json(e.spans[0] if e.spans else st.span),
                             "spans": [_span_json(s) for s in e.spans]}
            except ParseError as e:
                res.status = "error"
                res.error = {"type": "ParseError", "message": str(e).split(": ", 1)[-1],
                             "span": _span_json(e.span), "spans": [_span_json(e.span)]}
            except (DgvcError, ValueError, ZeroDivisionError, ArithmeticError) as e:
                res.status = "error"
                res.error = {"type": type(e).__name__, "message": str(e), "span": _span_json(st.span),
                             "spans": [_span_json(st.span)]}
            except Exception as e:  # never let a traceback reach the user
                res.status = "error"
                res.error = {"type": "InternalError", "message": f"{type(e).__name__}: {e}",
                             "span": _span_json(st.span), "spans": [_span_json(st.span)]}
            res.seconds = time.perf_counter() - t0
            results.append(res)
        cfg = {"truncate": self.limits.truncate, "alpha_bound": self._alpha(), "seed": self.seed}
        return Report(source, cfg, results)

    def _alpha(self) -> int:
        return self.limits.alpha_bound if self.alpha_bound is None else self.alpha_bound

    # ------------------------------------------------------ declarations
    def _define(self, name: str, obj: Obj):
        if name in self.objects:
            raise SemanticError(f"'{name}' is already declared", obj.span, self.objects[name].span)
        self.objects[name] = obj

    def _lookup(self, ref, kinds: tuple[str, ...]) -> Obj:
        obj = self.objects.get(ref.name)
        if obj is None:
            raise SemanticError(f"unknown name '{ref.name}'", ref.span)
        if obj.kind not in kinds:
            raise SemanticError(f"'{ref.name}' is a {obj.kind}, expected {' or '.join(kinds)}", ref.span, obj.span)
        return obj

    def _need_chart(self, span: Span) -> PolyRing:
        if self.chart is None:
            raise SemanticError("no chart declared", span)
        return self.chart

    def declare(self, st):
        if isinstance(st, AmbientDecl):
            if self.ambient is not None:
                raise SemanticError("ambient already declared", st.span, self.ambient_span)
            need = sum(n + 1 for n in st.dims)
            if len(st.coords) != need:
                raise SemanticError(f"{len(st.coords)} coordinates given, {need} needed", st.span)
            if len(set(st.coords)) != len(st.coords):
                raise SemanticError("repeated coordinate name", st.span)
            groups, pos = [], 0
            for n in st.dims:
                groups.append(tuple(st.coords[pos:pos + n + 1]))
                pos += n + 1
            self.ambient = AmbientVariety.product(st.dims, groups)
            self.ring = PolyRing(tuple(st.coords))
            self.ambient_span = st.span
            return {"ambient": str(self.ambient), "dimension": self.ambient.dimension}
        if isinstance(st, ChartDecl):
            if self.chart is not None:
                raise SemanticError("chart already declared", st.span, self.chart_span)
            if len(st.names) != st.n or len(set(st.names)) != st.n:
                raise SemanticError(f"A({st.n}) needs {st.n} distinct variables", st.span)
            self.chart = PolyRing(tuple(st.names))
            self.chart_span = st.span
            return {"chart": f"A({st.n})", "vars": list(st.names)}
        if isinstance(st, BundleDecl):
            degrees = []
            for t in st.summands:
                if t.mult < 0:
                    raise SemanticError("negative multiplicity", t.span)
                degrees += [self._degree(t)] * t.mult
            self._define(st.name, Obj("bundle", degrees, st.span))
            return {"bundle": st.name, "rank": len(degrees)}
        if isinstance(st, SectionDecl):
            b = self._lookup(st.bundle, ("bundle",))
            if len(st.components) != len(b.value):
                raise SemanticError(f"section has {len(st.components)} components but bundle "
                                    f"'{st.bundle.name}' has rank {len(b.value)}", st.span, b.span)
            ring = self.ring if self.ambient is not None else self._need_chart(st.span)
            comps = []
            for e, d in zip(st.components, b.value):
                f = ring.from_expr(e)
                if self.ambient is not None and not f.is_zero():
                    md = multidegree(f, self.ambient)
                    if md != d:
                        raise SemanticError(f"component {f} has degree {md if md is not None else 'inhomogeneous'}, "
                                            f"the bundle summand has degree {d}", e.span, b.span)
                comps.append(f)
            self._define(st.name, Obj("section", comps, st.span, {"bundle": st.bundle.name}))
            return {"section": st.name, "components": [str(f) for f in comps]}
        if isinstance(st, ZeroLocusDecl):
            b = self._lookup(st.bundle, ("bundle",))
            s = self._lookup(st.section, ("section",))
            if s.meta["bundle"] != st.bundle.name:
                raise SemanticError(f"section '{st.section.name}' is a section of '{s.meta['bundle']}'",
                                    st.section.span, s.span)
            if self.ambient is not None:
                X = derived_zero_locus(self.ambient, b.value, s.value, self.limits)
            else:
                X = affine_zero_locus(self._need_chart(st.span), s.value)
            self._define(st.name, Obj("manifold", X, st.span, {"bundle": st.bundle.name}))
            return self._describe(X)
        if isinstance(st, IntersectionDecl):
            ring = self._need_chart(st.span)
            X = derived_intersection(ring, [ring.from_expr(e) for e in st.f], [ring.from_expr(e) for e in st.g])
            self._define(st.name, Obj("manifold", X, st.span))
            return self._describe(X)
        if isinstance(st, DgAlgebraDecl):
            ring = self._need_chart(st.span)
            gens = self._gens(st.generators, ring)
            names = {g.name for g in gens}
            from ..dgkernel.algebra import FreeGCAlgebra
            alg = FreeGCAlgebra(ring, gens)
            images = {}
            for im in st.images:
                if im.name not in names:
                    raise SemanticError(f"'{im.name}' is not a generator of '{st.name}'", im.span)
                if im.name in images:
                    raise SemanticError(f"differential of '{im.name}' given twice", im.span)
                images[im.name] = element_from_expr(alg, im.expr)
            X = DgManifoldPresentation(ring, gens, images, origin=f"dgalgebra {st.name}")
            self._define(st.name, Obj("manifold", X, st.span))
            return self._describe(X)
        if isinstance(st, DgBundleDecl):
            over = self._lookup(st.over, ("manifold",))
            if not isinstance(over.value, DgManifoldPresentation):
                raise SemanticError("dg-bundles need an affine dg-manifold", st.over.span)
            P = over.value
            gens = self._gens(st.generators, P.base, P)
            names = {g.name for g in gens}
            images = {}
            for im in st.images:
                if im.name not in names:
                    raise SemanticError(f"'{im.name}' is not a generator of '{st.name}'", im.span)
                images[im.name] = module_element_from_expr(P.alg, gens, im.expr)
            E = DgBundlePresentation(P, gens, images, origin=f"dgbundle {st.name}")
            self._define(st.name, Obj("dgbundle", E, st.span, {"over": st.over.name}))
            return {"dgbundle": st.name, "ranks": {str(k): v for k, v in sorted(E.restricted_ranks().items())}}
        if isinstance(st, ActionDecl):
            if self.ambient is None:
                raise SemanticError("torus actions need an ambient", st.span)
            w = st.coords
            if len(w.values) != len(self.ambient.all_coords):
                raise SemanticError(f"{len(w.values)} weights for {len(self.ambient.all_coords)} coordinates", w.span)
            rank = len(w.values[0]) if w.values else 1
            if any(len(v) != rank for v in w.values):
                raise SemanticError("weight vectors of different lengths", w.span)
            groups, pos = [], 0
            for n in self.ambient.dims:
                groups.append(list(w.values[pos:pos + n + 1]))
                pos += n + 1
            action = eq.TorusAction.make(groups, rank)
            lins = {}
            for ref, bw in st.bundles:
                b = self._lookup(ref, ("bundle",))
                if len(bw.values) != len(b.value):
                    raise SemanticError(f"{len(bw.values)} weights for a bundle of rank {len(b.value)}", bw.span, b.span)
                if any(len(v) != rank for v in bw.values):
                    raise SemanticError("linearization weights of the wrong length", bw.span)
                lins[ref.name] = [tuple(v) for v in bw.values]
            self._define(st.name, Obj("action", action, st.span, {"lin": lins}))
            return {"action": st.name, "rank": rank}
        raise TypeError(type(st).__name__)

    def _gens(self, decls, ring: PolyRing, P: DgManifoldPresentation | None = None) -> list[Generator]:
        seen = set(ring.names) | ({g.name for g in P.generators} if P else set())
        out = []
        for g in decls:
            if g.name in seen:
                raise SemanticError(f"generator name '{g.name}' clashes with an existing name", g.span)
            seen.add(g.name)
            out.append(Generator(g.name, g.degree))
        return out

    def _degree(self, t: LineTerm) -> tuple[int, ...]:
        if self.ambient is None:
            if any(t.degree):
                raise SemanticError("only trivial summands O are allowed on a chart", t.span)
            return (0,)
        deg = t.degree or (0,) * self.ambient.nfactors
        if len(deg) != self.ambient.nfactors:
            raise SemanticError(f"O{t.degree} does not match the ambient {self.ambient}", t.span)
        return tuple(deg)

    @staticmethod
    def _describe(X) -> dict:
        if isinstance(X, KoszulModel):
            return X.describe()
        return X.describe()

    # ------------------------------------------------------------ compute
    def compute(self, st: Compute):
        obj = self._lookup(st.target, ("manifold", "action", "dgbundle"))
        handler = getattr(self, "do_" + st.verb.replace("-", "_"))
        return handler(st, obj)

    def _manifold(self, st, obj) -> KoszulModel | DgManifoldPresentation:
        if obj.kind != "manifold":
            raise SemanticError(f"'{st.target.name}' is not a dg-manifold", st.target.span, obj.span)
        return obj.value

    def _affine(self, st, obj) -> DgManifoldPresentation:
        X = self._manifold(st, obj)
        if not isinstance(X, DgManifoldPresentation):
            raise SemanticError(f"'{st.verb}' needs an affine dg-manifold", st.target.span)
        return X

    def _truncate(self, st) -> int:
        return st.option("truncate", self.limits.truncate)

    def _twist_line(self, st) -> KClass | None:
        t = st.option("twist")
        if t is None:
            return None
        if self.ambient is None:
            raise SemanticError("twists need an ambient", NOSPAN)
        deg = self._degree(t)
        return self.ambient.line(deg) * t.mult

    def _dgbundle_opt(self, st, P) -> DgBundlePresentation | None:
        ref = st.option("bundle")
        if ref is None:
            return None
        b = self._lookup(ref, ("dgbundle",))
        if b.value.manifold is not P:
            raise SemanticError(f"'{ref.name}' lives over '{b.meta['over']}'", ref.span, b.span)
        return b.value

    def do_validate(self, st, obj):
        if obj.kind == "dgbundle":
            diags = obj.value.validate()
            return ({"valid": not diags, "diagnostics": [str(d) for d in diags]}, {"valid": not diags})
        X = self._manifold(st, obj)
        if isinstance(X, KoszulModel):
            return ({"valid": True, "diagnostics": [], "model": X.describe()}, {"valid": True})
        diags = X.validate()
        return ({"valid": not diags, "diagnostics": [str(d) for d in diags], "model": X.describe()},
                {"valid": not diags})

    def do_cohomology(self, st, obj):
        src = obj.value if obj.kind == "dgbundle" else self._manifold(st, obj)
        rng = st.option("range")
        if isinstance(src, KoszulModel):
            out = []
            for c in src.charts():
                P = src.chart(c)
                lo, hi = rng if rng else (-src.rank, 0)
                out.append({"chart": list(c), "table": [g.to_json() for g in cohomology_table(P, lo, hi, self.limits)]})
            return {"charts": out}, {}
        base = src if isinstance(src, DgBundlePresentation) else src
        if rng is None:
            manifold = src.manifold if isinstance(src, DgBundlePresentation) else src
            top = src.max_degree if isinstance(src, DgBundlePresentation) else 0
            lo, hi = manifold.min_degree - 1 + (top if top < 0 else 0), top
        else:
            lo, hi = rng
        table = cohomology_table(base, lo, hi, self.limits)
        return {"table": [g.to_json() for g in table]}, {}

    def do_pi0(self, st, obj):
        X = self._manifold(st, obj)
        if isinstance(X, KoszulModel):
            pts, nonrat = X.pi0_points() if X.pi0_dimension == 0 else ([], 0)
            return ({"dimension": X.pi0_dimension,
                     "points": [{"point": r.label(), "length": l} for r, l in pts],
                     "nonrational_length": nonrat}, {})
        return pi0(X, self.limits).to_json(), {}

    def do_tangent(self, st, obj):
        X = self._manifold(st, obj)
        at = st.option("at")
        if isinstance(X, KoszulModel):
            out = []
            for rec, _ in (X.pi0_points()[0] if X.pi0_dimension == 0 else []):
                t = tangent_complex_at(X.chart(rec.chart), rec.affine)
                out.append({**t.to_json(), "point": rec.label(), "chart": list(rec.chart)})
            return {"points": out, "vdim": X.vdim, "zero_one": True}, {}
        if at is not None:
            pt = []
            for e in at:
                v = constant_value(e)
                if v is None:
                    raise SemanticError("point coordinates must be constants", e.span)
                pt.append(v)
            return tangent_complex_at(X, pt).to_json(), {}
        v = is_zero_one_manifold(X)
        out = {"zero_one": v.to_json()}
        if v.verdict:
            out["k_sheaf"] = k_sheaf(X).to_json()
            try:
                out["vdim"] = vc.virtual_dimension(X)
            except NotZeroOneError as e:
                out["vdim"] = None
                out["vdim_note"] = str(e)
            out["boundedness"] = boundedness_bound(X, truncate=self._truncate(st), limits=self.limits).to_json()
        return out, {}

    def do_vclass(self, st, obj):
        X = self._manifold(st, obj)
        out = {"vdim": vc.virtual_dimension(X)}
        verdicts = {}
        out["k_class"] = vc.k_virtual_class(X, self.limits).to_json()
        try:
            out["chow_class"] = vc.homological_virtual_class(X, self.limits).to_json()
            cm = vc.class_map_check(X, self.limits)
            out["class_map"] = cm.to_json()
            verdicts["class_map"] = cm.ok
        except UnsupportedShapeError as e:
            out["chow_class"] = {"skipped": str(e)}
        try:
            kp = vc.kclass_product_check(X, None, self.limits)
            out["kclass_product"] = kp.to_json()
            verdicts["kclass_product"] = kp.ok
        except UnsupportedShapeError as e:
            out["kclass_product"] = {"skipped": str(e)}
        return out, verdicts

    def do_chi(self, st, obj):
        X = self._manifold(st, obj)
        if isinstance(X, KoszulModel):
            F = self._twist_line(st)
            r = vc.virtual_chi(X, F, self.limits)
        else:
            r = vc.virtual_chi(X, self._dgbundle_opt(st, X), self.limits)
        return {"chi": r.lhs, "lhs": r.lhs, "rhs": r.rhs}, {"riemann_roch": r.ok}

    def do_chern_numbers(self, st, obj):
        t = vc.chern_numbers(self._manifold(st, obj))
        return t.to_json(), {"integral": t.integral}

    def do_cobordism(self, st, obj):
        X = self._manifold(st, obj)
        c = vc.hattori_stong_certificate(X, st.option("alpha_bound", self._alpha()), self.limits)
        return c.to_json(), {"hattori_stong": c.ok}

    def do_localize(self, st, obj):
        twist = st.option("twist")
        if obj.kind == "action":
            deg = self._degree(twist) if twist else (0,) * self.ambient.nfactors
            r = eq.equivariant_chi(obj.value, self.ambient, [deg])
            return r.to_json(), {"fixed_point_sum": r.ok}
        X = self._manifold(st, obj)
        if not isinstance(X, KoszulModel):
            raise SemanticError("localization needs a derived zero locus in a projective ambient", st.target.span)
        ref = st.option("with")
        if ref is None:
            raise SemanticError("localize needs 'with <action>'", st.span)
        act = self._lookup(ref, ("action",))
        lin = act.meta["lin"].get(obj.meta.get("bundle"))
        E = None
        if twist is not None:
            E = [self._degree(twist)] * twist.mult
        rep = eq.localize_virtual(act.value, X, E, lin)
        F = self._twist_line(st)
        plain = vc.virtual_chi(X, F, self.limits)
        out = rep.to_json()
        out["fixed_points"] = [r.to_json() for r in eq.fixed_locus(act.value, X, lin)]
        out["nonequivariant_chi"] = plain.lhs
        return out, {"localization": rep.ok, "specialization": rep.specialized == plain.lhs}

    def do_gr_checks(self, st, obj):
        X = self._manifold(st, obj)
        D = self._truncate(st)
        order = st.option("order", 3)
        charts = []
        if isinstance(X, KoszulModel):
            for c in X.charts():
                P = X.chart(c)
                if not pi0(P, self.limits).empty:
                    charts.append((list(c), P))
        else:
            charts.append((None, X))
        out, verdicts = [], {}
        for label, P in charts:
            item = {}
            if label is not None:
                item["chart"] = label
            g = gr_J(P, D, self.limits)
            item["gr_J"] = g.to_json()
            ok = g.ok
            deltas = [delta_map(P, n, self.limits) for n in range(1, order + 1)]
            item["delta"] = [d.to_json() for d in deltas]
            ok_delta = all(d.surjective and d.kernel_ok for d in deltas)
            try:
                dec = decomposability_gr_check(P, None, order, limits=self.limits)
                item["decomposability"] = dec.to_json()
                ok_dec = dec.ok
            except UnsupportedShapeError as e:
                item["decomposability"] = {"skipped": str(e)}
                ok_dec = True
            filt = filtration_compatible(P, None, order, limits=self.limits)
            item["filtration_compatible"] = filt
            key = "" if label is None else "chart" + "".join(map(str, label)) + "_"
            verdicts.update({key + "gr_J": ok, key + "delta": ok_delta, key + "decomposability": ok_dec,
                             key + "filtration": filt})
            out.append(item)
        return {"charts": out}, verdicts
