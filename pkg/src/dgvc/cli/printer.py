"""Canonical text rendering of a scenario; ``parse(pretty(s)) == s``."""

from __future__ import annotations

from ..syntax import format_expr
from .ast import (ActionDecl, AmbientDecl, BundleDecl, ChartDecl, Compute, DgAlgebraDecl, DgBundleDecl,
                  IntersectionDecl, LineTerm, Ref, Scenario, SectionDecl, WeightList, ZeroLocusDecl)


def _line(t: LineTerm) -> str:
    body = "O" if not t.degree else "O(" + ",".join(map(str, t.degree)) + ")"
    return body if t.mult == 1 else f"{t.mult}*{body}"


def _exprs(es) -> str:
    return ", ".join(format_expr(e) for e in es)


def _weights(w: WeightList) -> str:
    if w.vector:
        return "[" + ", ".join("[" + ", ".join(map(str, v)) + "]" for v in w.values) + "]"
    return "[" + ", ".join(str(v[0]) for v in w.values) + "]"


def _free(gens, images) -> str:
    g = ", ".join(f"{x.name}: deg {x.degree}" for x in gens)
    d = ", ".join(f"{x.name} -> {format_expr(x.expr)}" for x in images)
    return f"free {{ {g} }} diff {{ {d} }}"


def _option(o) -> str:
    v = o.value
    if o.key == "twist":
        return f"twist {_line(v)}"
    if o.key == "range":
        return f"range [{v[0]}, {v[1]}]"
    if isinstance(v, Ref):
        return f"{o.key} {v.name}"
    if o.key == "at":
        return f"at [{_exprs(v)}]"
    return f"{o.key} {v}"


def pretty_statement(s) -> str:
    if isinstance(s, AmbientDecl):
        return "ambient " + "x".join(f"P({n})" for n in s.dims) + " [" + ", ".join(s.coords) + "];"
    if isinstance(s, ChartDecl):
        return f"chart A({s.n}) vars [" + ", ".join(s.names) + "];"
    if isinstance(s, BundleDecl):
        return f"bundle {s.name} = " + " + ".join(_line(t) for t in s.summands) + ";"
    if isinstance(s, SectionDecl):
        return f"section {s.name} of {s.bundle.name} = ({_exprs(s.components)});"
    if isinstance(s, ZeroLocusDecl):
        return f"dgmanifold {s.name} = derived_zero_locus({s.bundle.name}, {s.section.name});"
    if isinstance(s, IntersectionDecl):
        return f"dgmanifold {s.name} = derived_intersection([{_exprs(s.f)}], [{_exprs(s.g)}]);"
    if isinstance(s, DgAlgebraDecl):
        return f"dgalgebra {s.name} = {_free(s.generators, s.images)};"
    if isinstance(s, DgBundleDecl):
        return f"dgbundle {s.name} over {s.over.name} = {_free(s.generators, s.images)};"
    if isinstance(s, ActionDecl):
        extra = "".join(f", {r.name} weights {_weights(w)}" for r, w in s.bundles)
        return f"action {s.name} weights {_weights(s.coords)} on coords{extra};"
    if isinstance(s, Compute):
        opts = "".join(" " + _option(o) for o in s.options)
        return f"compute {s.verb} {s.target.name}{opts};"
    raise TypeError(type(s).__name__)


def pretty(sc: Scenario) -> str:
    return "".join(pretty_statement(s) + "\n" for s in sc.statements)
