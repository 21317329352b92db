"""Scenario syntax tree.  Spans are excluded from equality so that a parse of the
pretty-printed text compares equal to the original tree."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..syntax import Expr, Span

NOSPAN = Span(0, 0, 0, 0)


def _span():
    return field(default=NOSPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Ref:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class LineTerm:
    """``mult * O(degree)``; an empty degree means the trivial line bundle."""
    mult: int
    degree: tuple[int, ...]
    span: Span = _span()


@dataclass(frozen=True)
class AmbientDecl:
    dims: tuple[int, ...]
    coords: tuple[str, ...]
    span: Span = _span()


@dataclass(frozen=True)
class ChartDecl:
    n: int
    names: tuple[str, ...]
    span: Span = _span()


@dataclass(frozen=True)
class BundleDecl:
    name: str
    summands: tuple[LineTerm, ...]
    span: Span = _span()


@dataclass(frozen=True)
class SectionDecl:
    name: str
    bundle: Ref
    components: tuple[Expr, ...]
    span: Span = _span()


@dataclass(frozen=True)
class ZeroLocusDecl:
    name: str
    bundle: Ref
    section: Ref
    span: Span = _span()


@dataclass(frozen=True)
class IntersectionDecl:
    name: str
    f: tuple[Expr, ...]
    g: tuple[Expr, ...]
    span: Span = _span()


@dataclass(frozen=True)
class GenDecl:
    name: str
    degree: int
    span: Span = _span()


@dataclass(frozen=True)
class Image:
    name: str
    expr: Expr
    span: Span = _span()


@dataclass(frozen=True)
class DgAlgebraDecl:
    name: str
    generators: tuple[GenDecl, ...]
    images: tuple[Image, ...]
    span: Span = _span()


@dataclass(frozen=True)
class DgBundleDecl:
    name: str
    over: Ref
    generators: tuple[GenDecl, ...]
    images: tuple[Image, ...]
    span: Span = _span()


Weight = tuple[int, ...]


@dataclass(frozen=True)
class WeightList:
    """Weights written as plain integers (``vector=False``) or as integer vectors."""
    values: tuple[Weight, ...]
    vector: bool
    span: Span = _span()


@dataclass(frozen=True)
class ActionDecl:
    name: str
    coords: WeightList
    bundles: tuple[tuple[Ref, WeightList], ...]
    span: Span = _span()


@dataclass(frozen=True)
class Option:
    key: str
    value: object          # LineTerm | tuple[int, int] | int | Ref | tuple[Expr, ...]
    span: Span = _span()


@dataclass(frozen=True)
class Compute:
    verb: str
    target: Ref
    options: tuple[Option, ...]
    span: Span = _span()

    def option(self, key: str, default=None):
        for o in self.options:
            if o.key == key:
                return o.value
        return default


Statement = (AmbientDecl | ChartDecl | BundleDecl | SectionDecl | ZeroLocusDecl | IntersectionDecl
             | DgAlgebraDecl | DgBundleDecl | ActionDecl | Compute)


@dataclass(frozen=True)
class Scenario:
    statements: tuple[Statement, ...]


VERBS = ("validate", "cohomology", "pi0", "tangent", "vclass", "chi", "chern-numbers", "cobordism",
         "localize", "gr-checks")

OPTIONS = ("twist", "range", "truncate", "alpha_bound", "with", "bundle", "at", "order")
