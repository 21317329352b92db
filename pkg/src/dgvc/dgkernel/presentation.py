"""dg-manifold and dg-bundle presentations, validation and builders."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from ..errors import InvalidPresentationError
from ..polyalg.poly import MultiPoly, PolyRing, degree_of
from .algebra import Derivation, Element, FreeGCAlgebra, Generator, elem_add

ModElement = dict  # (Mono, int) -> MultiPoly


@dataclass(frozen=True)
class Diagnostic:
    generator: str
    message: str

    def __str__(self):
        return f"{self.generator}: {self.message}"


class DgManifoldPresentation:
    """Affine chart ``R = Q[x..]`` with free generators and differential values.

    ``origin`` records how the presentation was built (for reports only).
    """

    def __init__(self, base: PolyRing, generators: Sequence[Generator],
                 images: Mapping[str, Element], origin: str = "free"):
        self.base = base
        self.generators = tuple(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise InvalidPresentationError("duplicate generator names",
                                           [Diagnostic(n, "duplicate") for n in names if names.count(n) > 1])
        clash = set(names) & set(base.names)
        if clash:
            raise InvalidPresentationError("generator names clash with coordinates",
                                           [Diagnostic(n, "clashes with a coordinate") for n in sorted(clash)])
        unknown = set(images) - set(names)
        if unknown:
            raise InvalidPresentationError("differential on unknown generators",
                                           [Diagnostic(n, "not a generator") for n in sorted(unknown)])
        self.alg = FreeGCAlgebra(base, self.generators)
        self.images = tuple(dict(images.get(n, {})) for n in names)
        self.origin = origin
        self.intersection_data: tuple[int, int] | None = None

    @cached_property
    def d(self) -> Derivation:
        return Derivation(self.alg, self.images)

    @property
    def nvars(self) -> int:
        return self.base.nvars

    def generators_of_degree(self, k: int) -> list[int]:
        return [i for i, g in enumerate(self.generators) if g.degree == k]

    @property
    def min_degree(self) -> int:
        return min((g.degree for g in self.generators), default=0)

    def only_degree_minus_one(self) -> bool:
        return all(g.degree == -1 for g in self.generators)

    def has_even_generators(self) -> bool:
        return any(not g.odd for g in self.generators)

    def validate(self) -> list[Diagnostic]:
        out: list[Diagnostic] = []
        alg = self.alg
        for g in self.generators:
            if g.degree > 0:
                out.append(Diagnostic(g.name, f"positive degree {g.degree}"))
            elif g.degree == 0:
                out.append(Diagnostic(g.name, "degree 0 generator: the degree-0 part must equal the base ring"))
        if out:
            return out
        for i, g in enumerate(self.generators):
            for m in self.images[i]:
                if alg.mono_degree(m) != g.degree + 1:
                    out.append(Diagnostic(g.name, f"d({g.name}) has a term {alg.mono_str(m)} of degree "
                                                  f"{alg.mono_degree(m)}, expected {g.degree + 1}"))
                    break
        if out:
            return out
        for i, g in enumerate(self.generators):
            dd = self.d(self.images[i])
            if dd:
                out.append(Diagnostic(g.name, f"d^2({g.name}) = {alg.elem_str(dd)} != 0"))
        return out

    def ensure_valid(self) -> "DgManifoldPresentation":
        diags = self.validate()
        if diags:
            raise InvalidPresentationError("invalid dg presentation: " + "; ".join(map(str, diags)), diags)
        return self

    @cached_property
    def internal_weights(self) -> tuple[int, ...] | None:
        """Internal degrees making d homogeneous, or None when d is inhomogeneous."""
        w = self.base.weights
        alg = self.alg
        order = sorted(range(len(self.generators)), key=lambda i: -self.generators[i].degree)
        weights: dict[int, int] = {}
        for i in order:
            degs = set()
            for m, c in self.images[i].items():
                part = sum(weights[j] * e for j, e in enumerate(m) if e)
                for mon in c.terms:
                    degs.add(degree_of(mon, w) + part)
            if len(degs) > 1:
                return None
            weights[i] = degs.pop() if degs else 0
        return tuple(weights[i] for i in range(len(self.generators)))

    def is_graded(self) -> bool:
        return self.internal_weights is not None

    @cached_property
    def j_generators(self) -> tuple[MultiPoly, ...]:
        """Images of the degree -1 generators: they generate J = d(O^{-1})."""
        out = []
        unit = self.alg.unit_mono
        for i in self.generators_of_degree(-1):
            out.append(self.images[i].get(unit, self.base.zero()))
        return tuple(out)

    def structure_bundle(self) -> "DgBundlePresentation":
        return DgBundlePresentation(self, [Generator("1", 0)], {}, origin="structure sheaf")

    def describe(self) -> dict:
        alg = self.alg
        return {
            "origin": self.origin,
            "coordinates": list(self.base.names),
            "generators": [{"name": g.name, "degree": g.degree} for g in self.generators],
            "differential": {g.name: alg.elem_str(self.images[i]) for i, g in enumerate(self.generators)},
        }

    def __repr__(self):
        return f"DgManifoldPresentation({self.origin}, gens={[g.name for g in self.generators]})"


class DgBundlePresentation:
    """Free graded module over a dg-manifold with a differential on its generators.

    Module elements are dicts ``(supermonomial, generator index) -> coefficient``.
    Leibniz rule: ``delta(m e) = d(m) e + (-1)^{|m|} m delta(e)``.
    """

    def __init__(self, manifold: DgManifoldPresentation, generators: Sequence[Generator],
                 images: Mapping[str, ModElement], origin: str = "free"):
        self.manifold = manifold
        self.generators = tuple(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise InvalidPresentationError("duplicate bundle generator names")
        self.images = tuple(dict(images.get(n, {})) for n in names)
        self.origin = origin
        self._cache: dict = {}

    @property
    def alg(self) -> FreeGCAlgebra:
        return self.manifold.alg

    @property
    def base(self) -> PolyRing:
        return self.manifold.base

    @property
    def max_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)

    @property
    def finitely_generated(self) -> bool:
        return True

    def left_mul(self, m, x: ModElement) -> ModElement:
        """Multiply a module element on the left by a supermonomial."""
        out: ModElement = {}
        for (m2, k), c in x.items():
            r = self.alg.mul_mono(m, m2)
            if r is None:
                continue
            s, mm = r
            key = (mm, k)
            v = out.get(key)
            v = c * s if v is None else v + c * s
            if v.is_zero():
                out.pop(key, None)
            else:
                out[key] = v
        return out

    def delta_basis(self, m, k: int) -> ModElement:
        key = (m, k)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        alg = self.alg
        out: ModElement = {}
        for m2, c in self.manifold.d.on_mono(m).items():
            out = _mod_add(out, {(m2, k): c})
        sign = -1 if alg.mono_degree(m) % 2 else 1
        for key2, c in self.left_mul(m, self.images[k]).items():
            out = _mod_add(out, {key2: c * sign})
        self._cache[key] = out
        return out

    def delta(self, x: ModElement) -> ModElement:
        out: ModElement = {}
        for (m, k), c in x.items():
            for key2, c2 in self.delta_basis(m, k).items():
                out = _mod_add(out, {key2: c2 * c})
        return out

    def basis(self, i: int) -> list[tuple]:
        out = []
        for k, g in enumerate(self.generators):
            for m in self.alg.monomials_of_degree(i - g.degree):
                out.append((m, k))
        return out

    def validate(self) -> list[Diagnostic]:
        out: list[Diagnostic] = list(self.manifold.validate())
        if out:
            return out
        alg = self.alg
        for k, g in enumerate(self.generators):
            for (m, j) in self.images[k]:
                if alg.mono_degree(m) + self.generators[j].degree != g.degree + 1:
                    out.append(Diagnostic(g.name, "differential term of the wrong degree"))
                    break
        if out:
            return out
        unit = alg.unit_mono
        for k, g in enumerate(self.generators):
            dd = self.delta(self.delta_basis(unit, k))
            if dd:
                out.append(Diagnostic(g.name, f"delta^2({g.name}) != 0"))
        return out

    def ensure_valid(self) -> "DgBundlePresentation":
        diags = self.validate()
        if diags:
            raise InvalidPresentationError("invalid dg-bundle: " + "; ".join(map(str, diags)), diags)
        return self

    @cached_property
    def internal_weights(self) -> tuple[int, ...] | None:
        mw = self.manifold.internal_weights
        if mw is None:
            return None
        w = self.base.weights
        order = sorted(range(len(self.generators)), key=lambda i: -self.generators[i].degree)
        weights: dict[int, int] = {}
        for k in order:
            degs = set()
            for (m, j), c in self.images[k].items():
                if j not in weights:
                    return None
                part = sum(mw[t] * e for t, e in enumerate(m) if e) + weights[j]
                for mon in c.terms:
                    degs.add(degree_of(mon, w) + part)
            if len(degs) > 1:
                return None
            weights[k] = degs.pop() if degs else 0
        return tuple(weights[k] for k in range(len(self.generators)))

    def key_weight(self, key) -> int | None:
        mw = self.manifold.internal_weights
        bw = self.internal_weights
        if mw is None or bw is None:
            return None
        m, k = key
        return sum(mw[t] * e for t, e in enumerate(m) if e) + bw[k]

    def restricted_ranks(self) -> dict[int, int]:
        """Ranks of the restricted complex: bundle generators per degree."""
        out: dict[int, int] = {}
        for g in self.generators:
            out[g.degree] = out.get(g.degree, 0) + 1
        return out


def _mod_add(a: ModElement, b: ModElement) -> ModElement:
    out = dict(a)
    for key, c in b.items():
        v = out.get(key)
        v = c if v is None else v + c
        if v.is_zero():
            out.pop(key, None)
        else:
            out[key] = v
    return out


# ------------------------------------------------------------------ builders

def free_presentation(base: PolyRing, generators: Sequence[tuple[str, int]],
                      differential: Mapping[str, str | MultiPoly | Element],
                      origin: str = "free") -> DgManifoldPresentation:
    """Build from textual differential values such as ``{"u": "e2 - x*e1"}``."""
    from .parse import parse_element  # local import to avoid a cycle
    gens = [Generator(n, d) for n, d in generators]
    alg = FreeGCAlgebra(base, gens)
    images = {}
    for name, val in differential.items():
        if isinstance(val, str):
            images[name] = parse_element(alg, val)
        elif isinstance(val, MultiPoly):
            images[name] = alg.scalar(val)
        else:
            images[name] = dict(val)
    return DgManifoldPresentation(base, gens, images, origin)


def koszul_presentation(base: PolyRing, section: Sequence[MultiPoly], prefix: str = "e",
                        origin: str = "koszul") -> DgManifoldPresentation:
    gens = [Generator(f"{prefix}{i + 1}", -1) for i in range(len(section))]
    alg = FreeGCAlgebra(base, gens)
    images = {g.name: alg.scalar(f) for g, f in zip(gens, section)}
    return DgManifoldPresentation(base, gens, images, origin)


def affine_zero_locus(base: PolyRing, section: Sequence[MultiPoly]) -> DgManifoldPresentation:
    """Derived zero locus of a section of a trivial bundle on affine space."""
    return koszul_presentation(base, section, origin="derived_zero_locus").ensure_valid()


def derived_intersection(base: PolyRing, f: Sequence[MultiPoly], g: Sequence[MultiPoly]) -> DgManifoldPresentation:
    """Tensor product of the Koszul algebras of f and g over the chart."""
    gens = [Generator(f"a{i + 1}", -1) for i in range(len(f))] + \
           [Generator(f"b{i + 1}", -1) for i in range(len(g))]
    alg = FreeGCAlgebra(base, gens)
    images = {gn.name: alg.scalar(p) for gn, p in zip(gens, list(f) + list(g))}
    pres = DgManifoldPresentation(base, gens, images, origin="derived_intersection")
    pres.intersection_data = (len(f), len(g))
    return pres.ensure_valid()
