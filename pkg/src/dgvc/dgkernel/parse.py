"""Parse textual elements of a free graded-commutative algebra."""

from __future__ import annotations

from ..syntax import Expr, ParseError, Span, eval_expr, parse_expression
from .algebra import Element, FreeGCAlgebra, elem_add, elem_scale

_NOSPAN = Span(0, 0, 0, 0)


class _Wrap:
    __slots__ = ("alg", "x")

    def __init__(self, alg: FreeGCAlgebra, x: Element):
        self.alg = alg
        self.x = x

    def __add__(self, o):
        return _Wrap(self.alg, elem_add(self.x, o.x))

    def __sub__(self, o):
        return _Wrap(self.alg, elem_add(self.x, o.x, self.alg.base.const(-1)))

    def __neg__(self):
        return _Wrap(self.alg, elem_scale(self.x, -1))

    def __mul__(self, o):
        return _Wrap(self.alg, self.alg.mul(self.x, o.x))


def element_from_expr(alg: FreeGCAlgebra, expr: Expr) -> Element:
    base = alg.base
    gens = {g.name for g in alg.generators}

    def leaf(name, span):
        if name in gens:
            return _Wrap(alg, alg.gen(name))
        if name in base.names:
            return _Wrap(alg, alg.scalar(base.gen(name)))
        raise ParseError(f"unknown name '{name}'", span)

    return eval_expr(expr, leaf, _Wrap(alg, alg.one()),
                     lambda q: _Wrap(alg, alg.scalar(base.const(q)))).x


def parse_element(alg: FreeGCAlgebra, text: str) -> Element:
    return element_from_expr(alg, parse_expression(text))


class _ModWrap:
    """Either an algebra element (``mod is None``) or a module element."""

    __slots__ = ("alg", "gens", "x", "mod")

    def __init__(self, alg, gens, x=None, mod=None):
        self.alg, self.gens, self.x, self.mod = alg, gens, x, mod

    def _as_mod(self, span=None):
        if self.mod is not None:
            return self.mod
        if self.x:
            raise ParseError("term without a bundle generator", span or _NOSPAN)
        return {}

    def _add(self, o, scale):
        if self.mod is None and o.mod is None:
            return _ModWrap(self.alg, self.gens, elem_add(self.x, o.x, self.alg.base.const(scale)))
        a, b = self._as_mod(), o._as_mod()
        out = dict(a)
        for key, c in b.items():
            v = out.get(key)
            v = c * scale if v is None else v + c * scale
            if v.is_zero():
                out.pop(key, None)
            else:
                out[key] = v
        return _ModWrap(self.alg, self.gens, mod=out)

    def __add__(self, o):
        return self._add(o, 1)

    def __sub__(self, o):
        return self._add(o, -1)

    def __neg__(self):
        if self.mod is None:
            return _ModWrap(self.alg, self.gens, elem_scale(self.x, -1))
        return _ModWrap(self.alg, self.gens, mod={k: -c for k, c in self.mod.items()})

    def __mul__(self, o):
        alg = self.alg
        if self.mod is None and o.mod is None:
            return _ModWrap(alg, self.gens, alg.mul(self.x, o.x))
        if self.mod is not None and o.mod is not None:
            raise ParseError("product of two bundle generators", _NOSPAN)
        if self.mod is None:
            left, right, flip = self.x, o.mod, False
        else:
            left, right, flip = o.x, self.mod, True
        out: dict = {}
        for m, c in left.items():
            for (m2, k), c2 in right.items():
                r = alg.mul_mono(m, m2)
                if r is None:
                    continue
                s, mm = r
                if flip and (alg.mono_degree(m) * (alg.mono_degree(m2) + self.gens[k])) % 2:
                    s = -s
                key = (mm, k)
                v = out.get(key)
                v = c * c2 * s if v is None else v + c * c2 * s
                if v.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = v
        return _ModWrap(alg, self.gens, mod=out)


def module_element_from_expr(alg: FreeGCAlgebra, generators, expr: Expr) -> dict:
    """Parse an element of the free module on ``generators`` (a list of
    ``Generator``) over ``alg``; bundle generators may sit on either side."""
    base = alg.base
    agens = {g.name for g in alg.generators}
    mindex = {g.name: i for i, g in enumerate(generators)}
    degs = [g.degree for g in generators]

    def leaf(name, span):
        if name in mindex:
            return _ModWrap(alg, degs, mod={(alg.unit_mono, mindex[name]): base.one()})
        if name in agens:
            return _ModWrap(alg, degs, alg.gen(name))
        if name in base.names:
            return _ModWrap(alg, degs, alg.scalar(base.gen(name)))
        raise ParseError(f"unknown name '{name}'", span)

    try:
        w = eval_expr(expr, leaf, _ModWrap(alg, degs, alg.one()),
                      lambda q: _ModWrap(alg, degs, alg.scalar(base.const(q))))
    except ParseError as e:
        if e.span is _NOSPAN:
            raise ParseError(str(e).split(": ", 1)[-1], expr.span) from None
        raise
    return w._as_mod(expr.span)
