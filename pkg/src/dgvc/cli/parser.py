"""Recursive-descent parser for scenario files."""

from __future__ import annotations

from ..syntax import ParseError, Span, Token, TokenStream, describe, parse_expr, tokenize
from .ast import (OPTIONS, VERBS, ActionDecl, AmbientDecl, BundleDecl, ChartDecl, Compute, DgAlgebraDecl,
                  DgBundleDecl, GenDecl, Image, IntersectionDecl, LineTerm, Option, Ref, Scenario,
                  SectionDecl, WeightList, ZeroLocusDecl)

KEYWORDS = ("ambient", "chart", "bundle", "section", "dgmanifold", "dgalgebra", "dgbundle", "action", "compute")


def _join(a: Span, b: Span) -> Span:
    return Span(a.line, a.col, b.end_line, b.end_col)


class _Parser:
    def __init__(self, src: str):
        self.ts = TokenStream(tokenize(src))

    # -- helpers
    def fail(self, expected) -> ParseError:
        t = self.ts.peek()
        return ParseError(f"unexpected {describe(t)}", t.span, expected)

    def expect(self, text: str) -> Token:
        return self.ts.expect(text)

    def name(self, label: str = "name") -> Token:
        return self.ts.expect_kind("NAME", label)

    def integer(self) -> int:
        neg = self.ts.accept("-") is not None
        t = self.ts.peek()
        if t.kind != "INT":
            raise self.fail(["integer"])
        self.ts.next()
        return -int(t.text) if neg else int(t.text)

    def end(self, start: Token) -> Span:
        t = self.expect(";")
        return _join(start.span, t.span)

    def sep_list(self, close: str, item):
        out = []
        if self.ts.accept(close):
            return out
        while True:
            out.append(item())
            if self.ts.accept(close):
                return out
            if not self.ts.accept(","):
                raise self.fail([repr(","), repr(close)])

    # -- grammar
    def scenario(self) -> Scenario:
        stmts = []
        while self.ts.peek().kind != "EOF":
            t = self.ts.peek()
            if t.kind != "NAME" or t.text not in KEYWORDS:
                raise self.fail([repr(k) for k in KEYWORDS])
            stmts.append(getattr(self, "stmt_" + t.text)())
        return Scenario(tuple(stmts))

    def stmt_ambient(self):
        start = self.ts.next()
        dims = [self.proj()]
        while True:
            t = self.ts.peek()
            if t.kind == "NAME" and t.text == "xP":
                self.ts.next()
                dims.append(self.proj(after_p=True))
            elif t.kind == "NAME" and t.text == "x" and self.ts.peek(1).text == "P":
                self.ts.next()
                dims.append(self.proj())
            else:
                break
        self.expect("[")
        coords = self.sep_list("]", lambda: self.name("coordinate").text)
        return AmbientDecl(tuple(dims), tuple(coords), self.end(start))

    def proj(self, after_p: bool = False) -> int:
        if not after_p:
            self.expect("P")
        self.expect("(")
        n = self.integer()
        self.expect(")")
        return n

    def stmt_chart(self):
        start = self.ts.next()
        self.expect("A")
        self.expect("(")
        n = self.integer()
        self.expect(")")
        self.expect("vars")
        self.expect("[")
        names = self.sep_list("]", lambda: self.name("variable").text)
        return ChartDecl(n, tuple(names), self.end(start))

    def line_term(self) -> LineTerm:
        t0 = self.ts.peek()
        mult = 1
        if t0.kind == "INT":
            mult = self.integer()
            self.expect("*")
        t = self.ts.peek()
        if not (t.kind == "NAME" and t.text == "O"):
            raise self.fail([repr("O")])
        self.ts.next()
        degree = ()
        end = t.span
        if self.ts.accept("("):
            vals = [self.integer()]
            while not self.ts.at(")"):
                if not self.ts.accept(","):
                    raise self.fail([repr(","), repr(")")])
                vals.append(self.integer())
            end = self.expect(")").span
            degree = tuple(vals)
        return LineTerm(mult, degree, _join(t0.span, end))

    def stmt_bundle(self):
        start = self.ts.next()
        name = self.name("bundle name").text
        self.expect("=")
        terms = [self.line_term()]
        while self.ts.accept("+"):
            terms.append(self.line_term())
        return BundleDecl(name, tuple(terms), self.end(start))

    def ref(self, label: str) -> Ref:
        t = self.name(label)
        return Ref(t.text, t.span)

    def stmt_section(self):
        start = self.ts.next()
        name = self.name("section name").text
        self.expect("of")
        bundle = self.ref("bundle name")
        self.expect("=")
        self.expect("(")
        comps = self.sep_list(")", lambda: parse_expr(self.ts))
        return SectionDecl(name, bundle, tuple(comps), self.end(start))

    def stmt_dgmanifold(self):
        start = self.ts.next()
        name = self.name("manifold name").text
        self.expect("=")
        t = self.ts.peek()
        if t.kind == "NAME" and t.text == "derived_zero_locus":
            self.ts.next()
            self.expect("(")
            b = self.ref("bundle name")
            self.expect(",")
            s = self.ref("section name")
            self.expect(")")
            return ZeroLocusDecl(name, b, s, self.end(start))
        if t.kind == "NAME" and t.text == "derived_intersection":
            self.ts.next()
            self.expect("(")
            self.expect("[")
            f = self.sep_list("]", lambda: parse_expr(self.ts))
            self.expect(",")
            self.expect("[")
            g = self.sep_list("]", lambda: parse_expr(self.ts))
            self.expect(")")
            return IntersectionDecl(name, tuple(f), tuple(g), self.end(start))
        raise self.fail(["'derived_zero_locus'", "'derived_intersection'"])

    def free_block(self):
        self.expect("free")
        self.expect("{")

        def gen():
            t = self.name("generator name")
            self.expect(":")
            self.expect("deg")
            d = self.integer()
            return GenDecl(t.text, d, t.span)

        gens = self.sep_list("}", gen)
        self.expect("diff")
        self.expect("{")

        def image():
            t = self.name("generator name")
            self.expect("->")
            e = parse_expr(self.ts)
            return Image(t.text, e, _join(t.span, e.span))

        images = self.sep_list("}", image)
        return tuple(gens), tuple(images)

    def stmt_dgalgebra(self):
        start = self.ts.next()
        name = self.name("algebra name").text
        self.expect("=")
        gens, images = self.free_block()
        return DgAlgebraDecl(name, gens, images, self.end(start))

    def stmt_dgbundle(self):
        start = self.ts.next()
        name = self.name("bundle name").text
        self.expect("over")
        over = self.ref("algebra name")
        self.expect("=")
        gens, images = self.free_block()
        return DgBundleDecl(name, over, gens, images, self.end(start))

    def weight_list(self) -> WeightList:
        t0 = self.expect("[")
        vals = []
        vector = None
        if not self.ts.at("]"):
            while True:
                if self.ts.at("["):
                    self.ts.next()
                    vals.append(tuple(self.sep_list("]", self.integer)))
                    kind = True
                else:
                    vals.append((self.integer(),))
                    kind = False
                if vector is not None and kind != vector:
                    raise ParseError("mixed scalar and vector weights", self.ts.peek().span)
                vector = kind
                if self.ts.at("]"):
                    break
                if not self.ts.accept(","):
                    raise self.fail([repr(","), repr("]")])
        t1 = self.expect("]")
        return WeightList(tuple(vals), bool(vector), _join(t0.span, t1.span))

    def stmt_action(self):
        start = self.ts.next()
        name = self.name("action name").text
        self.expect("weights")
        coords = self.weight_list()
        self.expect("on")
        self.expect("coords")
        bundles = []
        while self.ts.accept(","):
            b = self.ref("bundle name")
            self.expect("weights")
            bundles.append((b, self.weight_list()))
        return ActionDecl(name, coords, tuple(bundles), self.end(start))

    def stmt_compute(self):
        start = self.ts.next()
        t = self.name("verb")
        verb = t.text
        span = t.span
        while self.ts.at("-") and self.ts.peek(1).kind == "NAME":
            self.ts.next()
            part = self.ts.next()
            verb += "-" + part.text
            span = _join(span, part.span)
        if verb not in VERBS:
            raise ParseError(f"unknown verb '{verb}'", span, [repr(v) for v in VERBS])
        target = self.ref("object name")
        opts = []
        while not self.ts.at(";"):
            opts.append(self.option())
        return Compute(verb, target, tuple(opts), self.end(start))

    def option(self) -> Option:
        t = self.ts.peek()
        if t.kind != "NAME" or t.text not in OPTIONS:
            raise self.fail([repr(o) for o in OPTIONS] + ["';'"])
        self.ts.next()
        key = t.text
        if key == "twist":
            val = self.line_term()
        elif key == "range":
            self.expect("[")
            a = self.integer()
            self.expect(",")
            b = self.integer()
            self.expect("]")
            val = (a, b)
        elif key in ("truncate", "alpha_bound", "order"):
            val = self.integer()
        elif key in ("with", "bundle"):
            val = self.ref("name")
        else:  # at
            self.expect("[")
            val = tuple(self.sep_list("]", lambda: parse_expr(self.ts)))
        return Option(key, val, _join(t.span, self.ts.toks[self.ts.pos - 1].span))


def parse(src: str) -> Scenario:
    """Parse scenario text; raises :class:`ParseError` with a span on failure."""
    return _Parser(src).scenario()
