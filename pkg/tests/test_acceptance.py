"""Acceptance criteria 1 to 10.

Every check is an exact identity over Q, so the tolerance is zero throughout.
Each criterion prints one PASS/FAIL line with its wall time and budget; the
lines are also repeated in the pytest terminal summary.  Run this file
directly to see only those lines.
"""

import functools
import itertools
import random
import time
from fractions import Fraction
from math import comb

import pytest
import sympy

from dgvc.chow import AmbientVariety, compositions, partitions, q_coefficients
from dgvc.cli.main import main
from dgvc.cli.parser import parse
from dgvc.dgkernel import (DgBundlePresentation, boundedness_bound, cohomology_table, decomposability_gr_check,
                           delta_map, derived_intersection, free_presentation, gr_J, koszul_presentation, pi0)
from dgvc.dgkernel.algebra import Generator
from dgvc.dgkernel.global_model import ambient_ring, derived_zero_locus
from dgvc.dgkernel.parse import module_element_from_expr
from dgvc.equivariant import (FRep, Laurent, TorusAction, equivariant_chi, lambda_inverse, localize_virtual,
                              specialize_nonequivariant)
from dgvc.errors import ZeroWeightError
from dgvc.polyalg import PolyRing
from dgvc.syntax import ParseError, parse_expression
from dgvc.virtual import (chern_numbers, class_map_check, hattori_stong_certificate, homological_virtual_class,
                          k_virtual_class, kclass_product_check, virtual_chi, virtual_dimension)

from battery import random_two_step
from fuzz import SCENARIOS, corpus, mutate

RESULTS: list[str] = []

P1 = AmbientVariety.projective(1)
P2 = AmbientVariety.projective(2)
S1 = ambient_ring(P1)
S2 = ambient_ring(P2)
x0, x1 = S1.gens()
y0, y1, y2 = S2.gens()
R1 = PolyRing(("x",))
x = R1.gen(0)
R2 = PolyRing(("x", "y"))
X, Y = R2.gens()
R3 = PolyRing(("x", "y", "z"))


def criterion(number, title, budget=None):
    """Time the wrapped check, print its verdict line, and enforce the budget."""
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            failure = None
            try:
                fn(*args, **kwargs)
            except Exception as exc:       # recorded, then re-raised below
                failure = exc
            elapsed = time.perf_counter() - start
            late = budget is not None and elapsed > budget
            verdict = "FAIL" if failure or late else "PASS"
            limit = f"budget {budget} s" if budget is not None else "no budget"
            note = " (over budget)" if late and not failure else ""
            line = f"criterion {number:>2} {verdict}  {title}  [tolerance 0, {elapsed:.2f} s, {limit}]{note}"
            RESULTS.append(line)
            print(line)
            if failure:
                raise failure
            assert not late, line
        return run
    return wrap


def dims(P, low, high=0):
    return {g.degree: g.dimension for g in cohomology_table(P, low, high)}


def bundle(P, gens, diff):
    gs = [Generator(n, d) for n, d in gens]
    images = {n: module_element_from_expr(P.alg, gs, parse_expression(e)) for n, e in diff.items()}
    return DgBundlePresentation(P, gs, images)


# ---------------------------------------------------------------- 1

def _vdim_zero_sections():
    for d in range(1, 7):
        yield d, x1**d, [d]
        distinct = S1.one()
        for i in range(d):
            distinct = distinct * (x1 - i * x0)
        yield d, distinct, [1] * d
        for a in range(d + 1):
            yield d, x1**a * (x1 - x0) ** (d - a), sorted(m for m in (a, d - a) if m)


@criterion(1, "vdim 0: K-side alternating length equals Euler-class degree per point and in total", 5)
def test_criterion_1_vdim_zero_class_map():
    count = 0
    for d, s, expected in _vdim_zero_sections():
        v = class_map_check(derived_zero_locus(P1, [d], [s]))
        assert v.ok, (d, str(s))
        assert v.details["k_side"] == v.details["chow_side"] == str(d)
        rows = v.details["per_point"]
        assert all(r["k_side"] == r["chow_side"] for r in rows)
        assert sorted(r["k_side"] for r in rows) == expected
        count += 1
    assert count == 6 * 2 + sum(d + 1 for d in range(1, 7))


# ---------------------------------------------------------------- 2

@criterion(2, "excess intersection: zero sections of O(2) on P1 and O(a)+O(b) on P2", 5)
def test_criterion_2_excess_intersection():
    v = class_map_check(derived_zero_locus(P1, [2], [S1.zero()]))
    assert v.ok and v.details["k_side"] == v.details["chow_side"] == "2"
    for a, b in itertools.product((1, 2, 3), repeat=2):
        Z = derived_zero_locus(P2, [a, b], [S2.zero(), S2.zero()])
        v = class_map_check(Z)
        assert v.ok and v.details["k_side"] == v.details["chow_side"] == str(a * b), (a, b)
        assert homological_virtual_class(Z).degree == a * b


# ---------------------------------------------------------------- 3

@criterion(3, "virtual Riemann-Roch on plane curves, d = 1..6, m = -3..3 (84 instances)", 10)
def test_criterion_3_virtual_riemann_roch():
    n = 0
    for d in range(1, 7):
        C = derived_zero_locus(P2, [d], [y0**d + y1**d + y2**d])
        for m in range(-3, 4):
            r = virtual_chi(C, P2.line(m))
            # Koszul additivity with the polynomial extension of the binomials
            koszul = Fraction((m + 2) * (m + 1), 2) - Fraction((m - d + 2) * (m - d + 1), 2)
            closed = m * d + 1 - Fraction((d - 1) * (d - 2), 2)
            assert r.lhs == r.rhs == koszul == closed, (d, m)
            n += 2          # LHS against RHS, RHS against the closed form
    assert n == 84
    assert comb(5, 2) - comb(2, 2) == 9   # d = 3, m = 3 in the binomial form


# ---------------------------------------------------------------- 4

@criterion(4, "virtual Chern numbers and the Hattori-Stong certificate up to |alpha| = 5", 60)
def test_criterion_4_chern_numbers_and_cobordism():
    for d in range(1, 7):
        C = derived_zero_locus(P2, [d], [y0**d + y1**d + y2**d])
        g = Fraction((d - 1) * (d - 2), 2)
        assert chern_numbers(C).values == {(1,): d * (3 - d)} and d * (3 - d) == 2 - 2 * g
        cert = hattori_stong_certificate(C, 5)
        assert len(cert.rows) == sum(len(partitions(k)) for k in range(6))
        assert all(r["integral"] and r["agrees"] and r["value"] == r["chi"] for r in cert.rows), d
        assert cert.ok
    flat = derived_zero_locus(P2, [], [])
    assert chern_numbers(flat).values == {(1, 1): 9, (2,): 3}
    cert = hattori_stong_certificate(flat, 5)
    assert cert.ok and all(r["agrees"] for r in cert.rows)
    assert {r["alpha"]: r["value"] for r in cert.rows}[()] == 1


# ---------------------------------------------------------------- 5

def _q_oracle(alpha, d):
    """Degree-d part of ch(Sigma^alpha V) Td(V) in the c_i, via sympy series."""
    xs = sympy.symbols(f"x1:{d + 1}")
    t = sympy.Symbol("t")

    def trunc(expr):
        # keep total degree <= d by scaling every root by t
        e = sympy.expand(expr.subs({v: t * v for v in xs}, simultaneous=True))
        return sum(e.coeff(t, k) for k in range(d + 1))

    exps = [sympy.series(sympy.exp(v * t), t, 0, d + 1).removeO().subs(t, 1) for v in xs]
    tds = [sympy.series(v * t / (1 - sympy.exp(-v * t)), t, 0, d + 1).removeO().subs(t, 1) for v in xs]
    # Schur polynomial as a sum over semistandard tableaux with entries 1..d
    shape = list(alpha)
    cells = [(r, c) for r, row in enumerate(shape) for c in range(row)]
    schur = sympy.Integer(0)
    for fill in itertools.product(range(d), repeat=len(cells)):
        tab = dict(zip(cells, fill))
        if all(tab[(r, c)] <= tab[(r, c + 1)] for r, c in cells if (r, c + 1) in tab) and \
                all(tab[(r, c)] < tab[(r + 1, c)] for r, c in cells if (r + 1, c) in tab):
            term = sympy.Integer(1)
            for v in fill:
                term *= exps[v]
            schur += trunc(term)
    if not cells:
        schur = sympy.Integer(1)
    prod = trunc(schur)
    for td in tds:
        prod = trunc(prod * td)
    poly = sympy.Poly(prod, *xs)
    top = sum((c * sympy.prod(v**e for v, e in zip(xs, m)) for m, c in poly.terms() if sum(m) == d),
              sympy.Integer(0))
    sym, rem, defs = sympy.polys.polyfuncs.symmetrize(sympy.expand(top), *xs, formal=True)
    assert rem == 0
    subs = {s: sympy.Symbol(f"c{i + 1}") for i, (s, _) in enumerate(defs)}
    cpoly = sympy.Poly(sympy.expand(sym.subs(subs)), *[sympy.Symbol(f"c{i}") for i in range(1, d + 1)])
    table = {}
    for m, c in cpoly.terms():
        key = tuple(sorted((i + 1 for i, e in enumerate(m) for _ in range(e)), reverse=True))
        table[key] = Fraction(int(c.p), int(c.q))
    return table


Q_CASES = [((), 1), ((), 2), ((1,), 1), ((1,), 2), ((2,), 2)]


@pytest.fixture(scope="module")
def q_oracle():
    # built outside the timed region: the budget is for the engine
    return {case: _q_oracle(*case) for case in Q_CASES}


@criterion(5, "q coefficients agree with an independent series-multiplication oracle", 1)
def test_criterion_5_q_coefficients(q_oracle):
    assert q_coefficients((), 1) == {(1,): Fraction(1, 2)}
    assert q_coefficients((), 2) == {(1, 1): Fraction(1, 12), (2,): Fraction(1, 12)}
    assert q_coefficients((1,), 1) == {(1,): Fraction(3, 2)}
    for alpha, d in Q_CASES:
        oracle = q_oracle[(alpha, d)]
        table = q_coefficients(alpha, d)
        assert set(table) == set(compositions(d))
        assert {k: v for k, v in table.items() if v} == {k: v for k, v in oracle.items() if v}, (alpha, d)


# ---------------------------------------------------------------- 6

@criterion(6, "affine kernel batteries: fat points, equal relations, random [0,1], transverse", 30)
def test_criterion_6_affine_batteries():
    # (a) fat points; a reduced point has no obstruction so its bound is 0
    for d in range(1, 7):
        P = koszul_presentation(R1, [x**d])
        assert pi0(P).length == d
        b = boundedness_bound(P, truncate=20)
        assert b.ok and b.mu_bound == (1 if d > 1 else 0)
        assert all(v == 0 for i, v in dims(P, -4).items() if i < 0)
    # (b) two equal relations
    E = free_presentation(R1, [("e1", -1), ("e2", -1)], {"e1": "x", "e2": "x"})
    assert dims(E, -2) == {0: 1, -1: 1, -2: 0}
    assert k_virtual_class(E).total == 0
    assert virtual_dimension(E) == -1
    assert class_map_check(E).ok
    # (c) seeded random two-step presentations
    for seed in range(10):
        P = random_two_step(seed)
        b = boundedness_bound(P, truncate=20)
        assert b.ok, seed
        assert [i for i, _ in b.checked] == list(range(-b.mu_bound - 1, -21, -1))
        assert all(dim == 0 for _, dim in b.checked)
    # (d) transverse derived intersections
    a, b_, c = R3.gens()
    for ring, f, g in [(R2, [X], [Y]), (R3, [a], [b_]), (R3, [a, b_], [c]), (R3, [a], [b_, c])]:
        P = derived_intersection(ring, f, g)
        n = ring.nvars
        assert all(v == 0 for i, v in dims(P, -3).items() if i < 0)
        assert virtual_dimension(P) == (n - len(f)) + (n - len(g)) - n


# ---------------------------------------------------------------- 7

def _normal_cone_battery():
    a, b, c = R3.gens()
    yield koszul_presentation(R1, [x**3])
    yield koszul_presentation(R1, [x**2 * (x - 1) ** 3])
    yield koszul_presentation(R2, [X, Y**2])
    yield koszul_presentation(R2, [X**2, Y**2])
    yield koszul_presentation(R3, [a, b**2, c])
    yield free_presentation(R1, [("e1", -1), ("e2", -1)], {"e1": "x^2", "e2": "x^3"})
    yield free_presentation(R2, [("e1", -1), ("e2", -1), ("e3", -1), ("u", -2)],
                            {"e1": "x", "e2": "y", "e3": "x*y + y^2", "u": "e3 - y*e1 - y*e2"})


@criterion(7, "normal-cone property suite: decomposability, delta maps, J-adic identifications", 30)
def test_criterion_7_normal_cone_suite():
    for P in _normal_cone_battery():
        g = gr_J(P, truncate=20)
        assert g.h_iso and g.pieces == g.tensor_pieces
        assert g.dg_vanishing and g.algebra_ok
        assert all(lhs == rhs for lhs, rhs in g.algebra_dims.values())
        assert decomposability_gr_check(P, nmax=3).ok
        for n in (1, 2, 3):
            d = delta_map(P, n)
            assert d.surjective and d.kernel_ok
    fat = koszul_presentation(R1, [x**2])
    assert decomposability_gr_check(fat, bundle(fat, [("m0", 0), ("m1", -1)], {"m1": "x*m0"}), nmax=3).ok
    for seed in range(3):
        P = random_two_step(seed)
        assert decomposability_gr_check(P, nmax=3).ok
        for n in (1, 2):
            d = delta_map(P, n)
            assert d.surjective and d.kernel_ok


# ---------------------------------------------------------------- 8

@criterion(8, "K-class products per point and chi pairings with twists |m| <= 3", 10)
def test_criterion_8_products():
    for f in (x**2, x**3, x**2 * (x - 1)):
        K = koszul_presentation(R1, [f])
        for gens, diff in [([("m", 0)], {}), ([("m0", 0), ("m1", -1)], {}),
                           ([("m0", 0), ("m1", -1)], {"m1": "x*m0"})]:
            v = kclass_product_check(K, bundle(K, gens, diff))
            assert v.ok
            assert all(r["lhs"] == r["rhs"] for r in v.details["per_point"])
    K2 = koszul_presentation(R2, [X, Y**2])
    assert kclass_product_check(K2).ok
    models = [derived_zero_locus(P1, [2], [S1.zero()]), derived_zero_locus(P1, [2], [x0 * x1]),
              derived_zero_locus(P2, [3], [y0**3 + y1**3 + y2**3]),
              derived_zero_locus(P2, [1, 1], [S2.zero(), S2.zero()])]
    for Z in models:
        A = Z.ambient
        for F in (A.line(0), A.line(2), A.line(0) - A.line(-1)):
            v = kclass_product_check(Z, F)
            assert v.ok and len(v.details["pairings"]) == 7


# ---------------------------------------------------------------- 9

@criterion(9, "torus localization: fixed-point sums, both sides in Q(mu), weight-zero error", 10)
def test_criterion_9_localization():
    for n in (1, 2, 3):
        T = TorusAction.make(list(range(n + 1)))
        Pn = AmbientVariety.projective(n)
        for k in range(-n - 3, 7):
            r = equivariant_chi(T, Pn, [k])
            # monomial oracle: the characters of the degree-k monomials
            oracle = Laurent(1)
            if k >= 0:
                for e in itertools.product(range(k + 1), repeat=n + 1):
                    if sum(e) == k:
                        oracle = oracle + Laurent.char((sum(i * a for i, a in enumerate(e)),))
            assert r.ok and r.value.at_one() == Pn.chi_line((k,)), (n, k)
            if k > -n - 1:
                assert r.value == oracle, (n, k)
    T = TorusAction.make([0, 1])
    zero = localize_virtual(T, derived_zero_locus(P1, [2], [S1.zero()]), lin=[0])
    inv = localize_virtual(T, derived_zero_locus(P1, [2], [x0 * x1]))
    for rep in (zero, inv):
        assert rep.ok and FRep.from_laurent(rep.lhs) == rep.rhs
        assert rep.specialized == 2 == specialize_nonequivariant(rep.lhs)
    T3 = TorusAction.make([0, 1, 3])
    for a, b in itertools.product((1, 2, 3), repeat=2):
        rep = localize_virtual(T3, derived_zero_locus(P2, [a, b], [S2.zero(), S2.zero()]), lin=[1, 2])
        assert rep.ok and rep.specialized == a * b
    with pytest.raises(ZeroWeightError):
        lambda_inverse([(0,)], 1)


# ---------------------------------------------------------------- 10

@criterion(10, "CLI: golden files, 10^4 parser mutations without a crash, exit codes")
def test_criterion_10_cli(tmp_path, capsys):
    assert main(["check", str(SCENARIOS)]) == 0
    rng = random.Random(20240611)
    texts = corpus()
    rejected = 0
    for _ in range(10_000):
        try:
            parse(mutate(rng.choice(texts), rng))
        except ParseError:
            rejected += 1
    assert 0 < rejected < 10_000
    bad = tmp_path / "bad.dgvc"
    bad.write_text("bundle E = O(2;", encoding="utf-8")
    assert main(["run", str(SCENARIOS / "zero_section_p1.dgvc")]) == 0
    assert main(["run", str(SCENARIOS / "not_zero_one.dgvc")]) == 1
    assert main(["run", str(bad)]) == 2
    assert main(["run", str(tmp_path / "absent.dgvc")]) == 2
    capsys.readouterr()


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
