import itertools
from fractions import Fraction
from math import comb

import pytest

from dgvc.chow import AmbientVariety, KClass, integrate
from dgvc.dgkernel import DgBundlePresentation, derived_intersection, free_presentation, koszul_presentation
from dgvc.dgkernel.algebra import Generator
from dgvc.dgkernel.global_model import ambient_ring, derived_zero_locus
from dgvc.dgkernel.parse import module_element_from_expr
from dgvc.errors import NotZeroOneError
from dgvc.polyalg import PolyRing
from dgvc.syntax import parse_expression
from dgvc.virtual import (chern_numbers, class_map_check, hattori_stong_certificate, homological_virtual_class,
                          interpolate, k_virtual_class, kclass_product_check, pairing_polynomial, virtual_chi,
                          virtual_dimension)

P1 = AmbientVariety.projective(1)
P2 = AmbientVariety.projective(2)
S1 = ambient_ring(P1)
S2 = ambient_ring(P2)
x0, x1 = S1.gens()
y0, y1, y2 = S2.gens()
R1 = PolyRing(("x",))
x = R1.gen(0)


def plane_curve(d, section=None):
    return derived_zero_locus(P2, [d], [section if section is not None else y0**d + y1**d + y2**d])


def bundle(P, gens, diff):
    gs = [Generator(n, d) for n, d in gens]
    images = {n: module_element_from_expr(P.alg, gs, parse_expression(e)) for n, e in diff.items()}
    return DgBundlePresentation(P, gs, images)


EQUAL = free_presentation(R1, [("e1", -1), ("e2", -1)], {"e1": "x", "e2": "x"})


# -- virtual dimension

def test_vdim_examples():
    for d in range(1, 5):
        assert virtual_dimension(derived_zero_locus(P1, [d], [x1**d])) == 0
        assert virtual_dimension(plane_curve(d)) == 1
    assert virtual_dimension(EQUAL) == -1


def test_vdim_refuses_non_zero_one():
    bad = free_presentation(R1, [("e", -1), ("f", -2)], {"e": "x", "f": "0"})
    with pytest.raises(NotZeroOneError):
        virtual_dimension(bad)


# -- K side

@pytest.mark.parametrize("d", range(1, 6))
def test_fat_point_alternating_length(d):
    k = k_virtual_class(koszul_presentation(R1, [x**d]))
    assert k.kind == "points"
    assert [v for _, _, v in k.per_point] == [d]
    assert k.total == d


def test_zero_section_k_class():
    k = k_virtual_class(derived_zero_locus(P1, [2], [S1.zero()]))
    assert k.kclass == P1.line(0) - P1.line(-2)


def test_equal_relations_k_class_vanishes():
    k = k_virtual_class(EQUAL)
    assert k.per_point == [("(0)", (0,), 0)]
    assert k.total == 0


# -- Chow side

@pytest.mark.parametrize("d", range(1, 6))
def test_euler_class_degree_on_p1(d):
    c = homological_virtual_class(derived_zero_locus(P1, [d], [x1**d]))
    assert c.ambient_class == d * P1.hyperplane()
    assert c.degree == d


def test_zero_section_two_summands_on_p2():
    for a, b in itertools.product(range(1, 4), repeat=2):
        c = homological_virtual_class(derived_zero_locus(P2, [a, b], [S2.zero(), S2.zero()]))
        assert c.ambient_class == a * b * P2.hyperplane() ** 2


def test_negative_vdim_class_is_zero():
    assert homological_virtual_class(EQUAL).degree == 0
    N = derived_zero_locus(P1, [1, 1], [S1.zero(), S1.zero()])
    assert homological_virtual_class(N).ambient_class.is_zero()


# -- class map

def test_class_map_examples():
    for d in range(1, 5):
        v = class_map_check(derived_zero_locus(P1, [d], [x1**d]))
        assert v.ok and v.details["k_side"] == str(d)
    v = class_map_check(derived_zero_locus(P1, [2], [S1.zero()]))
    assert v.ok and v.details["chow_side"] == "2"
    v = class_map_check(EQUAL)
    assert v.ok and v.details["k_side"] == "0"


def test_class_map_non_reduced_per_point():
    s = x1**2 * (x1 - x0) ** 3
    v = class_map_check(derived_zero_locus(P1, [5], [s]))
    assert v.ok
    assert sorted(p["k_side"] for p in v.details["per_point"]) == [2, 3]


def test_class_map_positive_vdim():
    assert class_map_check(plane_curve(3)).ok
    assert class_map_check(derived_zero_locus(P2, [1], [y0])).ok


def test_interpolation_recovers_polynomial():
    xs = list(range(-3, 4))
    ys = [Fraction(3 * m * m - m + 2) for m in xs]
    assert interpolate(xs, ys)[:3] == [2, -1, 3]


def test_pairing_of_a_line_in_p2():
    # chi(O_L(m)) = m + 1
    coeffs = pairing_polynomial(derived_zero_locus(P2, [1], [y0]))
    assert coeffs[:2] == [1, 1] and not any(coeffs[2:])


# -- virtual Riemann-Roch

@pytest.mark.parametrize("d", range(1, 7))
def test_plane_curve_chi(d):
    X = plane_curve(d)
    for m in range(-3, 4):
        r = virtual_chi(X, P2.line(m))
        closed = m * d + 1 - Fraction((d - 1) * (d - 2), 2)
        koszul = comb(m + 2, 2) if m >= 0 else Fraction((m + 2) * (m + 1), 2)
        koszul -= Fraction((m - d + 2) * (m - d + 1), 2)
        assert r.lhs == r.rhs == closed == koszul
        assert r.ok


def test_zero_section_chi():
    r = virtual_chi(derived_zero_locus(P1, [2], [S1.zero()]))
    assert r.lhs == r.rhs == 2


def test_transverse_point_chi():
    r = virtual_chi(derived_intersection(PolyRing(("x", "y")), [PolyRing(("x", "y")).gen(0)],
                                         [PolyRing(("x", "y")).gen(1)]))
    assert r.lhs == r.rhs == 1


def test_deformation_invariance_surrogate():
    sections = [S2.zero(), y0**3 + y1**3 + y2**3, y0**3, y0 * y1 * y2]
    classes, chis = set(), set()
    for s in sections:
        X = plane_curve(3, s)
        classes.add(str(homological_virtual_class(X).ambient_class))
        chis.add(tuple(virtual_chi(X, P2.line(m)).lhs for m in range(-3, 4)))
    assert len(classes) == 1 and len(chis) == 1


def test_negative_vdim_pairings_vanish():
    N = derived_zero_locus(P1, [1, 1], [x0, x1])
    assert not any(pairing_polynomial(N))
    assert virtual_chi(N).lhs == 0


# -- products

def test_product_with_structure_sheaf():
    K = koszul_presentation(R1, [x**2])
    v = kclass_product_check(K, bundle(K, [("m", 0)], {}))
    assert v.ok and v.details["per_point"][0]["lhs"] == 2


def test_product_with_zero_alternating_rank():
    K = koszul_presentation(R1, [x**2])
    for diff in ({}, {"m1": "x*m0"}):
        v = kclass_product_check(K, bundle(K, [("m0", 0), ("m1", -1)], diff))
        assert v.ok and v.details["alternating_rank"] == 0
        assert v.details["per_point"][0]["lhs"] == 0


def test_product_pairing_on_zero_section():
    X = derived_zero_locus(P1, [2], [S1.zero()])
    for F in (P1.line(0), P1.line(0) - P1.line(-1), P1.line(3)):
        v = kclass_product_check(X, F)
        assert v.ok
        assert len(v.details["pairings"]) == 7


# -- Chern numbers

def test_chern_numbers_plane_cubic():
    assert chern_numbers(plane_curve(3)).values == {(1,): 0}


@pytest.mark.parametrize("d", range(1, 7))
def test_chern_numbers_plane_curves(d):
    g = Fraction((d - 1) * (d - 2), 2)
    t = chern_numbers(plane_curve(d))
    assert t.values == {(1,): d * (3 - d)} and d * (3 - d) == 2 - 2 * g
    assert t.integral


def test_chern_numbers_of_p2():
    t = chern_numbers(derived_zero_locus(P2, [], []))
    assert t.values == {(1, 1): 9, (2,): 3}


def test_chern_numbers_negative_vdim_empty():
    t = chern_numbers(derived_zero_locus(P1, [1, 1], [x0, x1]))
    assert t.values == {}


def test_chern_numbers_of_product_curve():
    Q = AmbientVariety.product((1, 1))
    a0, a1, b0, b1 = ambient_ring(Q).gens()
    t = chern_numbers(derived_zero_locus(Q, [(1, 1)], [a0 * b0 + a1 * b1]))
    assert t.values == {(1,): 2}


# -- cobordism certificate

def test_todd_genus_of_p2():
    cert = hattori_stong_certificate(derived_zero_locus(P2, [], []), 2)
    row = {r["alpha"]: r for r in cert.rows}
    assert row[()]["value"] == 1 == row[()]["chi"]
    assert cert.ok


@pytest.mark.parametrize("d", range(1, 5))
def test_todd_genus_of_plane_curves(d):
    cert = hattori_stong_certificate(plane_curve(d), 1)
    row = {r["alpha"]: r for r in cert.rows}
    g = Fraction((d - 1) * (d - 2), 2)
    assert row[()]["value"] == 1 - g
    assert row[(1,)]["value"] == Fraction(3, 2) * d * (3 - d)
    assert all(r["integral"] and r["agrees"] for r in cert.rows)


def test_certificate_reports_bound():
    cert = hattori_stong_certificate(plane_curve(2), 3)
    assert cert.bound == 3
    assert {r["alpha"] for r in cert.rows} == {(), (1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1)}
