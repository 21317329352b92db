from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgvc.chow import AmbientVariety
from dgvc.dgkernel import (DgBundlePresentation, boundedness_bound, cohomology, cohomology_table,
                           decomposability_gr_check, delta_map, derived_intersection, derived_zero_locus,
                           filtration_compatible, free_presentation, gr_J, is_zero_one_manifold, k_sheaf,
                           koszul_presentation, pi0, tangent_complex_at, virtual_dimension)
from dgvc.dgkernel.algebra import Generator
from dgvc.dgkernel.global_model import ambient_ring
from dgvc.dgkernel.parse import module_element_from_expr
from dgvc.errors import InvalidPresentationError, PointNotOnPi0Error
from dgvc.polyalg import PolyIdeal, PolyRing, quotient_dimension
from dgvc.syntax import parse_expression

from battery import random_two_step

R1 = PolyRing(("x",))
x = R1.gen(0)
R2 = PolyRing(("x", "y"))
X, Y = R2.gens()
R3 = PolyRing(("x", "y", "z"))


def dims(P, low, high=0):
    return {g.degree: g.dimension for g in cohomology_table(P, low, high)}


def bundle(P, gens, diff):
    gs = [Generator(n, d) for n, d in gens]
    images = {n: module_element_from_expr(P.alg, gs, parse_expression(e)) for n, e in diff.items()}
    return DgBundlePresentation(P, gs, images)


# -- builders

def test_koszul_on_affine_line():
    P = koszul_presentation(R1, [x**2])
    assert [(g.name, g.degree) for g in P.generators] == [("e1", -1)]
    assert P.validate() == []
    assert dims(P, -1) == {0: 2, -1: 0}


def test_zero_section_on_p1_has_zero_differential():
    P1 = AmbientVariety.projective(1)
    Z = derived_zero_locus(P1, [2], [ambient_ring(P1).zero()])
    assert Z.lambda_class() == P1.line(0) - P1.line(-2)
    assert Z.pi0_dimension == 1


def test_transverse_linear_sections_on_p2():
    P2 = AmbientVariety.projective(2)
    x0, x1, x2 = ambient_ring(P2).gens()
    Z = derived_zero_locus(P2, [1, 1], [x0, x1])
    pts, nonrational = Z.pi0_points()
    assert nonrational == 0
    assert [(rec.homogeneous, mult) for rec, mult in pts] == [((0, 0, 1), 1)]


def test_section_degree_mismatch():
    P2 = AmbientVariety.projective(2)
    x0, x1, x2 = ambient_ring(P2).gens()
    with pytest.raises(InvalidPresentationError):
        derived_zero_locus(P2, [2], [x0])


def test_derived_intersection_transverse():
    D = derived_intersection(R2, [X], [Y])
    assert dims(D, -2) == {0: 1, -1: 0, -2: 0}
    assert virtual_dimension(D) == 0


def test_derived_self_intersection():
    S = derived_intersection(R2, [X], [X])
    table = cohomology_table(S, -2, 0)
    h = {g.degree: g for g in table}
    assert h[-2].dimension == 0
    # H^0 and H^-1 are both Q[x,y]/(x): same Hilbert series, infinite length
    assert h[0].dimension == h[-1].dimension == "infinite"
    assert h[0].hilbert.coefficients(6) == [1] * 7
    # the class of a1 - b1 carries internal degree 1
    assert h[-1].hilbert.coefficients(6) == [0] + [1] * 6
    # (2 - 1) + (2 - 1) - 2
    assert virtual_dimension(S) == 0


def test_empty_intersection_is_trivial():
    D = derived_intersection(R1, [], [])
    assert D.generators == ()
    assert dims(D, 0) == {0: "infinite"}
    assert pi0(D).dimension == 1


# -- validation

def test_d_squared_failure_is_diagnosed():
    P = free_presentation(R1, [("e1", -1), ("e2", -2)], {"e1": "x", "e2": "e1"})
    diags = P.validate()
    assert len(diags) == 1 and diags[0].generator == "e2"
    assert "d^2(e2) = x" in diags[0].message


def test_positive_degree_is_rejected():
    P = free_presentation(R1, [("e", 1)], {})
    diags = P.validate()
    assert diags and "positive" in diags[0].message


def test_leibniz_sign_two_step():
    P = free_presentation(R2, [("e1", -1), ("e2", -1), ("e3", -1), ("u", -2)],
                          {"e1": "x", "e2": "y", "e3": "x*y + y^2", "u": "e3 - y*e1 - y*e2"})
    assert P.validate() == []


# -- cohomology

def test_two_equal_relations():
    P = free_presentation(R1, [("e1", -1), ("e2", -1)], {"e1": "x", "e2": "x"})
    assert dims(P, -2) == {0: 1, -1: 1, -2: 0}


def test_zero_differential_exterior_generator():
    P = free_presentation(R1, [("e", -1)], {})
    H = cohomology(P, -1)
    assert H.dimension == "infinite"
    assert H.hilbert.coefficients(5) == [1] * 6


def test_euler_characteristic_conservation():
    # alternating length equals the length of pi_0 for a regular sequence and 0 for redundant ones
    for P, expect in [(koszul_presentation(R2, [X**2, Y**3]), 6),
                      (free_presentation(R1, [("e1", -1), ("e2", -1)], {"e1": "x^2", "e2": "x^2"}), 0)]:
        table = cohomology_table(P, -len(P.generators), 0)
        assert sum((-1) ** (-g.degree) * g.dimension for g in table) == expect


# -- pi0

def test_pi0_examples():
    s = pi0(koszul_presentation(R1, [x**2]))
    assert s.length == 2 and s.points == [((0,), 2)]
    s = pi0(koszul_presentation(R2, [X, Y]))
    assert s.length == 1 and s.points == [((0, 0), 1)]
    s = pi0(koszul_presentation(R2, [R2.zero()]))
    assert s.ideal.is_zero_ideal() and s.dimension == 2


# -- tangent complexes

def test_tangent_of_fat_point():
    T = tangent_complex_at(koszul_presentation(R1, [x**2]), [0])
    assert T.maps == [[[0]]]
    assert T.cohomology == [1, 1]


def test_tangent_of_transverse_intersection():
    T = tangent_complex_at(derived_intersection(R2, [X], [Y]), [0, 0])
    assert T.cohomology == [0, 0]


def test_tangent_of_equal_relations():
    T = tangent_complex_at(free_presentation(R1, [("e1", -1), ("e2", -1)], {"e1": "x", "e2": "x"}), [0])
    assert T.maps == [[[1], [1]]]
    assert T.cohomology == [0, 1]


def test_tangent_off_pi0():
    with pytest.raises(PointNotOnPi0Error):
        tangent_complex_at(koszul_presentation(R1, [x**2]), [1])


# -- the [0,1] condition

def test_zero_one_verdicts():
    P1 = AmbientVariety.projective(1)
    x0, x1 = ambient_ring(P1).gens()
    for chart in derived_zero_locus(P1, [2], [x0 * x1]).charts():
        assert is_zero_one_manifold(derived_zero_locus(P1, [2], [x0 * x1]).chart(chart)).verdict
    bad = free_presentation(R1, [("e", -1), ("f", -2)], {"e": "x", "f": "0"})
    v = is_zero_one_manifold(bad)
    assert v.verdict is False and "H^2" in v.witness
    empty = free_presentation(R1, [("e", -1), ("f", -2)], {"e": "1", "f": "0"})
    assert is_zero_one_manifold(empty).verdict is True


def test_nonrational_support_is_undetermined():
    P = free_presentation(R1, [("e", -1), ("f", -2)], {"e": "x^2 + 1", "f": "0"})
    v = is_zero_one_manifold(P)
    assert v.verdict is None and v.undetermined_length == 2


# -- boundedness and K

def test_boundedness_examples():
    b = boundedness_bound(koszul_presentation(R1, [x**2]))
    assert b.mu_bound == 1 and b.ok
    b = boundedness_bound(free_presentation(R1, [("e1", -1), ("e2", -1)], {"e1": "x", "e2": "x"}))
    assert b.mu_bound == 1 and b.ok and dict(b.checked)[-2] == 0
    b = boundedness_bound(derived_intersection(R2, [X], [Y]))
    assert b.mu_bound == 0 and b.ok


def test_k_sheaf_examples():
    assert k_sheaf(koszul_presentation(R2, [X, Y, X * Y])).rank == 3
    assert k_sheaf(derived_intersection(R2, [X], [Y])).rank == 2


def test_k_sheaf_two_step():
    P = free_presentation(R2, [("e1", -1), ("e2", -1), ("e3", -1), ("u", -2)],
                          {"e1": "x", "e2": "y", "e3": "x*y + y^2", "u": "e3 - y*e1 - y*e2"})
    k = k_sheaf(P)
    assert k.constant and k.rank == 2 and k.t0_rank == 2
    assert virtual_dimension(P) == 0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3))
def test_vdim_additivity_for_intersections(a, b):
    # linear coordinate subspaces of A^3 of codimension a and b
    R = R3
    gens = R.gens()
    f, g = gens[:a], gens[3 - b:] if b else []
    D = derived_intersection(R, f, g)
    assert virtual_dimension(D) == (3 - a) + (3 - b) - 3


def test_vdim_of_zero_locus():
    assert virtual_dimension(koszul_presentation(R2, [X, Y**2])) == 0
    P1 = AmbientVariety.projective(1)
    x0, x1 = ambient_ring(P1).gens()
    Z = derived_zero_locus(P1, [1], [x1])
    assert Z.vdim == 0


# -- J-adic filtration and normal cone

def test_gr_principal_fat_ideal():
    g = gr_J(koszul_presentation(R1, [x**2]), truncate=8)
    assert g.ok and g.kind == "finite"
    assert g.pieces == [2] * 9


def test_gr_regular_sequence():
    g = gr_J(koszul_presentation(R2, [X, Y]), truncate=6)
    assert g.pieces == [n + 1 for n in range(7)]
    assert g.h_iso and g.dg_vanishing


def test_gr_zero_ideal():
    g = gr_J(koszul_presentation(R2, []), truncate=4)
    assert g.kind == "zero"
    assert all(not p.numerator_terms for p in g.pieces[1:])


def test_delta_examples():
    d = delta_map(koszul_presentation(R1, [x**2]), 1)
    assert d.surjective and d.kernel_ok
    d = delta_map(free_presentation(R1, [("e1", -1), ("e2", -1)], {"e1": "x^2", "e2": "x^3"}), 1)
    assert d.surjective and d.kernel_ok and d.target_dim == 2
    for n in (1, 2, 3):
        d = delta_map(koszul_presentation(R2, [X, Y**2]), n)
        assert d.surjective and d.kernel_ok


def test_delta_kernel_condition_with_degree_minus_two():
    P = free_presentation(R2, [("e1", -1), ("e2", -1), ("e3", -1), ("u", -2)],
                          {"e1": "x", "e2": "y", "e3": "x*y + y^2", "u": "e3 - y*e1 - y*e2"})
    for n in (1, 2):
        d = delta_map(P, n)
        assert d.surjective and d.kernel_ok


def test_decomposability_examples():
    K = koszul_presentation(R1, [x**2])
    rep = decomposability_gr_check(K)
    assert rep.ok
    row = {(r["degree"], r["n"]): (r["lhs"], r["rhs"]) for r in rep.rows}
    assert row[(0, 0)] == (2, 2)
    assert row[(-1, 1)] == (2, 2)
    E = bundle(koszul_presentation(R1, [x]), [("m", 0)], {})
    rep = decomposability_gr_check(E.manifold, E)
    assert rep.ok
    assert all(r["lhs"] == 0 for r in rep.rows if r["n"] >= 1 and r["degree"] == 0)
    assert filtration_compatible(E.manifold, E)


def test_bundle_over_fat_point():
    K = koszul_presentation(R1, [x**2])
    E = bundle(K, [("m0", 0), ("m1", -1)], {"m1": "x*m0"})
    assert E.validate() == []
    assert dims(E, -2) == {0: 1, -1: 1, -2: 0}
    assert decomposability_gr_check(K, E).ok


def test_bundle_bad_differential():
    K = koszul_presentation(R1, [x**2])
    E = bundle(K, [("m0", 0), ("m1", -1), ("m2", -2)], {"m1": "x*m0", "m2": "m1"})
    assert E.validate()


# -- random [0,1] battery

@pytest.mark.parametrize("seed", range(4))
def test_random_two_step_presentations_are_bounded(seed):
    P = random_two_step(seed)
    assert P.validate() == []
    assert is_zero_one_manifold(P).verdict is True
    b = boundedness_bound(P, truncate=12)
    assert b.ok
