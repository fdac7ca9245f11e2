"""Reflection-group machinery: closure, reflections, parabolics, normalizers."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from leafatlas import linalg as la
from leafatlas.exactnum import CycNum, as_cyc
from leafatlas.refgroup import (
    GroupError, ParameterK, catalog, close_group, group_algebra_mul, idempotent,
)


def test_close_group_negation_dim1():
    W = close_group([la.mat([[-1]])])
    assert W.order == 2


def test_close_group_dihedral4_order8():
    W = catalog("dihedral(4)")
    assert W.order == 8


def test_close_group_g212_order8():
    # |G(de,e,n)| = de^n n!/e cross-check by enumeration
    W = catalog("G(2,1,2)")
    assert W.order == 2 ** 2 * 2


def test_order_cap_error():
    with pytest.raises(GroupError):
        close_group([la.mat([[-1, 0], [0, 1]]), la.mat([[0, 1], [1, 0]])], order_cap=3)


def test_infinite_order_generator_rejected():
    with pytest.raises(GroupError):
        close_group([la.mat([[2]])], order_cap=50)


@pytest.mark.parametrize("name,order,nrefl", [
    ("dihedral3", 6, 3),
    ("dihedral4", 8, 4),
    ("B2", 8, 4),
    ("B3", 48, 9),
    ("G4", 24, 8),
    ("cyclic2", 2, 1),
])
def test_catalog_orders_and_reflections(name, order, nrefl):
    W = catalog(name)
    assert W.order == order
    assert len(W.reflections) == nrefl
    assert W.generated_by_reflections()


def test_reflections_trivial_group():
    W = catalog("cyclic(1)")
    assert W.reflections == ()


def test_dihedral8_hyperplane_orbits():
    W = catalog("dihedral4")
    assert len(W.hyperplanes) == 4
    assert all(H.e == 2 for H in W.hyperplanes)
    assert W.hyperplane_orbit_count == 2


def test_g4_hyperplanes():
    W = catalog("G4")
    assert len(W.hyperplanes) == 4
    assert all(H.e == 3 for H in W.hyperplanes)
    assert W.hyperplane_orbit_count == 1


def test_hyperplane_pointwise_cyclic():
    for name in ("B2", "G4", "dihedral3"):
        W = catalog(name)
        for H in W.hyperplanes:
            assert len(H.pointwise) == H.e
            orders = sorted(W.element_order(g) for g in H.pointwise)
            assert max(orders) == H.e  # cyclic of order e_H has a generator


def test_idempotents_e2():
    W = catalog("cyclic2")
    H = W.hyperplanes[0]
    s = next(g for g in W.elements if g != W.identity)
    e0 = idempotent(W, H, 0)
    e1 = idempotent(W, H, 1)
    assert e0[W.identity] == as_cyc(Fraction(1, 2)) and e0[s] == as_cyc(Fraction(1, 2))
    assert e1[W.identity] == as_cyc(Fraction(1, 2)) and e1[s] == as_cyc(Fraction(-1, 2))
    assert group_algebra_mul(W, e0, e0) == e0
    assert group_algebra_mul(W, e0, e1) == {}


def test_idempotents_sum_to_identity():
    for name in ("B2", "G4"):
        W = catalog(name)
        H = W.hyperplanes[0]
        total = {}
        for j in range(H.e):
            for g, c in idempotent(W, H, j).items():
                total[g] = total.get(g, CycNum.zero()) + c
        total = {g: c for g, c in total.items() if not c.is_zero()}
        assert total == {W.identity: as_cyc(1)}


def test_stabilizer_examples():
    W = catalog("G(2,1,2)")
    generic = la.vec([2, 3])
    assert W.stabilizer(generic).order == 1
    assert W.stabilizer(la.vec([0, 0])).order == W.order
    P = W.stabilizer(la.vec([0, 1]))
    assert P.order == 2
    t = next(g for g in P.elements if g != W.identity)
    assert t.mat == la.mat([[-1, 0], [0, 1]])


def test_pointwise_stabilizer_examples():
    W = catalog("B2")
    full = la.rref([la.vec([1, 0]), la.vec([0, 1])])
    assert W.pointwise_stabilizer(full).order == 1
    assert W.pointwise_stabilizer(()).order == W.order
    H = W.hyperplanes[0]
    assert W.pointwise_stabilizer(H.basis).order == H.e


def test_parabolic_classes_counts():
    assert len(catalog("cyclic2").parabolic_classes()) == 2
    cl = catalog("G(2,1,2)").parabolic_classes()
    assert len(cl) == 4
    assert sorted(c.representative.order for c in cl) == [1, 2, 2, 8]
    clg4 = catalog("G4").parabolic_classes()
    assert len(clg4) == 3
    assert sorted(c.representative.order for c in clg4) == [1, 3, 24]


def test_parabolic_classes_generator_order_independent():
    W1 = catalog("B2")
    gens = [g.mat for g in W1.generators][::-1]
    W2 = close_group(gens)
    k1 = [c.representative.key for c in W1.parabolic_classes()]
    k2 = [c.representative.key for c in W2.parabolic_classes()]
    assert k1 == k2


def test_witness_has_exact_stabilizer():
    for name in ("B2", "B3", "G4", "dihedral4"):
        W = catalog(name)
        for P in W.parabolic_subgroups():
            assert W.stabilizer_keys(P.witness) == P.element_keys


@given(st.sampled_from(["B2", "dihedral3", "G4"]),
       st.lists(st.integers(min_value=-3, max_value=3), min_size=2, max_size=2))
@settings(max_examples=25, deadline=None)
def test_stabilizer_equals_pointwise_on_span(name, coords):
    W = catalog(name)
    v = la.vec(coords)
    basis = la.span([v])
    assert W.stabilizer_keys(v) == W.pointwise_stabilizer(basis).element_keys


def test_steinberg_consistency():
    # the stabilizer of a generic point of an intersection of fixed spaces
    # contains both parabolics
    W = catalog("B3")
    paras = W.parabolic_subgroups()
    P, Q = paras[1], paras[2]
    inter = la.intersect(P.fixed_space, Q.fixed_space, W.dim)
    v = W.witness_point(inter)
    stab = W.stabilizer_keys(v)
    assert P.element_keys <= stab and Q.element_keys <= stab


def test_normalizer_examples():
    W = catalog("B2")
    top = next(c.representative for c in W.parabolic_classes() if c.representative.order == W.order)
    assert W.normalizer(top).order == 1
    bottom = next(c.representative for c in W.parabolic_classes() if c.representative.order == 1)
    assert W.normalizer(bottom).order == W.order


def test_normalizer_b4_type_b1_is_b3():
    W = catalog("B4")
    basis = la.rref([la.vec([0, 1, 0, 0]), la.vec([0, 0, 1, 0]), la.vec([0, 0, 0, 1])])
    P = W.pointwise_stabilizer(basis)
    assert P.order == 2
    N = W.normalizer(P)
    assert N.subgroup_order // P.order == 48
    assert N.order == 48


def test_parameter_k_residues():
    W = catalog("G4")
    k = ParameterK.from_lists(W, [[0, 1, 2]])
    H = W.hyperplanes[0]
    assert k.k_H(H, 3) == k.k_H(H, 0)
    assert k.k_H(H, 4) == as_cyc(1)
    shifted = k.shifted({H.orbit_id: as_cyc(5)})
    assert shifted.k_H(H, 1) == as_cyc(6)


def test_catalog_rejects_unknown():
    with pytest.raises(GroupError):
        catalog("E8ish")


def test_group_order_formula_gdeen():
    import math
    for de, e, n in [(2, 1, 2), (2, 2, 2), (3, 1, 2), (4, 2, 2), (3, 3, 3)]:
        W = catalog(f"G({de},{e},{n})")
        assert W.order == de ** n * math.factorial(n) // e
