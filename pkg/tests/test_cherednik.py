"""Rewriting engine: normal ordering, grading, Poisson limit, center search."""

import random
from fractions import Fraction

import pytest

from leafatlas.cherednik import (
    CherednikAlgebra, CherednikError, Poly2, PoissonCompatibilityError,
    associated_graded_leading, central_elements_bounded, euler_degree,
    filtration_degree, format_element, is_central, parse_element,
    poisson_bracket, rank1_center_relation, rees_specialize,
)
from leafatlas.exactnum import as_cyc
from leafatlas.refgroup import ParameterK, catalog


@pytest.fixture(scope="module")
def mu2():
    return catalog("cyclic2")


@pytest.fixture(scope="module")
def mu2_k(mu2):
    return ParameterK.from_lists(mu2, [[0, 1]])


def _sign_element(W):
    return next(g for g in W.elements if g != W.identity)


def test_rank1_commutator_oracle(mu2, mu2_k):
    # oracle: expand the defining relation by hand for the order-2 group with
    # e_H = 2, idempotents (1 +- s)/2 and unit pairing; the commutator comes
    # out as t + 2(k_0 - k_1) s
    alg = CherednikAlgebra(mu2, mu2_k, "t")
    s = _sign_element(mu2)
    got = alg.commutator(alg.y(0), alg.x(0))
    expect = alg.coeff(Poly2.t()) + alg.w(s) * as_cyc(-2)   # k_0 - k_1 = -1
    assert got == expect


def test_commutative_at_zero_parameter(mu2):
    alg = CherednikAlgebra(mu2, ParameterK.zero(mu2), "t0")
    assert alg.commutator(alg.y(0), alg.x(0)).is_zero()


def test_group_action_on_letters(mu2, mu2_k):
    alg = CherednikAlgebra(mu2, mu2_k, "t")
    s = _sign_element(mu2)
    sxs = alg.multiply(alg.multiply(alg.w(s), alg.x(0)), alg.w(s))
    assert sxs == alg.x(0) * as_cyc(-1)
    sys_ = alg.multiply(alg.multiply(alg.w(s), alg.y(0)), alg.w(s))
    assert sys_ == alg.y(0) * as_cyc(-1)


def test_euler_degree_examples(mu2, mu2_k):
    alg = CherednikAlgebra(mu2, mu2_k, "t0")
    s = _sign_element(mu2)
    assert euler_degree(alg.x(0, 2)) == 2
    xy = alg.multiply(alg.x(0), alg.y(0))
    assert euler_degree(xy + alg.w(s)) == 0
    assert euler_degree(alg.x(0) + alg.y(0)) is None


def test_filtration_degree_examples(mu2, mu2_k):
    alg = CherednikAlgebra(mu2, mu2_k, "t0")
    s = _sign_element(mu2)
    assert filtration_degree(alg.multiply(alg.x(0), alg.y(0))) == 2
    assert filtration_degree(alg.w(s)) == 0
    assert filtration_degree(alg.monomial((2,), s.key, (1,))) == 3


def test_graded_leading(mu2, mu2_k):
    alg = CherednikAlgebra(mu2, mu2_k, "t")
    s = _sign_element(mu2)
    yx = alg.multiply(alg.y(0), alg.x(0))
    lead = associated_graded_leading(yx)
    assert list(lead.terms) == [((1,), mu2.identity.key, (1,))]
    w_only = associated_graded_leading(alg.w(s))
    assert list(w_only.terms) == [((0,), s.key, (0,))]
    mixed = alg.multiply(alg.x(0), alg.y(0)) + alg.w(s)
    assert list(associated_graded_leading(mixed).terms) == [((1,), mu2.identity.key, (1,))]


def test_poisson_antisymmetry_and_triviality(mu2):
    alg = CherednikAlgebra(mu2, ParameterK.zero(mu2), "t0")
    z = alg.x(0, 2)
    assert poisson_bracket(z, z).is_zero()
    assert poisson_bracket(alg.one(), z).is_zero()
    b = poisson_bracket(alg.x(0, 2), alg.y(0, 2))
    assert not b.is_zero()
    assert euler_degree(b) == 0


def test_poisson_incompatible_inputs(mu2, mu2_k):
    alg = CherednikAlgebra(mu2, mu2_k, "t0")
    with pytest.raises(PoissonCompatibilityError):
        poisson_bracket(alg.x(0), alg.y(0))


def test_is_central_examples(mu2, mu2_k):
    alg = CherednikAlgebra(mu2, mu2_k, "t0")
    assert is_central(alg.x(0, 2))
    assert not is_central(alg.x(0))
    mu3 = catalog("cyclic3")
    k3 = ParameterK.from_lists(mu3, [[0, 1, 2]])
    alg3 = CherednikAlgebra(mu3, k3, "t0")
    assert is_central(alg3.x(0, 3))
    assert is_central(alg3.y(0, 3))
    assert is_central(alg3.multiply(alg3.x(0, 3), alg3.y(0, 3)))


def test_central_elements_bounded_mu2(mu2, mu2_k):
    _alg, basis = central_elements_bounded(mu2, mu2_k, 0, 2)
    assert len(basis) == 2
    xy = ((1,), mu2.identity.key, (1,))
    led = [e for e in basis if xy in e.terms]
    assert len(led) == 1
    ident_mono = ((0,), mu2.identity.key, (0,))
    assert ident_mono not in led[0].terms
    _alg2, basis2 = central_elements_bounded(mu2, mu2_k, 2, 2)
    assert len(basis2) == 1
    assert list(basis2[0].terms) == [((2,), mu2.identity.key, (0,))]


def test_central_elements_degenerate_bounds(mu2, mu2_k):
    _alg, basis = central_elements_bounded(mu2, mu2_k, 0, 0)
    assert len(basis) == 1 and list(basis[0].terms) == [((0,), mu2.identity.key, (0,))]
    _alg2, basis2 = central_elements_bounded(mu2, mu2_k, 5, 0)
    assert basis2 == []


def test_central_solve_cap(mu2, mu2_k):
    with pytest.raises(CherednikError):
        central_elements_bounded(mu2, mu2_k, 0, 40, monomial_cap=10)


def test_rank1_relation(mu2, mu2_k):
    rec0 = rank1_center_relation(ParameterK.zero(mu2))
    assert rec0["gamma"].is_zero()
    rec = rank1_center_relation(mu2_k)
    assert rec["gamma"] == as_cyc(1)
    assert rec["b_over_difference"] == as_cyc(Fraction(1, 2))
    for lam in (2, 3):
        scaled = rank1_center_relation(mu2_k.scaled(lam))
        assert scaled["gamma"] == as_cyc(lam * lam)
        assert scaled["b_over_difference"] == rec["b_over_difference"]
    assert as_cyc(4) * rec["b"] * rec["b"] == rec["gamma"]


def test_rees_specialization_matches_multiplication(mu2, mu2_k):
    algh = CherednikAlgebra(mu2, mu2_k, "hbar2")
    pairs = [(algh.y(0), algh.x(0)),
             (algh.multiply(algh.x(0), algh.y(0)), algh.y(0, 2))]
    for lam in (0, 1, 2):
        for A, B in pairs:
            spec_prod = rees_specialize(algh.multiply(A, B), lam)
            target = spec_prod.algebra
            direct = target.multiply(rees_specialize(A, lam).algebra.lift(
                rees_specialize(A, lam), target), algh.lift(rees_specialize(B, lam), target))
            assert spec_prod == direct


def test_rees_at_zero_is_commutative(mu2, mu2_k):
    algh = CherednikAlgebra(mu2, mu2_k, "hbar2")
    comm = algh.commutator(algh.y(0), algh.x(0))
    gr = rees_specialize(comm, 0)
    assert gr.is_zero()


def test_parameter_shift_invariance(mu2):
    k = ParameterK.from_lists(mu2, [[0, 1]])
    k2 = k.shifted({0: as_cyc(Fraction(7, 3))})
    a1 = CherednikAlgebra(mu2, k, "t")
    a2 = CherednikAlgebra(mu2, k2, "t")
    rng = random.Random(5)
    for _ in range(10):
        a = tuple([rng.randrange(3)])
        b = tuple([rng.randrange(3)])
        g = rng.choice(mu2.elements)
        m1 = a1.monomial(a, g.key, b)
        m2 = a1.monomial(b, g.key, a)
        lhs = a1.multiply(m1, m2)
        rhs = a2.multiply(a1.lift(m1, a2), a1.lift(m2, a2))
        assert lhs.terms == rhs.terms


def _random_elem(alg, rng, dmax=2, nterms=2):
    out = alg.zero()
    for _ in range(rng.randrange(1, nterms + 1)):
        a = tuple(rng.randrange(dmax + 1) for _ in range(alg.n))
        b = tuple(rng.randrange(dmax + 1) for _ in range(alg.n))
        g = rng.choice(alg.W.elements)
        c = Fraction(rng.randrange(-3, 4) or 1, rng.randrange(1, 3))
        out = out + alg.monomial(a, g.key, b) * as_cyc(c)
    return out


@pytest.mark.parametrize("name,kvals", [
    ("cyclic2", [[0, 1]]),
    ("cyclic3", [[0, 1, -1]]),
])
def test_associativity_sample(name, kvals):
    W = catalog(name)
    k = ParameterK.from_lists(W, kvals)
    alg = CherednikAlgebra(W, k, "t")
    rng = random.Random(42)
    for _ in range(40):
        A, B, C = (_random_elem(alg, rng) for _ in range(3))
        assert alg.multiply(alg.multiply(A, B), C) == alg.multiply(A, alg.multiply(B, C))


def test_grading_additivity_on_products():
    W = catalog("cyclic3")
    k = ParameterK.from_lists(W, [[1, 0, 0]])
    alg = CherednikAlgebra(W, k, "t")
    rng = random.Random(7)
    for _ in range(20):
        a = tuple([rng.randrange(3)])
        b = tuple([rng.randrange(3)])
        g = rng.choice(W.elements)
        A = alg.monomial(a, g.key, b)
        B = alg.monomial(b, g.key, a)
        prod = alg.multiply(A, B)
        if not prod.is_zero():
            assert euler_degree(prod) == euler_degree(A) + euler_degree(B)
            assert filtration_degree(prod) <= filtration_degree(A) + filtration_degree(B)
            lead = associated_graded_leading(prod)
            gr_prod = lead.algebra.multiply(
                associated_graded_leading(A, lead.algebra),
                associated_graded_leading(B, lead.algebra))
            top = filtration_degree(A) + filtration_degree(B)
            if filtration_degree(prod) == top:
                assert lead == gr_prod


def test_poisson_laws_on_central_elements():
    for name, kv in [("cyclic2", [[0, 1]]), ("cyclic3", [[0, 1, 3]])]:
        W = catalog(name)
        k = ParameterK.from_lists(W, kv)
        e = W.hyperplanes[0].e
        alg = CherednikAlgebra(W, k, "t0")
        t_alg = CherednikAlgebra(W, k, "t")
        X, Y = alg.x(0, e), alg.y(0, e)
        prod = alg.multiply(Y, X)
        assert is_central(prod)
        def pb(u, v):
            return poisson_bracket(u, v, t_alg)
        assert (pb(X, Y) + pb(Y, X)).is_zero()
        assert pb(X, alg.multiply(Y, prod)) == \
            alg.multiply(pb(X, Y), prod) + alg.multiply(Y, pb(X, prod))
        jac = pb(X, pb(Y, prod)) + pb(Y, pb(prod, X)) + pb(prod, pb(X, Y))
        assert jac.is_zero()
        br = pb(X, Y)
        if not br.is_zero():
            assert euler_degree(br) == 0
            assert filtration_degree(br) <= 2 * e - 2


def test_literal_round_trip(mu2, mu2_k):
    alg = CherednikAlgebra(mu2, mu2_k, "t0")
    texts = [
        "x1^2 * w(g0) * y1 + (3/2) * w(e)",
        "(1) * w(e)",
        "(-2/3) * x1 * w(e) * y1^2",
    ]
    for text in texts:
        e = parse_element(alg, text)
        assert parse_element(alg, format_element(e)) == e
    algt = CherednikAlgebra(mu2, mu2_k, "t")
    e = parse_element(algt, "(3/2) * t * w(e) + x1 * w(g0)")
    assert parse_element(algt, format_element(e)) == e


def test_parse_rejects_garbage(mu2, mu2_k):
    alg = CherednikAlgebra(mu2, mu2_k, "t0")
    for bad in ["x0", "q * w(e)", "w(g7)", "x1 ** 2"]:
        with pytest.raises(CherednikError):
            parse_element(alg, bad)


@pytest.mark.parametrize("name,kvals", [
    ("cyclic3", [[0, 1, -1]]),
    ("dihedral3", [[Fraction(1, 2), 0]]),
])
def test_relation_is_group_equivariant(name, kvals):
    # conjugating the commutator of two letters by any group element must
    # equal the commutator of the conjugated letters
    W = catalog(name)
    k = ParameterK.from_lists(W, kvals)
    alg = CherednikAlgebra(W, k, "t")
    for g in W.elements:
        ginv = W.inv(g)
        for i in range(W.dim):
            for j in range(W.dim):
                lhs = alg.multiply(alg.multiply(alg.w(g),
                                                alg.commutator(alg.y(i), alg.x(j))),
                                   alg.w(ginv))
                gy = alg.multiply(alg.multiply(alg.w(g), alg.y(i)), alg.w(ginv))
                gx = alg.multiply(alg.multiply(alg.w(g), alg.x(j)), alg.w(ginv))
                assert lhs == alg.commutator(gy, gx)


def test_normal_order_fixes_ordered_monomials(mu2, mu2_k):
    alg = CherednikAlgebra(mu2, mu2_k, "t0")
    s = _sign_element(mu2)
    mono = alg.monomial((2,), s.key, (1,))
    rebuilt = alg.multiply(alg.multiply(alg.x(0, 2), alg.w(s)), alg.y(0))
    assert rebuilt == mono
