"""Invariant suite: every structural identity the modules promise, runnable
against a concrete (group, twist, parameter) job with machine-readable
pass/fail results.

Checks are gated by group order so that the suite stays at desk scale; every
check is deterministic (fixed seeds, sorted iteration).
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import leaves as leaves_mod
from . import linalg as la
from .cherednik import (
    CherednikAlgebra, euler_degree, filtration_degree, poisson_bracket,
)
from .exactnum import CycNum, as_cyc
from .refgroup import ParameterK, ReflectionGroup
from .tau import (
    TauContext, hyperplane_restriction_matches, intersection_of_splits_is_split,
    normalizer_tau, orbit_coincidence_holds, tau_acts_trivially_on_quotient,
)


class Check:
    def __init__(self, check_id: str, fn):
        self.check_id = check_id
        self.fn = fn

    def run(self):
        try:
            detail = self.fn()
            return {"id": self.check_id, "status": "pass",
                    "detail": detail if isinstance(detail, str) else ""}
        except AssertionError as exc:
            return {"id": self.check_id, "status": "fail", "detail": str(exc)}


def _field_axiom_sample():
    rng = random.Random(20240)
    for n in (1, 4, 9, 12, 40):
        for _ in range(6):
            vals = []
            for _ in range(3):
                coeffs = {rng.randrange(n): Fraction(rng.randrange(-4, 5), rng.randrange(1, 4))
                          for _ in range(2)}
                vals.append(CycNum(n, coeffs))
            a, b, c = vals
            assert (a + b) * c == a * c + b * c, "distributivity"
            assert (a * b) * c == a * (b * c), "associativity"
            if not a.is_zero():
                assert a * a.inverse() == as_cyc(1), "inverse"
    return "field axioms on seeded samples"


def _group_checks(W: ReflectionGroup) -> list[Check]:
    def reflection_generated():
        assert W.generated_by_reflections(), "group not generated by reflections"
        return f"order {W.order}"

    return [
        Check("group.reflection-generated", reflection_generated),
        Check("group.hyperplane-orders", lambda: _hyperplane_orders(W)),
        Check("group.parabolic-witnesses", lambda: _witness_check(W)),
    ]


def assert_true(cond, msg: str = "invariant violated"):
    assert cond, msg
    return True


def _hyperplane_orders(W):
    for H in W.hyperplanes:
        assert len(H.pointwise) == H.e, "pointwise stabilizer size"
        orders = [W.element_order(g) for g in H.pointwise]
        assert max(orders, default=1) == H.e, "cyclic stabilizer"
    return f"{len(W.hyperplanes)} hyperplanes"


def _witness_check(W):
    for P in W.parabolic_subgroups():
        assert W.stabilizer_keys(P.witness) == P.element_keys, "witness stabilizer"
    return f"{len(W.parabolic_subgroups())} parabolic subgroups"


def _tau_checks(ctx: TauContext, deep: bool) -> list[Check]:
    W = ctx.W

    def simple(check_id, predicate, msg):
        def body():
            assert predicate(), msg
            return ""
        return Check(check_id, body)

    checks = [
        simple("tau.full", lambda: ctx.is_full, "twist not full"),
        simple("tau.lsp-reflection-generated",
               ctx.w_tau.generated_by_reflections,
               "induced group not generated by reflections"),
        simple("tau.lsp-hyperplanes", lambda: hyperplane_restriction_matches(ctx),
               "induced hyperplanes differ from restrictions"),
        simple("tau.orbit-coincidence", lambda: orbit_coincidence_holds(ctx),
               "orbit coincidence fails on a witness"),
        Check("tau.split-bijection", lambda: _split_bijection(ctx)),
        Check("tau.fixed-space-match", lambda: _fixed_space_match(ctx)),
        simple("tau.trivial-on-quotient", lambda: tau_acts_trivially_on_quotient(ctx),
               "twist moves an element of the induced group"),
        Check("tau.normalizer-fixed-points", lambda: _normalizer_fixed(ctx)),
        Check("leaves.count-identity", lambda: _leaf_count(ctx)),
        Check("leaves.partition", lambda: _leaf_partition(ctx)),
    ]
    if W.order <= 60 or deep:
        checks.append(simple("tau.intersection-split",
                             lambda: intersection_of_splits_is_split(ctx),
                             "splits are not closed under intersection"))
        checks.append(Check("leaves.double-membership", lambda: _double_membership(ctx)))
    if _is_identity(ctx):
        checks.append(Check("leaves.identity-degeneration", lambda: _identity_degeneration(ctx)))
    return checks


def _is_identity(ctx) -> bool:
    return ctx.tau == la.identity(ctx.W.dim)


def _split_bijection(ctx):
    splits = ctx.split_parabolics()
    subs = ctx.w_tau.parabolic_subgroups()
    assert len(splits) == len(subs), f"{len(splits)} splits vs {len(subs)} parabolics"
    images = {sp.p_tau.element_keys for sp in splits}
    assert len(images) == len(splits), "restriction not injective"
    return f"{len(splits)} split parabolics"


def _fixed_space_match(ctx):
    for sp in ctx.split_parabolics():
        assert ctx.ambient_span(sp.p_tau.fixed_space) == sp.tau_fixed, \
            "restricted fixed space mismatch"
    return ""


def _normalizer_fixed(ctx):
    for sp in ctx.split_parabolics():
        data = normalizer_tau(ctx, sp)
        assert data["image_is_fixed_subgroup"], "normalizer image is not the fixed part"
    return ""


def _leaf_count(ctx):
    L = leaves_mod.leaves_zero_tau(ctx)
    classes = ctx.w_tau.parabolic_classes()
    assert len(L) == len(classes), f"{len(L)} leaves vs {len(classes)} classes"
    return f"{len(L)} leaves"


def _leaf_partition(ctx):
    total = 0
    for cls in ctx.W.parabolic_classes():
        comps = leaves_mod.tau_components(ctx, cls)
        seen = {c["split_orbit"] for c in comps}
        assert len(seen) == len(comps), "component labels collide"
        total += len(comps)
    expected = len(ctx.w_tau.parabolic_classes())
    assert total == expected, f"{total} components vs {expected} classes"
    return f"{total} components"


def _double_membership(ctx):
    for cls in ctx.W.parabolic_classes():
        assert leaves_mod.double_membership_agrees(ctx, cls.representative), \
            "single and doubled membership disagree"
    return ""


def _identity_degeneration(ctx):
    L = leaves_mod.leaves_zero_tau(ctx)
    D = leaves_mod.strata_double(ctx.W)
    assert sorted(l.dimension for l in L) == sorted(s.dimension for s in D), \
        "identity twist does not reduce to the double stratification"
    assert sorted(l.p_class for l in L) == sorted(s.parabolic_class for s in D), \
        "class labels disagree"
    return ""


def _cherednik_checks(W: ReflectionGroup, k: ParameterK) -> list[Check]:
    return [
        Check("cherednik.pbw-associativity", lambda: _assoc_check(W, k)),
        Check("cherednik.grading", lambda: _grading_check(W, k)),
        Check("cherednik.parameter-shift", lambda: _shift_check(W, k)),
    ] + ([Check("cherednik.poisson-laws", lambda: _poisson_check(W, k))]
         if W.dim == 1 else [])


def _random_elem(alg, rng, dmax=2):
    out = alg.zero()
    for _ in range(rng.randrange(1, 3)):
        a = tuple(rng.randrange(dmax + 1) for _ in range(alg.n))
        b = tuple(rng.randrange(dmax + 1) for _ in range(alg.n))
        g = rng.choice(alg.W.elements)
        c = Fraction(rng.randrange(-3, 4) or 1, rng.randrange(1, 3))
        out = out + alg.monomial(a, g.key, b) * as_cyc(c)
    return out


def _assoc_check(W, k, trials: int = 24):
    alg = CherednikAlgebra(W, k, "t")
    rng = random.Random(97)
    for _ in range(trials):
        A, B, C = (_random_elem(alg, rng) for _ in range(3))
        assert alg.multiply(alg.multiply(A, B), C) == alg.multiply(A, alg.multiply(B, C)), \
            "associativity failure"
    return f"{trials} random triples"


def _grading_check(W, k, trials: int = 16):
    alg = CherednikAlgebra(W, k, "t")
    rng = random.Random(53)
    for _ in range(trials):
        a = tuple(rng.randrange(3) for _ in range(alg.n))
        b = tuple(rng.randrange(3) for _ in range(alg.n))
        g = rng.choice(W.elements)
        A = alg.monomial(a, g.key, b)
        B = alg.monomial(b, g.key, a)
        prod = alg.multiply(A, B)
        if not prod.is_zero():
            assert euler_degree(prod) == euler_degree(A) + euler_degree(B), "grading"
        fa, fb = filtration_degree(A), filtration_degree(B)
        if not prod.is_zero():
            assert filtration_degree(prod) <= fa + fb, "filtration"
    return f"{trials} products"


def _shift_check(W, k):
    shift = {oid: as_cyc(Fraction(5, 7)) for oid in k.orbit_e}
    k2 = k.shifted(shift)
    alg1 = CherednikAlgebra(W, k, "t")
    alg2 = CherednikAlgebra(W, k2, "t")
    rng = random.Random(11)
    for _ in range(6):
        A = _random_elem(alg1, rng)
        B = _random_elem(alg1, rng)
        lhs = alg1.multiply(A, B)
        rhs = alg2.multiply(alg1.lift(A, alg2), alg1.lift(B, alg2))
        assert lhs.terms == rhs.terms, "orbitwise parameter shift changed products"
    return ""


def _poisson_check(W, k):
    alg = CherednikAlgebra(W, k, "t0")
    e = W.hyperplanes[0].e
    X = alg.x(0, e)
    Y = alg.y(0, e)
    t_alg = CherednikAlgebra(W, k, "t")
    b = poisson_bracket(X, Y, t_alg)
    assert (b + poisson_bracket(Y, X, t_alg)).is_zero(), "antisymmetry"
    prod = alg.multiply(X, Y)
    lhs = poisson_bracket(X, prod, t_alg)
    rhs = alg.multiply(poisson_bracket(X, X, t_alg), Y) + \
        alg.multiply(X, poisson_bracket(X, Y, t_alg))
    assert lhs == rhs, "Leibniz"
    jac = poisson_bracket(X, poisson_bracket(Y, prod, t_alg), t_alg) + \
        poisson_bracket(Y, poisson_bracket(prod, X, t_alg), t_alg) + \
        poisson_bracket(prod, poisson_bracket(X, Y, t_alg), t_alg)
    assert jac.is_zero(), "Jacobi"
    if not b.is_zero():
        assert euler_degree(b) == 0, "bracket degree"
        assert filtration_degree(b) <= 2 * e - 2, "bracket filtration drop"
    return ""


def run_suite(W: ReflectionGroup, ctx: TauContext | None = None,
              k: ParameterK | None = None, deep: bool = False) -> list[dict]:
    checks: list[Check] = [Check("exactnum.field-axioms", _field_axiom_sample)]
    checks += _group_checks(W)
    if ctx is not None:
        checks += _tau_checks(ctx, deep)
    if k is not None and W.order <= 24 and W.dim <= 2:
        checks += _cherednik_checks(W, k)
    return [c.run() for c in checks]
