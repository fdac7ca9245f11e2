"""Stratifications of V/W and (V x V*)/W and the leaf atlas of the
undeformed quotient under a twist.

Leaves are label-level objects: a parabolic-class tag, the matching class in
the induced group on the fixed space, a twist-coset class, and the (even)
dimension.  The closure model attached to each leaf is the pair
(fixed space of P restricted to V^tau, normalizer quotient of P_tau), with
parameter zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .refgroup import Parabolic, ParabolicClass, ReflectionGroup
from .tau import TauContext, TauError


@dataclass(frozen=True)
class Stratum:
    parabolic_class: int
    kind: str                   # "single" or "double"
    dimension: int
    parabolic_order: int
    normalizer_order: int       # quotient acting on the closure model


@dataclass(frozen=True)
class LeafLabel:
    split_orbit: int
    p_class: int                # conjugacy class of P in Parab(W)/W
    p_tau_class: int            # conjugacy class of P_tau in Parab(W_tau)/W_tau
    twist_class_rep: str
    dimension: int
    cuspidal_point: str
    model_space_dim: int
    model_normalizer_order: int
    model_parameter: str


def strata_single(W: ReflectionGroup) -> tuple[Stratum, ...]:
    out = []
    for c in W.parabolic_classes():
        N = W.normalizer(c.representative)
        out.append(Stratum(c.class_id, "single", c.fixed_dim,
                           c.representative.order, N.order))
    return tuple(out)


def strata_double(W: ReflectionGroup) -> tuple[Stratum, ...]:
    """The symplectic leaves of the undeformed quotient, one per class."""
    out = []
    for c in W.parabolic_classes():
        N = W.normalizer(c.representative)
        out.append(Stratum(c.class_id, "double", 2 * c.fixed_dim,
                           c.representative.order, N.order))
    return tuple(out)


def closure_leq(W: ReflectionGroup, lower: int, upper: int) -> bool:
    """True iff the stratum of class `lower` lies in the closure of the
    stratum of class `upper` (reverse inclusion of parabolics)."""
    classes = W.parabolic_classes()
    big = classes[lower]
    small = classes[upper]
    for Q in big.members:
        for P in small.members:
            if P.element_keys <= Q.element_keys:
                return True
    return False


def tau_components(ctx: TauContext, cls: ParabolicClass):
    """Irreducible components of the tau-fixed part of one stratum, with the
    matching class of the induced group attached to each component."""
    P, classes, mapping = ctx.class_components(cls)
    if P is None:
        return ()
    orbits = ctx.split_orbits()
    inverse = {ci: oi for oi, ci in mapping.items()}
    out = []
    for ci, tc in enumerate(classes):
        orbit = orbits[inverse[ci]]
        sp = orbit[0]
        out.append({
            "twist_class_rep": tc.rep_key,
            "split_orbit": inverse[ci],
            "p_tau_class": ctx.w_tau.class_of(sp.p_tau).class_id,
            "dimension": sp.tau_rank,
        })
    return tuple(out)


def _cuspidal_fixed_part_is_zero(ctx: TauContext, sp) -> bool:
    """Check that the twisted fixed part of the internal space of P carries
    no invariants, which pins the unique zero-dimensional leaf at the origin."""
    W = ctx.W
    P = sp.parabolic
    cols = []
    ident = la.identity(W.dim)
    for g in P.elements:
        diff = la.mat_sub(g.mat, ident)
        cols.extend(la.transpose(diff))
    v_p = la.span(cols)                       # the P-stable complement of V^P
    inner = la.intersect(v_p, ctx.v_tau, W.dim)
    if not inner:
        return True
    fixers = []
    for k in sorted(P.element_keys & ctx.setwise_keys):
        diff = la.mat_sub(W.by_key[k].mat, ident)
        fixers.extend(diff)
    fixed = la.nullspace(tuple(fixers), W.dim) if fixers else \
        la.rref([tuple(ident[i]) for i in range(W.dim)])
    return len(la.intersect(inner, fixed, W.dim)) == 0


def leaves_zero_tau(ctx: TauContext) -> tuple[LeafLabel, ...]:
    """The leaf atlas of the twisted undeformed quotient: one label per
    orbit of split parabolics, in bijection with parabolic classes of the
    induced group."""
    if not ctx.is_full:
        raise TauError("twist must be full")
    W = ctx.W
    wt = ctx.w_tau
    twist_rep: dict[int, str] = {}
    for cls in W.parabolic_classes():
        P, classes, mapping = ctx.class_components(cls)
        for oi, ci in mapping.items():
            twist_rep[oi] = classes[ci].rep_key
    out = []
    for oi, orbit in enumerate(ctx.split_orbits()):
        sp = orbit[0]
        dim_w_side = 2 * sp.tau_rank
        dim_tau_side = 2 * len(sp.p_tau.fixed_space)
        if dim_w_side != dim_tau_side:
            raise TauError("dimension mismatch between the two computations")
        if ctx.ambient_span(sp.p_tau.fixed_space) != sp.tau_fixed:
            raise TauError("restricted fixed spaces disagree")
        if not _cuspidal_fixed_part_is_zero(ctx, sp):
            raise TauError("unexpected invariants in the internal space")
        N_tau = wt.normalizer(sp.p_tau)
        out.append(LeafLabel(
            split_orbit=oi,
            p_class=W.class_of(sp.parabolic).class_id,
            p_tau_class=wt.class_of(sp.p_tau).class_id,
            twist_class_rep=twist_rep[oi],
            dimension=dim_w_side,
            cuspidal_point="origin",
            model_space_dim=sp.tau_rank,
            model_normalizer_order=N_tau.order,
            model_parameter="0",
        ))
    if len(out) != len(wt.parabolic_classes()):
        raise TauError("leaf count does not match parabolic classes")
    out.sort(key=lambda l: (-l.dimension, l.p_tau_class, l.twist_class_rep))
    return tuple(out)


def leaf_image_under_upsilon(ctx: TauContext, label: LeafLabel):
    """Label-level image of the leaf closure under the bigrading map: the
    pair of closed single strata it projects onto."""
    d = label.dimension // 2
    side = {"p_tau_class": label.p_tau_class, "dimension": d}
    return (dict(side), dict(side))


def double_twist_nonempty(ctx: TauContext, P: Parabolic, coset_rep) -> bool:
    """Emptiness test for the doubled stratum: a twisted-fixed generic pair
    (point, covector) whose stabilizers intersect exactly in P."""
    W = ctx.W
    wtau = la.mat_mul(coset_rep.mat, ctx.tau)
    s_v = la.intersect(P.fixed_space, la.fixed_space(wtau), W.dim)
    dual_fixed = la.nullspace(
        tuple(r for g in P.elements for r in la.transpose(
            la.mat_sub(g.mat, la.identity(W.dim)))), W.dim) \
        if P.order > 1 else la.rref([tuple(la.identity(W.dim)[i]) for i in range(W.dim)])
    s_x = la.intersect(dual_fixed, la.left_fixed_space(wtau), W.dim)
    v = W.witness_point(s_v)
    x = W.witness_covector(s_x)
    return (W.stabilizer_keys(v) & W.dual_stabilizer_keys(x)) == P.element_keys


def single_twist_nonempty(ctx: TauContext, P: Parabolic, coset_rep) -> bool:
    W = ctx.W
    s = la.intersect(P.fixed_space,
                     la.fixed_space(la.mat_mul(coset_rep.mat, ctx.tau)), W.dim)
    return W.stabilizer_keys(W.witness_point(s)) == P.element_keys


def double_membership_agrees(ctx: TauContext, P: Parabolic) -> bool:
    """Single and doubled emptiness tests agree on every normalizer coset."""
    stable = frozenset(ctx.tau_conj(g).key for g in P.elements) == P.element_keys
    if not stable:
        return True
    N = ctx.W.normalizer(P)
    for idx in range(N.order):
        u = N.rep(idx)
        if single_twist_nonempty(ctx, P, u) != double_twist_nonempty(ctx, P, u):
            return False
    return True


def leaf_report(ctx: TauContext, group_label: str, tau_label: str) -> dict:
    leaves = leaves_zero_tau(ctx)
    return {
        "schema": 1,
        "group": group_label,
        "tau": tau_label,
        "rule": "leaf-atlas-undeformed",
        "normalization_nontrivial": "unknown",
        "leaf_count": len(leaves),
        "leaves": [
            {
                "p_class": l.p_class,
                "p_tau_class": l.p_tau_class,
                "twist_class": l.twist_class_rep,
                "dim": l.dimension,
                "cuspidal_point": l.cuspidal_point,
                "conjB_model": {
                    "space_dim": l.model_space_dim,
                    "normalizer_order": l.model_normalizer_order,
                    "parameter": l.model_parameter,
                },
            }
            for l in leaves
        ],
    }
