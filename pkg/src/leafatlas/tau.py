"""Finite-order twists of a reflection group.

Given tau normalizing W, this module computes the fixed space V^tau, the
fullness defect, the induced reflection group on V^tau (setwise modulo
pointwise stabilizer) with a deterministic section back into W, the split
parabolic subgroups with their bijective restriction P -> P_tau, normalizer
identifications, and the twist-coset classes that index the components of
the fixed-point strata.
"""

from __future__ import annotations

from . import linalg as la
from .exactnum import CycNum, as_cyc
from .linalg import Matrix, Vector
from .refgroup import (
    GroupElement, Parabolic, ParameterK, ReflectionGroup, group_from_elements,
)

TAU_ORDER_CAP = 10_000


class TauError(Exception):
    """Invalid twist: not normalizing, infinite order, or fullness required."""


def tau_from_word(W: ReflectionGroup, word: list[int], zeta: CycNum | None = None) -> Matrix:
    """Expand a (word in generators, root of unity) twist spec to a matrix."""
    m = la.identity(W.dim)
    for idx in word:
        if not 0 <= idx < len(W.generators):
            raise TauError(f"generator index {idx} out of range")
        m = la.mat_mul(m, W.generators[idx].mat)
    if zeta is not None and not (zeta == as_cyc(1)):
        m = tuple(tuple(zeta * x for x in row) for row in m)
    return m


class SplitParabolic:
    """A tau-split parabolic P together with its image P_tau in W_tau."""

    __slots__ = ("parabolic", "p_tau", "tau_fixed", "tau_rank")

    def __init__(self, parabolic: Parabolic, p_tau: Parabolic, tau_fixed):
        self.parabolic = parabolic
        self.p_tau = p_tau
        self.tau_fixed = tau_fixed          # (V^P)^tau as an ambient subspace
        self.tau_rank = len(tau_fixed)


class TwistClass:
    """One orbit of twist cosets acting with fixed points on a stratum."""

    __slots__ = ("parabolic", "coset_indices", "rep_key")

    def __init__(self, parabolic: Parabolic, coset_indices, rep_key: str):
        self.parabolic = parabolic
        self.coset_indices = tuple(sorted(coset_indices))
        self.rep_key = rep_key


class TauContext:
    def __init__(self, W: ReflectionGroup, tau: Matrix):
        self.W = W
        tau = la.mat(tau)
        if la.det(tau).is_zero():
            raise TauError("twist matrix is singular")
        self.tau = tau
        for g in W.generators:
            conj = la.mat_mul(la.mat_mul(tau, g.mat), la.mat_inverse(tau))
            if GroupElement(conj).key not in W.by_key:
                raise TauError("twist does not normalize the group")
        ident = la.identity(W.dim)
        acc, order = tau, 1
        while acc != ident:
            acc = la.mat_mul(acc, tau)
            order += 1
            if order > TAU_ORDER_CAP:
                raise TauError("twist has order beyond cap (infinite?)")
        self.order = order
        self.tau_inv = la.mat_inverse(tau)
        self.v_tau = la.fixed_space(tau)
        self.v_tau_dual = la.left_fixed_space(tau)
        self.delta = max(len(la.fixed_space(la.mat_mul(g.mat, tau))) for g in W.elements)
        self.is_full = self.delta == len(self.v_tau)
        self.setwise_keys = W.setwise_stabilizer_keys(self.v_tau)
        self.pointwise_keys = frozenset(
            g.key for g in W.elements
            if all(la.mat_vec(g.mat, b) == b for b in self.v_tau))
        self._build_quotient()
        self._splits = None
        self._split_orbits = None
        self._twists: dict = {}

    # -- the reflection group on V^tau ---------------------------------------
    def _build_quotient(self):
        d = len(self.v_tau)
        if d == 0:
            bmat: Matrix = ()
        else:
            bmat = tuple(tuple(self.v_tau[j][i] for j in range(d)) for i in range(self.W.dim))
        self.basis_matrix = bmat
        restricted: dict[str, list[str]] = {}
        mats: dict[str, Matrix] = {}
        for k in sorted(self.setwise_keys):
            g = self.W.by_key[k]
            cols = []
            for j in range(d):
                img = la.mat_vec(g.mat, self.v_tau[j])
                x = la.solve(bmat, img)
                if x is None:
                    raise TauError("setwise stabilizer left the fixed space")
                cols.append(x)
            rmat = tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))
            rkey = GroupElement(rmat).key
            mats[rkey] = rmat
            restricted.setdefault(rkey, []).append(k)
        self.w_tau = group_from_elements(
            d, mats.values(), name=f"{self.W.name or 'W'}_tau",
            require_reflection_generation=False)
        self.section = {rk: self.W.by_key[min(ks)] for rk, ks in restricted.items()}
        self.restriction = {k: rk for rk, ks in restricted.items() for k in ks}

    def restrict_key(self, key: str) -> str:
        return self.restriction[key]

    def tau_conj(self, g: GroupElement) -> GroupElement:
        m = la.mat_mul(la.mat_mul(self.tau, g.mat), self.tau_inv)
        return self.W.by_key[GroupElement(m).key]

    def to_ambient(self, coords: Vector) -> Vector:
        v = la.zero_vector(self.W.dim)
        for c, b in zip(coords, self.v_tau):
            v = la.add_vec(v, la.scale_vec(c, b))
        return v

    def ambient_span(self, rows) -> tuple[Vector, ...]:
        return la.span([self.to_ambient(r) for r in rows])

    # -- split parabolic subgroups ----------------------------------------------
    def split_parabolics(self) -> tuple[SplitParabolic, ...]:
        if not self.is_full:
            raise TauError("twist must be full for split-parabolic theory")
        if self._splits is None:
            by_keys = {Q.element_keys: Q for Q in self.w_tau.parabolic_subgroups()}
            out = []
            for P in self.W.parabolic_subgroups():
                s = la.intersect(P.fixed_space, self.v_tau, self.W.dim)
                stab = self.W.pointwise_stabilizer(s)
                if stab.element_keys != P.element_keys:
                    continue
                pt_keys = frozenset(
                    self.restrict_key(k) for k in P.element_keys & self.setwise_keys)
                p_tau = by_keys.get(pt_keys)
                if p_tau is None:
                    raise TauError("restriction of a split parabolic is not parabolic")
                out.append(SplitParabolic(P, p_tau, s))
            self._splits = tuple(out)
        return self._splits

    def split_by_keys(self) -> dict[frozenset, SplitParabolic]:
        return {sp.parabolic.element_keys: sp for sp in self.split_parabolics()}

    def split_orbits(self) -> tuple[tuple[SplitParabolic, ...], ...]:
        """W_tau-orbits of tau-split parabolic subgroups."""
        if self._split_orbits is None:
            splits = self.split_by_keys()
            gens = [self.section[g.key] for g in self.w_tau.generators]
            seen = set()
            orbits = []
            for keys in sorted(splits, key=lambda ks: splits[ks].parabolic.key):
                if keys in seen:
                    continue
                orbit = {keys}
                queue = [keys]
                while queue:
                    cur = queue.pop()
                    elems = [self.W.by_key[k] for k in cur]
                    for g in gens:
                        moved = frozenset(self.W.conj(x, g).key for x in elems)
                        if moved not in orbit:
                            orbit.add(moved)
                            queue.append(moved)
                seen |= orbit
                orbits.append(tuple(sorted((splits[ks] for ks in orbit),
                                           key=lambda sp: sp.parabolic.key)))
            orbits.sort(key=lambda o: o[0].parabolic.key)
            self._split_orbits = tuple(orbits)
        return self._split_orbits

    # -- twist classes ------------------------------------------------------------
    def twist_classes(self, P: Parabolic):
        """Orbits, under the normalizer quotient, of cosets w with
        fixed points of w*tau meeting the open stratum of P."""
        if not self.is_full:
            raise TauError("twist must be full")
        cached = self._twists.get(P.key)
        if cached is not None:
            return cached
        N = self.W.normalizer(P)
        stable = frozenset(self.tau_conj(g).key for g in P.elements) == P.element_keys
        if not stable:
            # a coset w with fixed points on the open stratum would force
            # tau itself to normalize P
            result = (N, ())
            self._twists[P.key] = result
            return result
        members = []
        for idx in range(N.order):
            u = N.rep(idx)
            s = la.intersect(P.fixed_space,
                             la.fixed_space(la.mat_mul(u.mat, self.tau)), self.W.dim)
            v = self.W.witness_point(s)
            if self.W.stabilizer_keys(v) == P.element_keys:
                members.append(idx)
        member_set = set(members)
        classes = []
        seen: set[int] = set()
        for idx in members:
            if idx in seen:
                continue
            orbit = {idx}
            queue = [idx]
            while queue:
                cur = queue.pop()
                u = N.rep(cur)
                for j in range(N.order):
                    a = N.rep(j)
                    moved = self.W.mul(self.W.mul(a, u), self.W.inv(self.tau_conj(a)))
                    midx = N.coset_of(moved)
                    if midx not in orbit:
                        if midx not in member_set:
                            raise TauError("twist-coset orbit left the member set")
                        orbit.add(midx)
                        queue.append(midx)
            seen |= orbit
            classes.append(TwistClass(P, orbit, min(N.rep(i).key for i in orbit)))
        classes.sort(key=lambda c: c.rep_key)
        result = (N, tuple(classes))
        self._twists[P.key] = result
        return result

    def split_class_dictionary(self, P: Parabolic):
        """The bijection between W_tau-orbits of split members of the class
        of P and twist classes over P, as an index map.  P must be split."""
        if P.element_keys not in self.split_by_keys():
            raise TauError("dictionary base point must be a split parabolic")
        N, classes = self.twist_classes(P)
        cls = self.W.class_of(P)
        member_keys = {m.element_keys for m in cls.members}
        mapping: dict[int, int] = {}
        for oi, orbit in enumerate(self.split_orbits()):
            if orbit[0].parabolic.element_keys not in member_keys:
                continue
            Q = orbit[0].parabolic
            x = next(g for g in self.W.elements
                     if frozenset(self.W.conj(p, g).key for p in P.elements)
                     == Q.element_keys)
            w = self.W.mul(self.W.inv(x), self.tau_conj(x))
            widx = N.coset_of(w)
            ci = next(i for i, c in enumerate(classes) if widx in c.coset_indices)
            mapping[oi] = ci
        return N, classes, mapping

    def class_components(self, cls):
        """Twist-class data for one conjugacy class of parabolics, computed
        from its minimal split member (empty when none is split)."""
        splits = self.split_by_keys()
        split_members = [m for m in cls.members if m.element_keys in splits]
        if not split_members:
            return None, (), {}
        P = split_members[0]
        N, classes, mapping = self.split_class_dictionary(P)
        return P, classes, mapping


# ---------------------------------------------------------------------------
# module-level operations

def build_tau(W: ReflectionGroup, tau_spec) -> TauContext:
    """tau_spec: a matrix, a GroupElement, or {"word": [...], "zeta": CycNum}."""
    if isinstance(tau_spec, TauContext):
        return tau_spec
    if isinstance(tau_spec, GroupElement):
        return TauContext(W, tau_spec.mat)
    if isinstance(tau_spec, dict):
        return TauContext(W, tau_from_word(W, list(tau_spec.get("word", [])),
                                           tau_spec.get("zeta")))
    return TauContext(W, tau_spec)


def make_full(W: ReflectionGroup, tau: Matrix) -> Matrix:
    """First w (in element order) with dim V^(w tau) maximal; returns w*tau."""
    tau = la.mat(tau)
    best = max(len(la.fixed_space(la.mat_mul(g.mat, tau))) for g in W.elements)
    for g in W.elements:
        cand = la.mat_mul(g.mat, tau)
        if len(la.fixed_space(cand)) == best:
            return cand
    raise TauError("unreachable")


def is_regular(ctx: TauContext) -> bool:
    """True iff the fixed space meets the hyperplane complement."""
    return all(not la.subspace_leq(ctx.v_tau, H.basis) for H in ctx.W.hyperplanes)


def lehrer_springer_group(ctx: TauContext) -> ReflectionGroup:
    """The reflection group induced on V^tau, with its structural checks run."""
    if not ctx.is_full:
        raise TauError("twist must be full for the induced reflection group")
    if not ctx.w_tau.generated_by_reflections():
        raise TauError("induced group is not generated by its reflections")
    if not hyperplane_restriction_matches(ctx):
        raise TauError("induced hyperplanes do not match restricted ones")
    return ctx.w_tau


def hyperplane_restriction_matches(ctx: TauContext) -> bool:
    """Hyperplanes of the induced group == restrictions of ambient ones."""
    d = len(ctx.v_tau)
    if d == 0:
        return len(ctx.w_tau.hyperplanes) == 0
    expected = set()
    for H in ctx.W.hyperplanes:
        coords = tuple(la.dot(H.alpha, b) for b in ctx.v_tau)
        if all(x.is_zero() for x in coords):
            continue
        lead = next(x for x in coords if not x.is_zero())
        inv = lead.inverse()
        expected.add(tuple((inv * x).sort_key() for x in coords))
    got = {H.key for H in ctx.w_tau.hyperplanes}
    return expected == got


def orbit_coincidence_holds(ctx: TauContext) -> bool:
    """Points of V^tau in the same W-orbit already lie in the same orbit of
    the setwise stabilizer; checked exhaustively over split witnesses."""
    tau = ctx.tau
    for sp in ctx.split_parabolics():
        v = ctx.W.witness_point(sp.tau_fixed)
        if la.mat_vec(tau, v) != v:
            return False
        setwise_orbit = {tuple(x.sort_key() for x in la.mat_vec(ctx.W.by_key[k].mat, v))
                         for k in ctx.setwise_keys}
        for g in ctx.W.elements:
            u = la.mat_vec(g.mat, v)
            if la.mat_vec(tau, u) == u:
                if tuple(x.sort_key() for x in u) not in setwise_orbit:
                    return False
    return True


def normalizer_tau(ctx: TauContext, sp: SplitParabolic):
    """Normalizer quotient of P_tau in W_tau with its embedding into the
    ambient normalizer quotient; the image must be the tau-fixed part."""
    Nt = ctx.w_tau.normalizer(sp.p_tau)
    N = ctx.W.normalizer(sp.parabolic)
    image = set()
    for i in range(Nt.order):
        r = Nt.rep(i)
        w = ctx.section[r.key]
        image.add(N.coset_of(w))
    fixed = set()
    for i in range(N.order):
        u = N.rep(i)
        if N.coset_of(ctx.tau_conj(u)) == i:
            fixed.add(i)
    return {
        "quotient": Nt,
        "ambient": N,
        "image_cosets": tuple(sorted(image)),
        "fixed_cosets": tuple(sorted(fixed)),
        "image_is_fixed_subgroup": image == fixed,
    }


def tau_acts_trivially_on_quotient(ctx: TauContext) -> bool:
    for k in ctx.setwise_keys:
        g = ctx.W.by_key[k]
        if ctx.restrict_key(ctx.tau_conj(g).key) != ctx.restrict_key(k):
            return False
    return True


def intersection_of_splits_is_split(ctx: TauContext) -> bool:
    """Pointwise stabilizer of a union of split fixed spaces is split again."""
    splits = ctx.split_by_keys()
    sps = ctx.split_parabolics()
    for a in sps:
        for b in sps:
            joined = la.span(list(a.tau_fixed) + list(b.tau_fixed))
            inter = ctx.W.pointwise_stabilizer(joined)
            if inter.element_keys not in splits:
                return False
    return True


def tau_stabilizes_parameter(ctx: TauContext, k: ParameterK) -> bool:
    W = ctx.W
    key_to_h = {H.key: H for H in W.hyperplanes}
    for H in W.hyperplanes:
        moved = la.covec_mat(H.alpha, ctx.tau_inv)
        lead = next(x for x in moved if not x.is_zero())
        inv = lead.inverse()
        mk = tuple((inv * x).sort_key() for x in moved)
        target = key_to_h[mk]
        for j in range(H.e):
            if k.k_H(target, j) != k.k_H(H, j):
                return False
    return True
