"""Finite complex reflection groups as explicit matrix groups over Q(zeta).

Groups are fully enumerated (breadth-first closure with a configurable order
cap) and every query below is exact: reflections and their hyperplanes, the
intersection lattice, parabolic subgroups with deterministic witness points,
conjugacy classes of parabolics, normalizers with their coset quotients, and
a catalog of standard groups G(de,e,n), Coxeter types B/D, dihedral groups
and the rank-two group generated by order-3 reflections on 4 hyperplanes.
"""

from __future__ import annotations

from fractions import Fraction

from .exactnum import CycNum, as_cyc, root_of_unity, primes
from . import linalg as la
from .linalg import Matrix, Vector

DEFAULT_ORDER_CAP = 10 ** 6


class GroupError(Exception):
    """Bad group spec or an operation outside the enumerated group."""


class CapExceededError(GroupError):
    """Group too large or infinite for the configured order cap."""


class GroupElement:
    __slots__ = ("mat", "key", "_hash")

    def __init__(self, mat: Matrix):
        self.mat = mat
        self.key = f"{len(mat)}|" + ";".join(x.sort_key() for row in mat for x in row)
        self._hash = hash(self.key)

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"GroupElement({self.key})"


class Hyperplane:
    __slots__ = ("alpha", "alpha_vee", "e", "orbit_id", "basis", "pointwise", "key")

    def __init__(self, alpha: Vector, alpha_vee: Vector, basis):
        self.alpha = alpha
        self.alpha_vee = alpha_vee
        self.basis = basis
        self.key = tuple(x.sort_key() for x in alpha)
        self.e = 0
        self.orbit_id = -1
        self.pointwise: tuple[GroupElement, ...] = ()


class Parabolic:
    """A parabolic subgroup with its fixed space and a witness point."""

    __slots__ = ("group", "elements", "element_keys", "fixed_space", "witness", "key")

    def __init__(self, group, elements, fixed_space, witness):
        self.group = group
        self.elements = tuple(sorted(elements, key=lambda g: g.key))
        self.element_keys = frozenset(g.key for g in self.elements)
        self.fixed_space = fixed_space
        self.witness = witness
        self.key = tuple(g.key for g in self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def rank_drop(self) -> int:
        return self.group.dim - len(self.fixed_space)

    def __eq__(self, other):
        return isinstance(other, Parabolic) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def _normalize_line(v: Vector) -> Vector:
    lead = next((x for x in v if not x.is_zero()), None)
    if lead is None:
        raise GroupError("zero vector cannot be normalized")
    inv = lead.inverse()
    return tuple(inv * x for x in v)


class ReflectionGroup:
    def __init__(self, dim: int, elements, generators, name: str = ""):
        self.dim = dim
        self.name = name
        self.elements: tuple[GroupElement, ...] = tuple(sorted(elements, key=lambda g: g.key))
        self.by_key = {g.key: g for g in self.elements}
        self.generators: tuple[GroupElement, ...] = tuple(generators)
        self.identity = GroupElement(la.identity(dim))
        if self.identity.key not in self.by_key:
            raise GroupError("identity missing from element set")
        self._inv: dict[str, GroupElement] = {}
        self._mul: dict[tuple[str, str], GroupElement] = {}
        self._reflections = None
        self._hyperplanes = None
        self._det = None
        self._flats = None
        self._parabolics = None
        self._classes = None

    @property
    def order(self) -> int:
        return len(self.elements)

    # -- basic group operations ------------------------------------------------
    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        cached = self._mul.get((g.key, h.key))
        if cached is not None:
            return cached
        m = la.mat_mul(g.mat, h.mat)
        out = self.by_key.get(GroupElement(m).key)
        if out is None:
            raise GroupError("product left the enumerated group")
        self._mul[(g.key, h.key)] = out
        return out

    def inv(self, g: GroupElement) -> GroupElement:
        cached = self._inv.get(g.key)
        if cached is None:
            cached = self.by_key[GroupElement(la.mat_inverse(g.mat)).key]
            self._inv[g.key] = cached
        return cached

    def conj(self, g: GroupElement, by: GroupElement) -> GroupElement:
        return self.mul(self.mul(by, g), self.inv(by))

    def element_order(self, g: GroupElement) -> int:
        acc, k = g, 1
        while acc != self.identity:
            acc = self.mul(acc, g)
            k += 1
        return k

    # -- reflections and hyperplanes --------------------------------------------
    def _compute_reflections(self):
        refl = []
        hyps: dict[tuple, Hyperplane] = {}
        ident = la.identity(self.dim)
        for g in self.elements:
            diff = la.mat_sub(g.mat, ident)
            if la.mat_rank(diff) != 1:
                continue
            alpha = _normalize_line(next(r for r in diff if any(not x.is_zero() for x in r)))
            cols = la.transpose(diff)
            avee = _normalize_line(next(c for c in cols if any(not x.is_zero() for x in c)))
            key = tuple(x.sort_key() for x in alpha)
            H = hyps.get(key)
            if H is None:
                H = Hyperplane(alpha, avee, la.nullspace((alpha,), self.dim))
                hyps[key] = H
            refl.append((g, H))
        ordered = tuple(sorted(hyps.values(), key=lambda H: H.key))
        for H in ordered:
            fixers = tuple(g for g in self.elements
                           if all(la.mat_vec(g.mat, b) == b for b in H.basis))
            H.pointwise = fixers
            H.e = len(fixers)
        # W-orbits of hyperplanes
        key_to_h = {H.key: H for H in ordered}
        seen = set()
        orbits = []
        for H in ordered:
            if H.key in seen:
                continue
            orbit = [H.key]
            seen.add(H.key)
            queue = [H]
            while queue:
                cur = queue.pop()
                for g in self.generators:
                    moved = tuple(la.covec_mat(cur.alpha, self.inv(g).mat))
                    mk = tuple(x.sort_key() for x in _normalize_line(moved))
                    if mk not in seen:
                        seen.add(mk)
                        orbit.append(mk)
                        queue.append(key_to_h[mk])
            orbits.append(sorted(orbit))
        orbits.sort(key=lambda o: o[0])
        for oid, orbit in enumerate(orbits):
            for k in orbit:
                key_to_h[k].orbit_id = oid
        self._hyperplanes = ordered
        self._reflections = tuple(sorted(refl, key=lambda p: p[0].key))
        self._orbit_count = len(orbits)

    @property
    def reflections(self):
        if self._reflections is None:
            self._compute_reflections()
        return self._reflections

    @property
    def hyperplanes(self):
        if self._hyperplanes is None:
            self._compute_reflections()
        return self._hyperplanes

    @property
    def hyperplane_orbit_count(self) -> int:
        self.hyperplanes
        return self._orbit_count

    @property
    def det_character(self) -> dict[str, CycNum]:
        if self._det is None:
            self._det = {g.key: la.det(g.mat) for g in self.elements}
        return self._det

    def generated_by_reflections(self) -> bool:
        gens = [g for g, _ in self.reflections]
        if not gens:
            return self.order == 1
        return len(_close_keys(self, gens)) == self.order

    # -- witness points ----------------------------------------------------------
    def witness_point(self, basis) -> Vector:
        """Deterministic generic point of span(basis), avoiding every
        reflecting hyperplane that does not contain the subspace."""
        if not basis:
            return la.zero_vector(self.dim)
        avoid = [H for H in self.hyperplanes if not la.subspace_leq(basis, H.basis)]
        for attempt in range(64):
            ws = primes(len(basis) + attempt)[attempt:]
            v = la.zero_vector(self.dim)
            for w, b in zip(ws, basis):
                v = la.add_vec(v, la.scale_vec(as_cyc(w), b))
            if all(not la.dot(H.alpha, v).is_zero() for H in avoid):
                return v
        raise GroupError("witness search exhausted its schedule")

    def witness_covector(self, basis) -> Vector:
        """Generic covector of a subspace of V*, avoiding the dual arrangement."""
        if not basis:
            return la.zero_vector(self.dim)
        avoid = [H for H in self.hyperplanes
                 if not all(la.dot(c, H.alpha_vee).is_zero() for c in basis)]
        for attempt in range(64):
            ws = primes(len(basis) + attempt)[attempt:]
            c = la.zero_vector(self.dim)
            for w, b in zip(ws, basis):
                c = la.add_vec(c, la.scale_vec(as_cyc(w), b))
            if all(not la.dot(c, H.alpha_vee).is_zero() for H in avoid):
                return c
        raise GroupError("witness search exhausted its schedule")

    # -- stabilizers ---------------------------------------------------------------
    def stabilizer_keys(self, v: Vector) -> frozenset[str]:
        return frozenset(g.key for g in self.elements if la.mat_vec(g.mat, v) == v)

    def dual_stabilizer_keys(self, c: Vector) -> frozenset[str]:
        return frozenset(g.key for g in self.elements if la.covec_mat(c, g.mat) == c)

    def _parabolic_from_keys(self, keys: frozenset[str]) -> Parabolic:
        elems = [self.by_key[k] for k in keys]
        if len(elems) == 1:
            fixed = la.rref([tuple(la.identity(self.dim)[i]) for i in range(self.dim)]) if self.dim else ()
        else:
            anns = []
            for g in elems:
                diff = la.mat_sub(g.mat, la.identity(self.dim))
                anns.extend(diff)
            fixed = la.nullspace(tuple(anns), self.dim) if anns else ()
        witness = self.witness_point(fixed)
        return Parabolic(self, elems, fixed, witness)

    def stabilizer(self, v: Vector) -> Parabolic:
        return self._parabolic_from_keys(self.stabilizer_keys(v))

    def pointwise_stabilizer(self, basis) -> Parabolic:
        keys = frozenset(g.key for g in self.elements
                         if all(la.mat_vec(g.mat, b) == b for b in basis))
        return self._parabolic_from_keys(keys)

    def setwise_stabilizer_keys(self, basis) -> frozenset[str]:
        if not basis:
            return frozenset(self.by_key)
        out = []
        for g in self.elements:
            moved = la.span([la.mat_vec(g.mat, b) for b in basis])
            if moved == basis:
                out.append(g.key)
        return frozenset(out)

    # -- intersection lattice and parabolic subgroups --------------------------------
    def flats(self):
        if self._flats is None:
            full = la.rref([tuple(la.identity(self.dim)[i]) for i in range(self.dim)]) if self.dim else ()
            found = {la.subspace_key(full): full}
            queue = [full]
            while queue:
                f = queue.pop()
                for H in self.hyperplanes:
                    inter = la.intersect(f, H.basis, self.dim)
                    k = la.subspace_key(inter)
                    if k not in found:
                        found[k] = inter
                        queue.append(inter)
            self._flats = tuple(sorted(found.values(), key=la.subspace_key))
        return self._flats

    def parabolic_subgroups(self) -> tuple[Parabolic, ...]:
        """Every parabolic subgroup (one per intersection-lattice flat)."""
        if self._parabolics is None:
            out = []
            for flat in self.flats():
                gens = [s for s, H in self.reflections if la.subspace_leq(flat, H.basis)]
                keys = _close_keys(self, gens)
                witness = self.witness_point(flat)
                out.append(Parabolic(self, [self.by_key[k] for k in keys], flat, witness))
            out.sort(key=lambda P: (-len(P.fixed_space), P.key))
            self._parabolics = tuple(out)
        return self._parabolics

    def parabolic_classes(self) -> tuple["ParabolicClass", ...]:
        if self._classes is None:
            paras = {P.element_keys: P for P in self.parabolic_subgroups()}
            seen = set()
            classes = []
            for P in self.parabolic_subgroups():
                if P.element_keys in seen:
                    continue
                orbit = {P.element_keys: P}
                queue = [P]
                while queue:
                    cur = queue.pop()
                    for g in self.generators:
                        moved = frozenset(self.conj(x, g).key for x in cur.elements)
                        if moved not in orbit:
                            Q = paras[moved]
                            orbit[moved] = Q
                            queue.append(Q)
                seen |= set(orbit)
                members = tuple(sorted(orbit.values(), key=lambda Q: Q.key))
                classes.append(ParabolicClass(members[0], members))
            classes.sort(key=lambda c: (-len(c.representative.fixed_space), c.representative.key))
            for i, c in enumerate(classes):
                c.class_id = i
            self._classes = tuple(classes)
        return self._classes

    def class_of(self, P: Parabolic) -> "ParabolicClass":
        for c in self.parabolic_classes():
            if any(P.element_keys == m.element_keys for m in c.members):
                return c
        raise GroupError("subgroup is not parabolic")

    # -- normalizers -------------------------------------------------------------
    def normalizer(self, P: Parabolic) -> "CosetQuotient":
        nkeys = self.setwise_stabilizer_keys(P.fixed_space)
        return CosetQuotient(self, sorted(nkeys), P)


class ParabolicClass:
    def __init__(self, representative: Parabolic, members):
        self.representative = representative
        self.members = members
        self.class_id = -1

    @property
    def fixed_dim(self) -> int:
        return len(self.representative.fixed_space)


class CosetQuotient:
    """N_W(P)/P as explicit cosets with deterministic representatives."""

    def __init__(self, group: ReflectionGroup, subgroup_keys, P: Parabolic):
        self.group = group
        self.P = P
        self.subgroup_keys = tuple(sorted(subgroup_keys))
        pk = P.element_keys
        assigned: dict[str, int] = {}
        cosets = []
        for k in self.subgroup_keys:
            if k in assigned:
                continue
            g = group.by_key[k]
            keys = sorted(group.mul(g, p).key for p in P.elements)
            idx = len(cosets)
            for ck in keys:
                assigned[ck] = idx
            cosets.append((group.by_key[keys[0]], frozenset(keys)))
        self.cosets = tuple(cosets)
        self.key_to_coset = assigned

    @property
    def order(self) -> int:
        return len(self.cosets)

    @property
    def subgroup_order(self) -> int:
        return len(self.subgroup_keys)

    def rep(self, idx: int) -> GroupElement:
        return self.cosets[idx][0]

    def coset_of(self, g: GroupElement) -> int:
        return self.key_to_coset[g.key]

    def mul(self, i: int, j: int) -> int:
        return self.coset_of(self.group.mul(self.rep(i), self.rep(j)))

    def inv(self, i: int) -> int:
        return self.coset_of(self.group.inv(self.rep(i)))


# ---------------------------------------------------------------------------
# closure

def _close_keys(group: ReflectionGroup, gens) -> frozenset[str]:
    found = {group.identity.key}
    queue = [group.identity]
    while queue:
        g = queue.pop()
        for h in gens:
            prod = group.mul(g, h)
            if prod.key not in found:
                found.add(prod.key)
                queue.append(prod)
    return frozenset(found)


def close_group(generators: list[Matrix], order_cap: int = DEFAULT_ORDER_CAP,
                name: str = "") -> ReflectionGroup:
    """Enumerate the group generated by invertible finite-order matrices."""
    if not generators:
        raise GroupError("need at least one generator")
    dim = len(generators[0])
    gens = []
    for m in generators:
        m = la.mat(m)
        if la.det(m).is_zero():
            raise GroupError("generator is singular")
        gens.append(GroupElement(m))
    ident = GroupElement(la.identity(dim))
    for g in gens:
        acc, k = g.mat, 1
        while acc != ident.mat:
            acc = la.mat_mul(acc, g.mat)
            k += 1
            if k > order_cap:
                raise CapExceededError("group too large or infinite")
    found = {ident.key: ident}
    queue = [ident]
    while queue:
        cur = queue.pop(0)
        for g in gens:
            nxt = GroupElement(la.mat_mul(cur.mat, g.mat))
            if nxt.key not in found:
                if len(found) >= order_cap:
                    raise CapExceededError("group too large or infinite")
                found[nxt.key] = nxt
                queue.append(nxt)
    W = ReflectionGroup(dim, found.values(), gens, name=name)
    if not W.generated_by_reflections():
        raise GroupError("group is not generated by its reflections")
    return W


def group_from_elements(dim: int, matrices, name: str = "",
                        require_reflection_generation: bool = True) -> ReflectionGroup:
    """Wrap an already-closed set of matrices (used for restricted actions)."""
    elems = {GroupElement(la.mat(m)).key: GroupElement(la.mat(m)) for m in matrices}
    ident = GroupElement(la.identity(dim))
    if ident.key not in elems:
        elems[ident.key] = ident
    W = ReflectionGroup(dim, elems.values(), [], name=name)
    gens = [g for g, _ in W.reflections]
    if not gens and W.order > 1:
        if require_reflection_generation:
            raise GroupError("group is not generated by its reflections")
        gens = list(W.elements)
    keys = _close_keys(W, gens)
    if require_reflection_generation and len(keys) != W.order:
        raise GroupError("group is not generated by its reflections")
    if len(keys) != W.order:
        gens = list(W.elements)
    W.generators = tuple(gens) if gens else (ident,)
    return W


# ---------------------------------------------------------------------------
# group-algebra helpers

def idempotent(W: ReflectionGroup, H: Hyperplane, j: int) -> dict[GroupElement, CycNum]:
    """The primitive idempotent of the cyclic pointwise stabilizer of H."""
    if not 0 <= j < H.e:
        raise GroupError("idempotent index out of range")
    inv_e = as_cyc(Fraction(1, H.e))
    out = {}
    for w in H.pointwise:
        out[w] = inv_e * (W.det_character[w.key] ** j)
    return out


def group_algebra_mul(W: ReflectionGroup, A: dict, B: dict) -> dict:
    out: dict[GroupElement, CycNum] = {}
    for g, cg in A.items():
        for h, ch in B.items():
            gh = W.mul(g, h)
            cur = out.get(gh, CycNum.zero()) + cg * ch
            if cur.is_zero():
                out.pop(gh, None)
            else:
                out[gh] = cur
    return out


# ---------------------------------------------------------------------------
# parameters

class ParameterK:
    """Reflection parameters: one exact value per (hyperplane orbit, residue)."""

    def __init__(self, W: ReflectionGroup, values: dict[tuple[int, int], CycNum] | None = None):
        self.W = W
        self.orbit_e: dict[int, int] = {}
        for H in W.hyperplanes:
            self.orbit_e.setdefault(H.orbit_id, H.e)
        self.values: dict[tuple[int, int], CycNum] = {}
        for oid, e in self.orbit_e.items():
            for j in range(e):
                self.values[(oid, j)] = CycNum.zero()
        if values:
            for (oid, j), v in values.items():
                if oid not in self.orbit_e:
                    raise GroupError(f"unknown hyperplane orbit {oid}")
                self.values[(oid, j % self.orbit_e[oid])] = as_cyc(v)

    @staticmethod
    def zero(W: ReflectionGroup) -> "ParameterK":
        return ParameterK(W)

    @staticmethod
    def from_lists(W: ReflectionGroup, per_orbit: list[list]) -> "ParameterK":
        vals = {}
        orbit_ids = sorted({H.orbit_id for H in W.hyperplanes})
        if len(per_orbit) != len(orbit_ids):
            raise GroupError(f"expected {len(orbit_ids)} orbit value lists")
        for oid, lst in zip(orbit_ids, per_orbit):
            for j, v in enumerate(lst):
                vals[(oid, j)] = as_cyc(v)
        return ParameterK(W, vals)

    def k(self, orbit_id: int, j: int) -> CycNum:
        return self.values[(orbit_id, j % self.orbit_e[orbit_id])]

    def k_H(self, H: Hyperplane, j: int) -> CycNum:
        return self.k(H.orbit_id, j)

    def shifted(self, per_orbit_shift: dict[int, CycNum]) -> "ParameterK":
        vals = {}
        for (oid, j), v in self.values.items():
            vals[(oid, j)] = v + per_orbit_shift.get(oid, CycNum.zero())
        return ParameterK(self.W, vals)

    def scaled(self, factor) -> "ParameterK":
        f = as_cyc(factor)
        return ParameterK(self.W, {kk: f * v for kk, v in self.values.items()})

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())


# ---------------------------------------------------------------------------
# catalog

def _perm_matrix(n: int, i: int, j: int) -> Matrix:
    rows = [[CycNum.one() if (r == c and r not in (i, j)) or (r, c) in ((i, j), (j, i))
             else CycNum.zero() for c in range(n)] for r in range(n)]
    return la.mat(rows)


def _diag(entries) -> Matrix:
    n = len(entries)
    return la.mat([[entries[r] if r == c else 0 for c in range(n)] for r in range(n)])


def _gdeen_generators(de: int, e: int, n: int) -> list[Matrix]:
    if de % e:
        raise GroupError("e must divide de in G(de,e,n)")
    d = de // e
    gens: list[Matrix] = []
    for j in range(n - 1):
        gens.append(_perm_matrix(n, j, j + 1))
    if d > 1:
        gens.append(_diag([root_of_unity(d)] + [1] * (n - 1)))
    if e > 1:
        if n < 2:
            raise GroupError("G(de,e,1) needs e = 1 form; use cyclic(d)")
        z = root_of_unity(de)
        twisted = [[CycNum.zero() for _ in range(n)] for _ in range(n)]
        twisted[0][1] = z.inverse()
        twisted[1][0] = z
        for r in range(2, n):
            twisted[r][r] = CycNum.one()
        gens.append(la.mat(twisted))
    if not gens:
        gens.append(_diag([1] * n))
    return gens


def _dihedral_generators(d: int) -> list[Matrix]:
    xi = root_of_unity(2 * d)
    def s(j):
        return la.mat([[0, xi ** j], [xi ** (-j), 0]])
    return [s(0), s(2)]


def dihedral_tau(d: int) -> Matrix:
    """The reflection swapping the two dihedral generators (not in W)."""
    xi = root_of_unity(2 * d)
    return la.mat([[0, xi], [xi ** (-1), 0]])


def _g4_generators() -> list[Matrix]:
    # rank-two group of order 24 with 8 order-3 reflections, realized from
    # the quaternion double cover twisted by an order-3 character
    i = root_of_unity(4)
    z = root_of_unity(3)
    half = Fraction(1, 2)
    def psi(a, b, c, d):
        return la.mat([[as_cyc(a) + as_cyc(b) * i, as_cyc(c) + as_cyc(d) * i],
                       [as_cyc(-c) + as_cyc(d) * i, as_cyc(a) - as_cyc(b) * i]])
    s = tuple(tuple(z * x for x in row) for row in psi(-half, half, half, half))
    t = tuple(tuple((z * z) * x for x in row) for row in psi(-half, half, half, -half))
    return [s, t]


def catalog(name: str, order_cap: int = DEFAULT_ORDER_CAP) -> ReflectionGroup:
    """Build a named group: B(n), D(n), G4, dihedral(d), cyclic(e), G(de,e,n)."""
    import re as _re
    s = name.strip().replace(" ", "")
    m = _re.fullmatch(r"[Bb]\(?(\d+)\)?", s)
    if m:
        n = int(m.group(1))
        return close_group(_gdeen_generators(2, 1, n), order_cap, name=f"B{n}")
    m = _re.fullmatch(r"[Dd]\(?(\d+)\)?", s)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise GroupError("D(n) needs n >= 2")
        return close_group(_gdeen_generators(2, 2, n), order_cap, name=f"D{n}")
    m = _re.fullmatch(r"(?:dihedral|dih)\(?(\d+)\)?", s, _re.IGNORECASE)
    if m:
        d = int(m.group(1))
        if d < 2:
            raise GroupError("dihedral(d) needs d >= 2")
        return close_group(_dihedral_generators(d), order_cap, name=f"dihedral{d}")
    m = _re.fullmatch(r"(?:cyclic|mu)\(?(\d+)\)?", s, _re.IGNORECASE)
    if m:
        e = int(m.group(1))
        return close_group([_diag([root_of_unity(e)])], order_cap, name=f"cyclic{e}")
    if s.upper() == "G4":
        return close_group(_g4_generators(), order_cap, name="G4")
    m = _re.fullmatch(r"[Gg]\((\d+),(\d+),(\d+)\)", s)
    if m:
        de, e, n = int(m.group(1)), int(m.group(2)), int(m.group(3))
        return close_group(_gdeen_generators(de, e, n), order_cap, name=f"G({de},{e},{n})")
    raise GroupError(f"unknown group name: {name!r}")
