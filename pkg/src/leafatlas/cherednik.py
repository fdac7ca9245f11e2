"""Symbolic rewriting engine for the deformed skew product of C[V x V*] with W.

Elements are finite sums of normal-ordered monomials x^a * w * y^b whose
coefficients are polynomials in the deformation letters t and h over Q(zeta).
The single rewriting rule moves a y-letter past an x-letter at the cost of
the commutator term attached to the hyperplane arrangement; everything else
is the semidirect-product action.  Three modes share the engine:

  "t"      commutator carries t <y,x> plus the arrangement sum
  "hbar2"  commutator carries h^2 times the arrangement sum (no t)
  "t0"     commutator carries the arrangement sum only

The normal form is reached by resolving the innermost leftmost inversion
first; the inversion count strictly drops, so rewriting terminates, and the
result is cached per exponent pair.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import linalg as la
from .exactnum import CycNum, ExactDomainError, as_cyc, cyc_parse, cyc_to_str
from .refgroup import GroupElement, ParameterK, ReflectionGroup

MODES = ("t", "hbar2", "t0")

_ONE = as_cyc(1)


class CherednikError(Exception):
    pass


class PoissonCompatibilityError(CherednikError):
    """Inputs not Poisson-compatible (not central at the undeformed point)."""


# ---------------------------------------------------------------------------
# coefficients: polynomials in t and h over Q(zeta)

class Poly2:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[tuple[int, int], CycNum] | None = None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if not v.is_zero()}

    @staticmethod
    def const(c) -> "Poly2":
        c = as_cyc(c)
        return Poly2({(0, 0): c})

    @staticmethod
    def t(power: int = 1) -> "Poly2":
        return Poly2({(power, 0): as_cyc(1)})

    @staticmethod
    def h(power: int = 1) -> "Poly2":
        return Poly2({(0, power): as_cyc(1)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Poly2") -> "Poly2":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, CycNum.zero()) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return Poly2(out)

    def __neg__(self) -> "Poly2":
        return Poly2({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "Poly2") -> "Poly2":
        return self + (-other)

    def __mul__(self, other: "Poly2") -> "Poly2":
        out: dict[tuple[int, int], CycNum] = {}
        for (i1, j1), v1 in self.coeffs.items():
            for (i2, j2), v2 in other.coeffs.items():
                k = (i1 + i2, j1 + j2)
                s = out.get(k, CycNum.zero()) + v1 * v2
                if s.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = s
        return Poly2(out)

    def scale(self, c: CycNum) -> "Poly2":
        if c.is_zero():
            return Poly2()
        return Poly2({k: c * v for k, v in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, Poly2) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted((k, v) for k, v in self.coeffs.items())))

    def divisible_by_t(self) -> bool:
        return all(i > 0 for (i, _j) in self.coeffs)

    def div_t(self) -> "Poly2":
        if not self.divisible_by_t():
            raise CherednikError("coefficient not divisible by t")
        return Poly2({(i - 1, j): v for (i, j), v in self.coeffs.items()})

    def at_t0(self) -> "Poly2":
        return Poly2({k: v for k, v in self.coeffs.items() if k[0] == 0})

    def subs_h(self, lam: CycNum) -> "Poly2":
        out: dict[tuple[int, int], CycNum] = {}
        for (i, j), v in self.coeffs.items():
            s = out.get((i, 0), CycNum.zero()) + v * (lam ** j)
            if s.is_zero():
                out.pop((i, 0), None)
            else:
                out[(i, 0)] = s
        return Poly2(out)

    def constant(self) -> CycNum:
        return self.coeffs.get((0, 0), CycNum.zero())

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self.coeffs)


# a monomial is (x-exponents, group element key, y-exponents)
Monomial = tuple[tuple[int, ...], str, tuple[int, ...]]


class CherElement:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "CherednikAlgebra", terms: dict[Monomial, Poly2]):
        self.algebra = algebra
        self.terms = {m: p for m, p in terms.items() if not p.is_zero()}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "CherElement") -> "CherElement":
        self._check(other)
        out = dict(self.terms)
        for m, p in other.terms.items():
            out[m] = out.get(m, Poly2()) + p
        return CherElement(self.algebra, out)

    def __neg__(self) -> "CherElement":
        return CherElement(self.algebra, {m: -p for m, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, CherElement):
            self._check(other)
            return self.algebra.multiply(self, other)
        if isinstance(other, Poly2):
            return CherElement(self.algebra,
                               {m: p * other for m, p in self.terms.items()})
        return CherElement(self.algebra,
                           {m: p.scale(as_cyc(other)) for m, p in self.terms.items()})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __eq__(self, other):
        return (isinstance(other, CherElement) and self.algebra is other.algebra
                and self.terms == other.terms)

    def __repr__(self):
        return f"CherElement({format_element(self)})"

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise CherednikError("elements belong to different algebra contexts")


def _exp_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


class CherednikAlgebra:
    def __init__(self, W: ReflectionGroup, k: ParameterK | None = None, mode: str = "t0"):
        if mode not in MODES:
            raise CherednikError(f"unknown mode {mode!r}")
        self.W = W
        self.n = W.dim
        self.k = k if k is not None else ParameterK.zero(W)
        if self.k.W is not W:
            raise CherednikError("parameter belongs to a different group")
        self.mode = mode
        self._commutators = self._build_commutators()
        self._yx_cache: dict = {}
        self._wx_cache: dict = {}
        self._yw_cache: dict = {}

    # -- relation data -----------------------------------------------------------
    def _build_commutators(self):
        n = self.n
        comm = [[{} for _ in range(n)] for _ in range(n)]
        for H in self.W.hyperplanes:
            pair_norm = la.dot(H.alpha, H.alpha_vee).inverse()
            weights: dict[str, CycNum] = {}
            for u in H.pointwise:
                det_u = self.W.det_character[u.key]
                acc = CycNum.zero()
                for l in range(H.e):
                    acc = acc + (self.k.k_H(H, l) - self.k.k_H(H, l + 1)) * (det_u ** l)
                if not acc.is_zero():
                    weights[u.key] = acc
            for i in range(n):
                ai = H.alpha[i]
                if ai.is_zero():
                    continue
                for j in range(n):
                    vj = H.alpha_vee[j]
                    if vj.is_zero():
                        continue
                    scalar = ai * vj * pair_norm
                    for ukey, wt in weights.items():
                        cur = comm[i][j].get(ukey, CycNum.zero()) + scalar * wt
                        if cur.is_zero():
                            comm[i][j].pop(ukey, None)
                        else:
                            comm[i][j][ukey] = cur
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                entry: dict[str, Poly2] = {}
                for ukey, c in comm[i][j].items():
                    if self.mode == "hbar2":
                        entry[ukey] = Poly2({(0, 2): c})
                    else:
                        entry[ukey] = Poly2.const(c)
                if self.mode == "t" and i == j:
                    entry[self.W.identity.key] = entry.get(
                        self.W.identity.key, Poly2()) + Poly2.t()
                row.append(entry)
            out.append(row)
        return out

    # -- element builders ----------------------------------------------------------
    def zero(self) -> CherElement:
        return CherElement(self, {})

    def one(self) -> CherElement:
        z = (0,) * self.n
        return CherElement(self, {(z, self.W.identity.key, z): Poly2.const(1)})

    def scalar(self, c) -> CherElement:
        z = (0,) * self.n
        return CherElement(self, {(z, self.W.identity.key, z): Poly2.const(c)})

    def coeff(self, p: Poly2) -> CherElement:
        z = (0,) * self.n
        return CherElement(self, {(z, self.W.identity.key, z): p})

    def x(self, i: int, power: int = 1) -> CherElement:
        a = tuple(power if m == i else 0 for m in range(self.n))
        z = (0,) * self.n
        return CherElement(self, {(a, self.W.identity.key, z): Poly2.const(1)})

    def y(self, i: int, power: int = 1) -> CherElement:
        b = tuple(power if m == i else 0 for m in range(self.n))
        z = (0,) * self.n
        return CherElement(self, {(z, self.W.identity.key, b): Poly2.const(1)})

    def w(self, g) -> CherElement:
        key = g.key if isinstance(g, GroupElement) else g
        if key not in self.W.by_key:
            raise CherednikError("group element outside the group")
        z = (0,) * self.n
        return CherElement(self, {(z, key, z): Poly2.const(1)})

    def monomial(self, a, key: str, b, coeff: Poly2 | None = None) -> CherElement:
        return CherElement(self, {(tuple(a), key, tuple(b)): coeff or Poly2.const(1)})

    # -- action expansions ----------------------------------------------------------
    def _poly_pow_linear(self, forms: list[list[CycNum]], exps) -> dict[tuple[int, ...], CycNum]:
        """Expand prod_m (sum_i forms[m][i] letter_i)^exps[m] over commuting letters."""
        n = self.n
        acc: dict[tuple[int, ...], CycNum] = {(0,) * n: as_cyc(1)}
        for m, e in enumerate(exps):
            for _ in range(e):
                nxt: dict[tuple[int, ...], CycNum] = {}
                for mono, c in acc.items():
                    for i, f in enumerate(forms[m]):
                        if f.is_zero():
                            continue
                        key = tuple(v + (1 if idx == i else 0) for idx, v in enumerate(mono))
                        s = nxt.get(key, CycNum.zero()) + c * f
                        if s.is_zero():
                            nxt.pop(key, None)
                        else:
                            nxt[key] = s
                acc = nxt
        return acc

    def push_w_past_x(self, wkey: str, alpha) -> dict[tuple[int, ...], CycNum]:
        """w x^alpha = (expansion in x) * w."""
        if not any(alpha) or wkey == self.W.identity.key:
            return {alpha: _ONE}
        key = (wkey, alpha)
        cached = self._wx_cache.get(key)
        if cached is None:
            inv = self.W.inv(self.W.by_key[wkey]).mat
            forms = [[inv[j][i] for i in range(self.n)] for j in range(self.n)]
            cached = self._poly_pow_linear(forms, alpha)
            self._wx_cache[key] = cached
        return cached

    def pull_w_from_y(self, wkey: str, beta) -> dict[tuple[int, ...], CycNum]:
        """y^beta w = w * (expansion in y)."""
        if not any(beta) or wkey == self.W.identity.key:
            return {beta: _ONE}
        key = (wkey, beta)
        cached = self._yw_cache.get(key)
        if cached is None:
            inv = self.W.inv(self.W.by_key[wkey]).mat
            forms = [[inv[i][m] for i in range(self.n)] for m in range(self.n)]
            cached = self._poly_pow_linear(forms, beta)
            self._yw_cache[key] = cached
        return cached

    # -- the rewriting kernel ----------------------------------------------------------
    def yx_product(self, b: tuple[int, ...], a: tuple[int, ...]) -> dict[Monomial, Poly2]:
        """Normal form of y^b x^a."""
        cached = self._yx_cache.get((b, a))
        if cached is not None:
            return cached
        n = self.n
        ident = self.W.identity.key
        if not any(b) or not any(a):
            result = {(a, ident, b): Poly2.const(1)}
            self._yx_cache[(b, a)] = result
            return result
        i = next(m for m in range(n) if b[m])
        j = next(m for m in range(n) if a[m])
        b1 = tuple(v - (1 if m == i else 0) for m, v in enumerate(b))
        a1 = tuple(v - (1 if m == j else 0) for m, v in enumerate(a))
        result: dict[Monomial, Poly2] = {}

        def accumulate(mono: Monomial, poly: Poly2):
            cur = result.get(mono, Poly2()) + poly
            if cur.is_zero():
                result.pop(mono, None)
            else:
                result[mono] = cur

        # term 1: x_j (y_i x^{a1}) with y^{b1} still on the left
        e_i = tuple(1 if m == i else 0 for m in range(n))
        inner = self.yx_product(e_i, a1)
        for (gam, vkey, eps), c_in in inner.items():
            gam2 = tuple(v + (1 if m == j else 0) for m, v in enumerate(gam))
            left = self.yx_product(b1, gam2)
            for (mu, v2key, nu), c_left in left.items():
                # (x^mu v2 y^nu) (v y^eps): move y^nu across v
                v2v = self.W.mul(self.W.by_key[v2key], self.W.by_key[vkey]).key
                spread = self.pull_w_from_y(vkey, nu)
                for delta, f in spread.items():
                    accumulate((mu, v2v, _exp_add(delta, eps)),
                               (c_in * c_left).scale(f))

        # term 2: y^{b1} C_{ij} x^{a1}
        for ukey, cpoly in self._commutators[i][j].items():
            spread = self.pull_w_from_y(ukey, b1)
            for delta, f in spread.items():
                inner2 = self.yx_product(delta, a1)
                for (gam, vkey, eps), c_in in inner2.items():
                    uv = self.W.mul(self.W.by_key[ukey], self.W.by_key[vkey]).key
                    push = self.push_w_past_x(ukey, gam)
                    for gam2, d in push.items():
                        accumulate((gam2, uv, eps),
                                   (cpoly * c_in).scale(f * d))

        self._yx_cache[(b, a)] = result
        return result

    def _mono_mul(self, m1: Monomial, m2: Monomial) -> dict[Monomial, Poly2]:
        a1, w1, b1 = m1
        a2, w2, b2 = m2
        out: dict[Monomial, Poly2] = {}
        mid = self.yx_product(b1, a2)
        for (alpha, ukey, beta), c in mid.items():
            push = self.push_w_past_x(w1, alpha)
            pull = self.pull_w_from_y(w2, beta)
            w1u = self.W.mul(self.W.by_key[w1], self.W.by_key[ukey])
            w1uw2 = self.W.mul(w1u, self.W.by_key[w2]).key
            for gam, d in push.items():
                xpart = _exp_add(a1, gam)
                for delta, f in pull.items():
                    mono = (xpart, w1uw2, _exp_add(delta, b2))
                    cur = out.get(mono, Poly2()) + c.scale(d * f)
                    if cur.is_zero():
                        out.pop(mono, None)
                    else:
                        out[mono] = cur
        return out

    def multiply(self, A: CherElement, B: CherElement) -> CherElement:
        out: dict[Monomial, Poly2] = {}
        for m1, p1 in A.terms.items():
            for m2, p2 in B.terms.items():
                scale = p1 * p2
                for mono, p in self._mono_mul(m1, m2).items():
                    cur = out.get(mono, Poly2()) + p * scale
                    if cur.is_zero():
                        out.pop(mono, None)
                    else:
                        out[mono] = cur
        return CherElement(self, out)

    def commutator(self, A: CherElement, B: CherElement) -> CherElement:
        return self.multiply(A, B) - self.multiply(B, A)

    def lift(self, e: CherElement, target: "CherednikAlgebra") -> CherElement:
        """Reinterpret the normal-ordered monomials in another context."""
        if target.W is not self.W:
            raise CherednikError("lift requires the same group")
        return CherElement(target, dict(e.terms))


# ---------------------------------------------------------------------------
# grading and filtration

def euler_degree(e: CherElement):
    """Common Z-degree (x count minus y count), or None if inhomogeneous."""
    degs = {sum(a) - sum(b) for (a, _w, b) in e.terms}
    if not degs:
        return 0
    if len(degs) > 1:
        return None
    return degs.pop()


def filtration_degree(e: CherElement):
    if e.is_zero():
        return None
    return max(sum(a) + sum(b) for (a, _w, b) in e.terms)


def associated_graded_leading(e: CherElement, commutative: CherednikAlgebra | None = None) -> CherElement:
    """Top filtration layer of e, with t killed, in the undeformed model."""
    if commutative is None:
        commutative = CherednikAlgebra(e.algebra.W, ParameterK.zero(e.algebra.W), "t0")
    if e.is_zero():
        return commutative.zero()
    top = filtration_degree(e)
    out = {}
    for (a, w, b), p in e.terms.items():
        if sum(a) + sum(b) == top:
            p0 = p.at_t0()
            if not p0.is_zero():
                out[(a, w, b)] = p0
    return CherElement(commutative, out)


# ---------------------------------------------------------------------------
# Poisson bracket via the deformation limit

def poisson_bracket(z1: CherElement, z2: CherElement,
                    t_algebra: CherednikAlgebra | None = None) -> CherElement:
    """lim of [z1, z2]/t: commute in the t-deformed context, divide, set t=0."""
    base = z1.algebra
    if z2.algebra is not base:
        raise CherednikError("elements belong to different algebra contexts")
    if base.mode != "t0":
        raise CherednikError("poisson bracket starts from the undeformed mode")
    if t_algebra is None:
        t_algebra = CherednikAlgebra(base.W, base.k, "t")
    lifted1 = base.lift(z1, t_algebra)
    lifted2 = base.lift(z2, t_algebra)
    comm = t_algebra.commutator(lifted1, lifted2)
    out = {}
    for mono, p in comm.terms.items():
        if not p.divisible_by_t():
            raise PoissonCompatibilityError(
                "inputs not Poisson-compatible (not central at the undeformed point)")
        q = p.div_t().at_t0()
        if not q.is_zero():
            out[mono] = q
    return CherElement(base, out)


# ---------------------------------------------------------------------------
# centrality

def is_central(e: CherElement) -> bool:
    alg = e.algebra
    if alg.mode != "t0":
        raise CherednikError("centrality is an undeformed-mode question")
    probes = [alg.x(i) for i in range(alg.n)] + [alg.y(i) for i in range(alg.n)]
    probes += [alg.w(g) for g in alg.W.generators]
    return all(alg.commutator(e, p).is_zero() for p in probes)


def _monomials(alg: CherednikAlgebra, z_degree: int, filt_bound: int):
    n = alg.n

    def comps(total, slots):
        if slots == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in comps(total - first, slots - 1):
                yield (first,) + rest

    out = []
    for da in range(filt_bound + 1):
        db = da - z_degree
        if db < 0 or da + db > filt_bound:
            continue
        for a in comps(da, n):
            for b in comps(db, n):
                for g in alg.W.elements:
                    out.append((a, g.key, b))
    out.sort(key=lambda m: (-(sum(m[0]) + sum(m[2])), m[0], m[2], m[1]))
    return out


def central_elements_bounded(W: ReflectionGroup, k: ParameterK, z_degree: int,
                             filt_bound: int, monomial_cap: int = 4000):
    """Solve the commutant conditions on the monomial span of one Z-degree."""
    alg = CherednikAlgebra(W, k, "t0")
    monos = _monomials(alg, z_degree, filt_bound)
    if not monos:
        return alg, []
    if len(monos) > monomial_cap:
        raise CherednikError("bound too large (configurable cap)")
    probes = [alg.x(i) for i in range(alg.n)] + [alg.y(i) for i in range(alg.n)]
    probes += [alg.w(g) for g in alg.W.generators]
    col_elems = [alg.monomial(a, wk, b) for (a, wk, b) in monos]
    rows: dict[tuple[int, Monomial], list[CycNum]] = {}
    for pi, probe in enumerate(probes):
        for ci, col in enumerate(col_elems):
            comm = alg.commutator(probe, col)
            for mono, p in comm.terms.items():
                if not p.is_constant():
                    raise CherednikError("unexpected deformation letter in t0 mode")
                row = rows.setdefault((pi, mono), [CycNum.zero()] * len(monos))
                row[ci] = p.constant()
    if rows:
        matrix = tuple(tuple(rows[key]) for key in sorted(rows, key=lambda kk: (kk[0], kk[1])))
        kernel = la.nullspace(matrix, len(monos))
    else:
        kernel = la.nullspace((), len(monos))
    basis = []
    for vecrow in kernel:
        terms = {}
        for c, mono in zip(vecrow, monos):
            if not c.is_zero():
                terms[mono] = Poly2.const(c)
        basis.append(CherElement(alg, terms))
    return alg, basis


def _fraction_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    from math import isqrt
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def rank1_center_relation(k: ParameterK):
    """The quadric relation for the order-2 cyclic group in rank one.

    Finds the degree-zero central element with unit leading xy-term, squares
    it against x^2 * y^2, and returns the scalar defect together with the
    empirically calibrated half-difference parameter."""
    W = k.W
    if W.dim != 1 or W.order != 2:
        raise CherednikError("rank-1 relation needs the order-2 cyclic group")
    alg, basis = central_elements_bounded(W, k, 0, 2)
    xy = ((1,), W.identity.key, (1,))
    zcands = [e for e in basis if xy in e.terms]
    if len(zcands) != 1:
        raise CherednikError("central degree-0 normalization failed")
    Z = zcands[0]
    lead = Z.terms[xy].constant()
    Z = Z * lead.inverse()
    X = alg.x(0, 2)
    Y = alg.y(0, 2)
    R = Z * Z - X * Y
    ident = ((0,), W.identity.key, (0,))
    if any(m != ident for m in R.terms):
        raise CherednikError("relation defect is not a scalar (engine bug)")
    gamma = R.terms.get(ident, Poly2()).constant()
    c = k.k(0, 0) - k.k(0, 1)
    record = {"gamma": gamma, "difference": c, "b": None, "b_over_difference": None}
    if not c.is_zero() and c.is_rational():
        ratio_sq = (gamma / (as_cyc(4) * c * c))
        if ratio_sq.is_rational():
            root = _fraction_sqrt(ratio_sq.as_fraction())
            if root is not None:
                b = as_cyc(root) * c
                if as_cyc(4) * b * b == gamma:
                    record["b"] = b
                    record["b_over_difference"] = as_cyc(root)
    return record


# ---------------------------------------------------------------------------
# the h^2-interpolation and its specializations

def rees_specialize(e: CherElement, lam) -> CherElement:
    """Substitute h -> lam, landing in the undeformed mode at parameter
    lam^2 * k."""
    alg = e.algebra
    if alg.mode != "hbar2":
        raise CherednikError("specialization starts from the h^2 mode")
    lam = as_cyc(lam)
    target = CherednikAlgebra(alg.W, alg.k.scaled(lam * lam), "t0")
    out = {}
    for mono, p in e.terms.items():
        q = p.subs_h(lam)
        if not q.is_zero():
            out[mono] = q
    return CherElement(target, out)


# ---------------------------------------------------------------------------
# literal syntax: "x1^2 * w(g0 g1) * y2 + (3/2) t * w(e)"

_TOKEN = re.compile(
    r"\(\s*(-?\d+(?:/\d+)?)\s*\)|(-?\d+(?:/\d+)?)|([xy])(\d+)(?:\^(\d+))?"
    r"|w\(([^)]*)\)|([th])(?:\^(\d+))?|Q\(z_\d+\):[^*+]*")


def parse_element(alg: CherednikAlgebra, text: str) -> CherElement:
    total = alg.zero()
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise CherednikError("empty term in element literal")
        coeff = Poly2.const(1)
        a = [0] * alg.n
        b = [0] * alg.n
        wkeys: list[str] = []
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise CherednikError("empty factor in element literal")
            m = _TOKEN.fullmatch(factor)
            if not m:
                raise CherednikError(f"bad factor {factor!r}")
            if m.group(1) is not None or m.group(2) is not None:
                coeff = coeff * Poly2.const(Fraction(m.group(1) or m.group(2)))
            elif m.group(3) is not None:
                idx = int(m.group(4)) - 1
                if not 0 <= idx < alg.n:
                    raise CherednikError(f"letter index out of range in {factor!r}")
                power = int(m.group(5) or 1)
                if m.group(3) == "x":
                    a[idx] += power
                else:
                    b[idx] += power
            elif m.group(6) is not None:
                body = m.group(6).strip()
                if body not in ("", "e"):
                    for tok in body.split():
                        if not re.fullmatch(r"g\d+", tok):
                            raise CherednikError(f"bad generator token {tok!r}")
                        gi = int(tok[1:])
                        if gi >= len(alg.W.generators):
                            raise CherednikError(f"generator index {gi} out of range")
                        wkeys.append(alg.W.generators[gi].key)
            elif m.group(7) is not None:
                power = int(m.group(8) or 1)
                coeff = coeff * (Poly2.t(power) if m.group(7) == "t" else Poly2.h(power))
            else:
                try:
                    coeff = coeff * Poly2.const(cyc_parse(factor))
                except ExactDomainError as exc:
                    raise CherednikError(str(exc)) from exc
        g = alg.W.identity
        for wk in wkeys:
            g = alg.W.mul(g, alg.W.by_key[wk])
        # letters were accumulated in commuting blocks, so the order x / w / y
        # is imposed by multiplying the three normal-ordered pieces
        zero = (0,) * alg.n
        xpart = alg.monomial(tuple(a), alg.W.identity.key, zero)
        wpart = alg.w(g)
        ypart = alg.monomial(zero, alg.W.identity.key, tuple(b))
        term = alg.multiply(alg.multiply(xpart, wpart), ypart) * coeff
        total = total + term
    return total


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _coeff_str(c: CycNum) -> str:
    if c.is_rational():
        return f"({_frac_str(c.as_fraction())})"
    return f"({cyc_to_str(c)})"


def format_element(e: CherElement, generator_words: dict[str, str] | None = None) -> str:
    """Canonical literal form; group elements print as w(<key>) unless a
    word table is supplied."""
    if e.is_zero():
        return "(0)"
    alg = e.algebra
    if generator_words is None:
        generator_words = _generator_word_table(alg.W)
    parts = []
    for mono in sorted(e.terms, key=lambda m: (-(sum(m[0]) + sum(m[2])), m[0], m[2], m[1])):
        a, wk, b = mono
        poly = e.terms[mono]
        for (it, ih) in sorted(poly.coeffs):
            c = poly.coeffs[(it, ih)]
            factors = [_coeff_str(c)]
            if it:
                factors.append("t" if it == 1 else f"t^{it}")
            if ih:
                factors.append("h" if ih == 1 else f"h^{ih}")
            for i, p in enumerate(a):
                if p:
                    factors.append(f"x{i+1}" if p == 1 else f"x{i+1}^{p}")
            word = generator_words.get(wk)
            if word is None:
                raise CherednikError("group element has no generator word")
            factors.append(f"w({word or 'e'})")
            for i, p in enumerate(b):
                if p:
                    factors.append(f"y{i+1}" if p == 1 else f"y{i+1}^{p}")
            parts.append(" * ".join(factors))
    return " + ".join(parts)


def _generator_word_table(W: ReflectionGroup) -> dict[str, str]:
    table = {W.identity.key: ""}
    frontier = [(W.identity, "")]
    while frontier:
        nxt = []
        for g, word in frontier:
            for i, h in enumerate(W.generators):
                prod = W.mul(g, h)
                if prod.key not in table:
                    w2 = (word + f" g{i}").strip()
                    table[prod.key] = w2
                    nxt.append((prod, w2))
        frontier = nxt
    return table
