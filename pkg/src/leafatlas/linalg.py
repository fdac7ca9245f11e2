"""Exact dense linear algebra over Q(zeta) scalars.

Vectors are tuples of CycNum, matrices tuples of row tuples.  Subspaces are
always carried as reduced-row-echelon bases, which doubles as a canonical
key for dedup.  Everything is pure and deterministic.
"""

from __future__ import annotations

from .exactnum import CycNum, as_cyc

Vector = tuple[CycNum, ...]
Matrix = tuple[tuple[CycNum, ...], ...]

_ZERO = CycNum.zero()
_ONE = CycNum.one()


def vec(entries) -> Vector:
    return tuple(as_cyc(e) for e in entries)


def mat(rows) -> Matrix:
    return tuple(tuple(as_cyc(e) for e in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n))


def zero_vector(n: int) -> Vector:
    return tuple(_ZERO for _ in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m = len(a), len(b[0]) if b else 0
    k = len(b)
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            s = _ZERO
            for l in range(k):
                x = ai[l]
                if not x.is_zero():
                    y = b[l][j]
                    if not y.is_zero():
                        s = s + x * y
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(a: Matrix, v: Vector) -> Vector:
    out = []
    for row in a:
        s = _ZERO
        for x, y in zip(row, v):
            if not x.is_zero() and not y.is_zero():
                s = s + x * y
        out.append(s)
    return tuple(out)


def covec_mat(c: Vector, a: Matrix) -> Vector:
    n = len(a)
    out = []
    for j in range(len(a[0]) if a else 0):
        s = _ZERO
        for i in range(n):
            x = c[i]
            if not x.is_zero():
                y = a[i][j]
                if not y.is_zero():
                    s = s + x * y
        out.append(s)
    return tuple(out)


def dot(c: Vector, v: Vector) -> CycNum:
    s = _ZERO
    for x, y in zip(c, v):
        if not x.is_zero() and not y.is_zero():
            s = s + x * y
    return s


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def transpose(a: Matrix) -> Matrix:
    if not a:
        return ()
    return tuple(tuple(a[i][j] for i in range(len(a))) for j in range(len(a[0])))


def scale_vec(c: CycNum, v: Vector) -> Vector:
    return tuple(c * x for x in v)


def add_vec(u: Vector, v: Vector) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def rref(rows: list[Vector] | tuple[Vector, ...]) -> tuple[Vector, ...]:
    """Reduced row echelon form; zero rows dropped.  Canonical for the span."""
    work = [list(r) for r in rows]
    ncols = len(work[0]) if work else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(work)) if not work[i][c].is_zero()), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        inv = work[r][c].inverse()
        work[r] = [inv * x for x in work[r]]
        for i in range(len(work)):
            if i != r and not work[i][c].is_zero():
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return tuple(tuple(row) for row in work[:r])


def mat_rank(a: Matrix) -> int:
    return len(rref(a))


def nullspace(a: Matrix, ncols: int | None = None) -> tuple[Vector, ...]:
    """RREF basis of {v : a @ v = 0} (column vectors returned as tuples)."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    if not a:
        return rref([tuple(_ONE if i == j else _ZERO for j in range(ncols)) for i in range(ncols)]) if ncols else ()
    red = rref(a)
    pivots = []
    for row in red:
        pivots.append(next(c for c in range(ncols) if not row[c].is_zero()))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [_ZERO] * ncols
        v[fc] = _ONE
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return rref(basis) if basis else ()


def mat_inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(a[i]) + [(_ONE if i == j else _ZERO) for j in range(n)] for i in range(n)]
    for c in range(n):
        pr = next((r for r in range(c, n) if not aug[r][c].is_zero()), None)
        if pr is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [inv * x for x in aug[c]]
        for r in range(n):
            if r != c and not aug[r][c].is_zero():
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)


def det(a: Matrix) -> CycNum:
    n = len(a)
    work = [list(row) for row in a]
    out = _ONE
    for c in range(n):
        pr = next((r for r in range(c, n) if not work[r][c].is_zero()), None)
        if pr is None:
            return _ZERO
        if pr != c:
            work[c], work[pr] = work[pr], work[c]
            out = -out
        out = out * work[c][c]
        inv = work[c][c].inverse()
        for r in range(c + 1, n):
            if not work[r][c].is_zero():
                f = work[r][c] * inv
                work[r] = [x - f * y for x, y in zip(work[r], work[c])]
    return out


def solve(a: Matrix, b: Vector) -> Vector | None:
    """One solution of a @ x = b, or None if inconsistent."""
    n = len(a)
    ncols = len(a[0]) if a else 0
    aug = rref([tuple(list(a[i]) + [b[i]]) for i in range(n)])
    x = [_ZERO] * ncols
    for row in aug:
        pc = next(c for c in range(ncols + 1) if not row[c].is_zero())
        if pc == ncols:
            return None
        x[pc] = row[ncols]
    return tuple(x)


# -- subspace helpers (bases stored as RREF row tuples) ----------------------

def span(vectors) -> tuple[Vector, ...]:
    vectors = [v for v in vectors if any(not x.is_zero() for x in v)]
    return rref(vectors) if vectors else ()


def fixed_space(m: Matrix) -> tuple[Vector, ...]:
    """Basis of Ker(m - id), i.e. vectors fixed by m."""
    n = len(m)
    return nullspace(mat_sub(m, identity(n)), n)


def left_fixed_space(m: Matrix) -> tuple[Vector, ...]:
    """Covectors c with c @ m = c (the fixed space of the dual action)."""
    return fixed_space(transpose(m))


def subspace_key(basis: tuple[Vector, ...]) -> tuple:
    return tuple(tuple(x.sort_key() for x in row) for row in basis)


def annihilator(basis: tuple[Vector, ...], n: int) -> tuple[Vector, ...]:
    """Covectors vanishing on the span of `basis` inside dimension n."""
    if not basis:
        return rref([tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)])
    return nullspace(basis, n)


def intersect(a: tuple[Vector, ...], b: tuple[Vector, ...], n: int) -> tuple[Vector, ...]:
    anns = list(annihilator(a, n)) + list(annihilator(b, n))
    if not anns:
        return rref([tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)])
    return nullspace(tuple(anns), n)


def contains(space: tuple[Vector, ...], v: Vector) -> bool:
    if all(x.is_zero() for x in v):
        return True
    combined = rref(list(space) + [v])
    return len(combined) == len(space)


def subspace_leq(a: tuple[Vector, ...], b: tuple[Vector, ...]) -> bool:
    """True iff span(a) is contained in span(b)."""
    return all(contains(b, v) for v in a)
