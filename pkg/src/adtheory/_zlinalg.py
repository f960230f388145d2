"""Exact integer linear algebra: Smith normal form, solving, kernels, lattices.

Matrices are lists of rows of Python ints.  Large sparse problems are first
reduced by Gauss-Jordan elimination on unit pivots, which is unimodular and
keeps coefficients small; whatever is left (usually tiny) goes through a
dense Smith normal form with transforms.
"""

from __future__ import annotations

from collections import defaultdict
from math import gcd
from typing import Iterable, Sequence

Matrix = list  # list[list[int]]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def shape(A: Matrix, ncols: int | None = None) -> tuple[int, int]:
    if A:
        return len(A), len(A[0])
    return 0, (ncols or 0)


def matmul(A: Matrix, B: Matrix, inner: int | None = None, ncols: int | None = None) -> Matrix:
    m = len(A)
    k = len(A[0]) if A else (inner or 0)
    n = len(B[0]) if B else (ncols or 0)
    out = zeros(m, n)
    Bt = [list(col) for col in zip(*B)] if B else [[] for _ in range(n)]
    for i in range(m):
        row = A[i]
        nz = [(t, a) for t, a in enumerate(row) if a]
        if not nz:
            continue
        orow = out[i]
        for j in range(n):
            col = Bt[j]
            s = 0
            for t, a in nz:
                b = col[t]
                if b:
                    s += a * b
            orow[j] = s
    return out


def matvec(A: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v) if a and b) for row in A]


def transpose(A: Matrix, ncols: int = 0) -> Matrix:
    if not A:
        return [[] for _ in range(ncols)]
    return [list(c) for c in zip(*A)]


def is_zero(A: Matrix) -> bool:
    return all(not x for row in A for x in row)


# ---------------------------------------------------------------- dense SNF

def smith_normal_form(A: Matrix, ncols: int | None = None):
    """Return (U, D, V) with U*A*V = D, U and V unimodular, D diagonal with
    nonnegative entries d_1 | d_2 | ... ."""
    m, n = shape(A, ncols)
    D = [list(r) for r in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in D:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q*row_src
        rs, rd = D[src], D[dst]
        for c in range(n):
            if rs[c]:
                rd[c] -= q * rs[c]
        us, ud = U[src], U[dst]
        for c in range(m):
            if us[c]:
                ud[c] -= q * us[c]

    def add_col(dst, src, q):  # col_dst -= q*col_src
        for row in D:
            if row[src]:
                row[dst] -= q * row[src]
        for row in V:
            if row[src]:
                row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, D[i][t] // p)
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, D[t][j] // p)
                    if D[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t + 1, m):
                    if D[i][t] and (best is None or abs(D[i][t]) < best[0]):
                        best = (abs(D[i][t]), i, "r")
                for j in range(t + 1, n):
                    if D[t][j] and (best is None or abs(D[t][j]) < best[0]):
                        best = (abs(D[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = None
            for i in range(t + 1, m):
                row = D[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def snf_diagonal(D: Matrix) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


# ----------------------------------------------------- sparse Gauss-Jordan

class _Reduced:
    """Outcome of unit-pivot Gauss-Jordan elimination on sparse rows."""

    __slots__ = ("rows", "pivots", "leftover", "pivot_cols")

    def __init__(self, rows, pivots, leftover):
        self.rows = rows
        self.pivots = pivots  # list of (row index, col, pivot value +-1)
        self.leftover = leftover  # row indices never pivoted, nonzero
        self.pivot_cols = {c for _, c, _ in pivots}


def _sparse_rows(A: Matrix) -> list[dict]:
    return [{j: x for j, x in enumerate(row) if x} for row in A]


def _unit_reduce(rows: list[dict], frozen: frozenset = frozenset()) -> _Reduced:
    col_index: dict = defaultdict(set)
    for i, r in enumerate(rows):
        for c in r:
            col_index[c].add(i)
    active = {i for i, r in enumerate(rows) if r}
    pivots = []
    while True:
        best = None
        for i in active:
            r = rows[i]
            ln = len(r)
            if best is not None and ln >= best[0]:
                continue
            for c, x in r.items():
                if (x == 1 or x == -1) and c not in frozen:
                    cc = len(col_index[c])
                    if best is None or (ln, cc) < (best[0], best[3]):
                        best = (ln, i, c, cc)
        if best is None:
            break
        _, i, c, _ = best
        prow = rows[i]
        pv = prow[c]
        for j in list(col_index[c]):
            if j == i:
                continue
            r = rows[j]
            f = r[c] * pv  # pv = +-1 so r[c]/pv == r[c]*pv
            for cc, x in prow.items():
                nv = r.get(cc, 0) - f * x
                if nv:
                    if cc not in r:
                        col_index[cc].add(j)
                    r[cc] = nv
                else:
                    if cc in r:
                        del r[cc]
                        col_index[cc].discard(j)
            if not r:
                active.discard(j)
        active.discard(i)
        pivots.append((i, c, pv))
    leftover = sorted(i for i in active if any(c not in frozen for c in rows[i]))
    return _Reduced(rows, pivots, leftover)


def _leftover_block(red: _Reduced, ncols: int, frozen=frozenset()):
    cols = sorted({c for i in red.leftover for c in red.rows[i] if c not in frozen})
    block = [[red.rows[i].get(c, 0) for c in cols] for i in red.leftover]
    return cols, block


def elementary_divisors(A: Matrix, ncols: int | None = None) -> list[int]:
    """Nonzero Smith invariants of A in divisibility order."""
    if not A:
        return []
    red = _unit_reduce(_sparse_rows(A))
    units = [1] * len(red.pivots)
    _, block = _leftover_block(red, len(A[0]))
    if block:
        _, D, _ = smith_normal_form(block)
        units += snf_diagonal(D)
    return sorted(units)


def rank(A: Matrix) -> int:
    return len(elementary_divisors(A))


def solve(A: Matrix, b: Sequence[int], ncols: int | None = None):
    """An integer solution x of A x = b, or None."""
    return solve_many(A, [b], ncols)[0]


def solve_many(A: Matrix, bs: Sequence[Sequence[int]], ncols: int | None = None) -> list:
    """Integer solutions of A x = b for each b (None where unsolvable),
    sharing one elimination."""
    m, n = shape(A, ncols)
    if not bs:
        return []
    if m == 0:
        return [[0] * n for _ in bs]
    for b in bs:
        if len(b) != m:
            raise ValueError("dimension mismatch")
    rows = _sparse_rows(A)
    keys = [-1 - r for r in range(len(bs))]
    for r, b in enumerate(bs):
        key = keys[r]
        for i, bi in enumerate(b):
            if bi:
                rows[i][key] = bi
    frozen = frozenset(keys)
    red = _unit_reduce(rows, frozen)
    pivot_rows = {i for i, _, _ in red.pivots}
    dead = set()
    for i, r in enumerate(red.rows):
        if i not in pivot_rows and i not in red.leftover:
            for key in r:
                dead.add(key)
    cols, block = _leftover_block(red, n, frozen)
    if block:
        U, D, V = smith_normal_form(block)
        diag = [D[k][k] if k < len(cols) and k < len(D) else 0 for k in range(len(block))]
    out = []
    for key in keys:
        if key in dead:
            out.append(None)
            continue
        x = [0] * n
        ok = True
        if block:
            rhs = [red.rows[i].get(key, 0) for i in red.leftover]
            ub = matvec(U, rhs)
            y = [0] * len(cols)
            for k in range(len(ub)):
                d = diag[k]
                if d:
                    if ub[k] % d:
                        ok = False
                        break
                    y[k] = ub[k] // d
                elif ub[k]:
                    ok = False
                    break
            if not ok:
                out.append(None)
                continue
            z = matvec(V, y)
            for c, v in zip(cols, z):
                x[c] = v
        for i, c, pv in red.pivots:
            r = red.rows[i]
            acc = r.get(key, 0)
            for cc, a in r.items():
                if cc >= 0 and cc != c and x[cc]:
                    acc -= a * x[cc]
            x[c] = acc * pv
        out.append(x)
    return out


def kernel(A: Matrix, ncols: int | None = None) -> list[list[int]]:
    """A Z-basis of {x : A x = 0}."""
    m, n = shape(A, ncols)
    if m == 0:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    red = _unit_reduce(_sparse_rows(A))
    cols, block = _leftover_block(red, n)
    free = [c for c in range(n) if c not in red.pivot_cols]
    blockset = set(cols)
    basis_free: list[dict] = []
    for c in free:
        if c not in blockset:
            basis_free.append({c: 1})
    if block:
        _, D, V = smith_normal_form(block)
        r = len(snf_diagonal(D))
        for k in range(r, len(cols)):
            vec = {cols[t]: V[t][k] for t in range(len(cols)) if V[t][k]}
            basis_free.append(vec)
    out = []
    for y in basis_free:
        x = [0] * n
        for c, v in y.items():
            x[c] = v
        for i, c, pv in red.pivots:
            s = 0
            for cc, a in red.rows[i].items():
                if cc != c and x[cc]:
                    s += a * x[cc]
            x[c] = -s * pv
        out.append(x)
    return out


def columns(A: Matrix) -> list[list[int]]:
    return [list(c) for c in zip(*A)] if A else []


def in_span(gens: Sequence[Sequence[int]], v: Sequence[int], dim: int) -> bool:
    """Whether v lies in the Z-span of the vectors gens (all of length dim)."""
    if not any(v):
        return True
    if not gens:
        return False
    A = [[g[i] for g in gens] for i in range(dim)]
    return solve(A, v, len(gens)) is not None


def span_contains(big: Sequence[Sequence[int]], small: Iterable[Sequence[int]], dim: int) -> bool:
    if not big:
        return all(not any(v) for v in small)
    small = [list(v) for v in small if any(v)]
    if not small:
        return True
    A = [[g[i] for g in big] for i in range(dim)]
    return all(x is not None for x in solve_many(A, small, len(big)))


def quotient_invariants(basis: Sequence[Sequence[int]], sub: Sequence[Sequence[int]], dim: int):
    """(free rank, torsion list) of span(basis)/span(sub); sub must lie in
    span(basis) and basis must be linearly independent."""
    r = len(basis)
    if r == 0:
        return 0, []
    A = [[g[i] for g in basis] for i in range(dim)]
    coords = solve_many(A, [list(v) for v in sub], r)
    if any(x is None for x in coords):
        raise ValueError("sublattice not contained in lattice")
    if not coords:
        return r, []
    M = [[c[i] for c in coords] for i in range(r)]
    divs = elementary_divisors(M)
    return r - len(divs), [d for d in divs if d > 1]


def lattice_basis(gens: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """A Z-basis of the span of gens."""
    gens = [list(g) for g in gens if any(g)]
    if not gens:
        return []
    A = [[g[i] for g in gens] for i in range(dim)]
    U, D, V = smith_normal_form(A)
    # A V = U^{-1} D, so the first r columns of A V span the image
    AV = matmul(A, V)
    r = len(snf_diagonal(D))
    return [[AV[i][k] for i in range(dim)] for k in range(r)]


def det_sign_free(A: Matrix) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def sylvester_signature(G: Matrix) -> int:
    """Signature of a symmetric rational matrix by exact congruence
    diagonalisation."""
    from fractions import Fraction

    n = len(G)
    M = [[Fraction(x) for x in row] for row in G]
    pos = neg = 0
    idx = list(range(n))
    while idx:
        piv = next((i for i in idx if M[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in idx for j in idx if i < j and M[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace e_i by e_i + e_j, which makes the diagonal entry 2 M_ij
            for k in range(n):
                M[i][k] += M[j][k]
            for k in range(n):
                M[k][i] += M[k][j]
            piv = i
        p = M[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in idx if i != piv]
        for i in rest:
            f = M[i][piv] / p
            if f:
                for k in rest:
                    M[i][k] -= f * M[piv][k]
        for i in rest:
            M[i][piv] = M[piv][i] = Fraction(0)
        idx = rest
    return pos - neg


def gcd_list(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
