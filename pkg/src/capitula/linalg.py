"""Small exact integer linear algebra: HNF, SNF, determinants, LLL.

All matrices are lists of row lists.  Dimensions here are tiny (a few
dozen at most), so the implementations favour clarity over asymptotics;
everything is exact (ints and Fractions, never floats).
"""

from __future__ import annotations

import math
from fractions import Fraction


def hnf_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    Returns an upper-triangular-by-pivot basis: pivots positive, entries
    above each pivot reduced into [0, pivot).  Zero rows are dropped.
    """
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return []
    ncols = len(mat[0])
    rank = 0
    for c in range(ncols):
        # gather rows (below the settled block) with a nonzero in column c
        pivots = [i for i in range(rank, len(mat)) if mat[i][c]]
        if not pivots:
            continue
        while len(pivots) > 1:
            pivots.sort(key=lambda i: abs(mat[i][c]))
            i0 = pivots[0]
            for i in pivots[1:]:
                q = mat[i][c] // mat[i0][c]
                mat[i] = [x - q * y for x, y in zip(mat[i], mat[i0])]
            pivots = [i for i in pivots if mat[i][c]]
        i0 = pivots[0]
        mat[rank], mat[i0] = mat[i0], mat[rank]
        if mat[rank][c] < 0:
            mat[rank] = [-x for x in mat[rank]]
        piv = mat[rank][c]
        for j in range(rank):
            q = mat[j][c] // piv
            if q:
                mat[j] = [x - q * y for x, y in zip(mat[j], mat[rank])]
        rank += 1
    return [r for r in mat[:rank]]


def det_bareiss(m: list[list[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free)."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


class _SmithWork:
    """State for the Smith reduction: matrix plus column transforms.

    Row operations touch only the matrix.  Column operations are mirrored
    on V (accumulating A_original * V) and on Vinv (accumulating the
    inverse), so that A_original restricted to the new coordinates is the
    diagonal we end with.
    """

    def __init__(self, a: list[list[int]], k: int):
        self.a = [list(r) for r in a]
        self.v = [[int(i == j) for j in range(k)] for i in range(k)]
        self.vinv = [[int(i == j) for j in range(k)] for i in range(k)]

    def swap_rows(self, i, j):
        self.a[i], self.a[j] = self.a[j], self.a[i]

    def swap_cols(self, i, j):
        for r in self.a:
            r[i], r[j] = r[j], r[i]
        for r in self.v:
            r[i], r[j] = r[j], r[i]
        self.vinv[i], self.vinv[j] = self.vinv[j], self.vinv[i]

    def addmul_row(self, dst, src, c):
        self.a[dst] = [x + c * y for x, y in zip(self.a[dst], self.a[src])]

    def addmul_col(self, dst, src, c):
        for r in self.a:
            r[dst] += c * r[src]
        for r in self.v:
            r[dst] += c * r[src]
        # (E^-1 applied on the left): row src of Vinv loses c * row dst
        self.vinv[src] = [x - c * y for x, y in zip(self.vinv[src], self.vinv[dst])]

    def negate_col(self, i):
        for r in self.a:
            r[i] = -r[i]
        for r in self.v:
            r[i] = -r[i]
        self.vinv[i] = [-x for x in self.vinv[i]]


def smith_normal_form(a: list[list[int]], ncols: int):
    """Smith normal form with column transforms.

    Returns (divisors, V, Vinv) where divisors is the full diagonal
    d_1 | d_2 | ... | d_ncols (ones included, zeros impossible here
    because callers always pass a full-rank relation lattice), and V,
    Vinv are the unimodular column transforms: A*V is diagonal in the
    new coordinates and Vinv undoes the coordinate change.
    """
    if not a:
        raise ValueError("empty relation matrix")
    w = _SmithWork(a, ncols)
    m = len(w.a)
    t = 0
    while t < min(m, ncols):
        # locate the smallest nonzero entry in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, ncols):
                if w.a[i][j] and (best is None or abs(w.a[i][j]) < best[0]):
                    best = (abs(w.a[i][j]), i, j)
        if best is None:
            raise ValueError("relation lattice is not full rank")
        _, bi, bj = best
        w.swap_rows(t, bi)
        if bj != t:
            w.swap_cols(t, bj)
        # clear row and column t; restart whenever a remainder shrinks the pivot
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if w.a[i][t]:
                    q = w.a[i][t] // w.a[t][t]
                    w.addmul_row(i, t, -q)
                    if w.a[i][t]:
                        w.swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, ncols):
                if w.a[t][j]:
                    q = w.a[t][j] // w.a[t][t]
                    w.addmul_col(j, t, -q)
                    if w.a[t][j]:
                        w.swap_cols(t, j)
                        dirty = True
        # divisibility: pivot must divide the whole trailing block
        piv = w.a[t][t]
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, ncols):
                if w.a[i][j] % piv:
                    offender = (i, j)
                    break
            if offender:
                break
        if offender:
            w.addmul_row(t, offender[0], 1)
            continue
        if piv < 0:
            w.negate_col(t)
        t += 1
    divisors = [w.a[i][i] for i in range(ncols)]
    # rows below ncols must have been annihilated for a full-rank lattice
    return divisors, w.v, w.vinv


def _round_half(f: Fraction) -> int:
    return (2 * f.numerator + f.denominator) // (2 * f.denominator)


def _gso(g: list[list[int]]):
    n = len(g)
    mu = [[Fraction(0)] * n for _ in range(n)]
    b = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(g[i][j])
            for l in range(j):
                s -= mu[i][l] * mu[j][l] * b[l]
            mu[i][j] = s / b[j]
        s = Fraction(g[i][i])
        for l in range(i):
            s -= mu[i][l] * mu[i][l] * b[l]
        b[i] = s
    return mu, b


def lll_reduce_gram(gram: list[list[int]], delta: Fraction = Fraction(99, 100)):
    """LLL-reduce a lattice given only its (integer, positive definite)
    Gram matrix.

    Returns (new_gram, U) with U unimodular and new_gram = U G U^T.  The
    Gram-Schmidt data is recomputed exactly in Fractions after every
    update; dimensions are small enough that this is cheap.
    """
    n = len(gram)
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def current_gram():
        gu = [[sum(u[i][l] * gram[l][c] for l in range(n)) for c in range(n)] for i in range(n)]
        return [[sum(gu[i][l] * u[j][l] for l in range(n)) for j in range(n)] for i in range(n)]

    g = current_gram()
    mu, b = _gso(g)
    k = 1
    while k < n:
        changed = False
        for j in range(k - 1, -1, -1):
            q = _round_half(mu[k][j])
            if q:
                u[k] = [x - q * y for x, y in zip(u[k], u[j])]
                changed = True
        if changed:
            g = current_gram()
            mu, b = _gso(g)
        if b[k] >= (delta - mu[k][k - 1] ** 2) * b[k - 1]:
            k += 1
        else:
            u[k], u[k - 1] = u[k - 1], u[k]
            g = current_gram()
            mu, b = _gso(g)
            k = max(k - 1, 1)
    return current_gram(), u
