"""Exact linear algebra over Q used by the core modules.

Everything here works on plain Python ints / fractions.Fraction and lists of
lists; sizes are desk scale (m <= 24), so clarity wins over cleverness.  No
floats anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Matrix = list[list[Fraction]]


def mat_copy(a):
    return [list(row) for row in a]


def identity_int(m: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(m)] for i in range(m)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    oi[j] += x * bt[j]
    return out


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


def mat_vec(a, v):
    return [sum(r[j] * v[j] for j in range(len(v))) for r in a]


def congruent(gram, u):
    """u^T * gram * u for integer matrices."""
    return mat_mul(mat_transpose(u), mat_mul(gram, u))


def bareiss_det(a) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    m = len(a)
    if m == 0:
        return 1
    a = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(m - 1):
        if a[k][k] == 0:
            for i in range(k + 1, m):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[m - 1][m - 1]


def fraction_inverse(a) -> Matrix:
    """Inverse of a square matrix by Gauss-Jordan over Fraction."""
    m = len(a)
    aug = [[Fraction(a[i][j]) for j in range(m)] + [Fraction(int(i == j)) for j in range(m)]
           for i in range(m)]
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[m:] for row in aug]


def ldl(gram) -> tuple[Matrix, list[Fraction]]:
    """A = L D L^T with L unit lower triangular, exact over Fraction.

    Raises ValueError on a non positive definite input (pivot <= 0).
    """
    m = len(gram)
    L = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    d: list[Fraction] = [Fraction(0)] * m
    a = [[Fraction(gram[i][j]) for j in range(m)] for i in range(m)]
    for j in range(m):
        dj = a[j][j] - sum(d[k] * L[j][k] * L[j][k] for k in range(j))
        if dj <= 0:
            raise ValueError("matrix not positive definite")
        d[j] = dj
        for i in range(j + 1, m):
            v = a[i][j] - sum(d[k] * L[i][k] * L[j][k] for k in range(j))
            L[i][j] = v / dj
    return L, d


def hnf(rows) -> list[list[int]]:
    """Row-style Hermite normal form (pivots positive, entries above reduced).

    Input rows may be any integers; returns the nonzero rows of the HNF.
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(a)):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            while a[i][c]:
                q = a[r][c] // a[i][c] if abs(a[i][c]) <= abs(a[r][c]) else 0
                if q:
                    a[r] = [x - q * y for x, y in zip(a[r], a[i])]
                a[r], a[i] = a[i], a[r]
            # after the loop a[i][c] == 0
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return [row for row in a[:r] if any(row)]


def integer_kernel(mat) -> list[list[int]]:
    """Basis of {x in Z^m : mat @ x = 0} (saturated lattice basis).

    mat is r x m integer.  Works by reducing [mat^T | I] and collecting the
    identity parts of rows whose left block vanished.
    """
    mt = mat_transpose(mat)          # m x r
    m = len(mt)
    r = len(mt[0]) if mt else 0
    aug = [list(mt[i]) + [int(i == j) for j in range(m)] for i in range(m)]

    # eliminate the left block column by column with integer row ops
    row = 0
    for c in range(r):
        piv = None
        for i in range(row, m):
            if aug[i][c]:
                piv = i
                break
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        for i in range(row + 1, m):
            while aug[i][c]:
                q = aug[row][c] // aug[i][c] if abs(aug[i][c]) <= abs(aug[row][c]) else 0
                if q:
                    aug[row] = [x - q * y for x, y in zip(aug[row], aug[i])]
                aug[row], aug[i] = aug[i], aug[row]
        row += 1
        if row == m:
            break
    out = []
    for i in range(m):
        if all(aug[i][c] == 0 for c in range(r)):
            out.append(aug[i][r:])
    return out


def sublattice_index(rows) -> int:
    """Index in Z^m of the lattice spanned by the given integer rows.

    Requires full rank m; returns |det| of the HNF.
    """
    h = hnf(rows)
    m = len(rows[0])
    if len(h) != m:
        raise ValueError("rows do not span a finite-index sublattice")
    idx = 1
    # pivots are the first nonzero entry of each HNF row
    for row in h:
        for x in row:
            if x:
                idx *= x
                break
    return idx


def lll_reduce_gram(gram, delta=Fraction(99, 100)) -> tuple[list[list[int]], list[list[int]]]:
    """Lattice reduction working directly on a Gram matrix.

    Returns (gram', U) with gram' = U^T gram U, U unimodular, gram' LLL
    reduced with parameter delta.  Exact rational arithmetic throughout.
    """
    m = len(gram)
    g = [[Fraction(gram[i][j]) for j in range(m)] for i in range(m)]
    u = identity_int(m)

    def gso():
        mu = [[Fraction(0)] * m for _ in range(m)]
        b = [Fraction(0)] * m
        for i in range(m):
            b[i] = g[i][i] - sum(mu[i][k] * mu[i][k] * b[k] for k in range(i))
            for j in range(i + 1, m):
                mu[j][i] = (g[j][i] - sum(mu[j][k] * mu[i][k] * b[k] for k in range(i))) / b[i]
        return mu, b

    def swap(k):
        g[k], g[k - 1] = g[k - 1], g[k]
        for row in g:
            row[k], row[k - 1] = row[k - 1], row[k]
        for row in u:
            row[k], row[k - 1] = row[k - 1], row[k]

    def translate(k, j, q):
        # basis op b_k <- b_k - q b_j
        if not q:
            return
        for t in range(m):
            g[k][t] -= q * g[j][t]
        for t in range(m):
            g[t][k] -= q * g[t][j]
        for row in u:
            row[k] -= q * row[j]

    mu, b = gso()
    k = 1
    while k < m:
        for j in range(k - 1, -1, -1):
            q = int((mu[k][j] + Fraction(1, 2)).__floor__())
            if q:
                translate(k, j, q)
                mu, b = gso()
        if b[k] >= (delta - mu[k][k - 1] ** 2) * b[k - 1]:
            k += 1
        else:
            swap(k)
            mu, b = gso()
            k = max(k - 1, 1)
    gi = [[int(g[i][j]) for j in range(m)] for i in range(m)]
    return gi, u


def lcm(*vals: int) -> int:
    out = 1
    for v in vals:
        out = out * v // gcd(out, v)
    return out
