"""Short vector enumeration and representation counting.

The enumerator is a Fincke-Pohst tree walk over an LLL-reduced basis.  All
pruning bounds are exact: the rational LDL^T data is pre-scaled by a common
denominator so every per-node quantity is a Python integer, and candidate
ranges per level come from integer square roots.  No floating point is
involved anywhere in a count.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import isqrt

import numpy as np

from . import rational
from .errors import BudgetExceeded, NotIntegral, NotSymmetric, TargetNotPositive
from .forms import QuadForm, validate_form

DEFAULT_BUDGET = 10 ** 9
_BUDGET_ENV = "GENUSVAR_NODE_BUDGET"

_SHORT_CACHE: dict = {}


def node_budget(budget=None) -> int:
    if budget is not None:
        return int(budget)
    return int(os.environ.get(_BUDGET_ENV, DEFAULT_BUDGET))


@dataclass(frozen=True)
class RepSet:
    """All nonzero lattice vectors of norm <= bound, in lexicographic order."""

    form: QuadForm
    bound: int
    vectors: np.ndarray   # (count, dim) int64
    norms: np.ndarray     # (count,) int64
    nodes: int

    def __len__(self):
        return int(self.vectors.shape[0])

    def count_norm(self, n: int) -> int:
        return int(np.count_nonzero(self.norms == n))

    def vectors_norm(self, n: int) -> np.ndarray:
        return self.vectors[self.norms == n]


@dataclass(frozen=True)
class RootProfile:
    """Counts of vectors of norm 1 and norm 2."""

    norm1: int
    norm2: int

    def as_tuple(self):
        return (self.norm1, self.norm2)


class _Budget:
    __slots__ = ("cap", "used")

    def __init__(self, cap):
        self.cap = cap
        self.used = 0

    def spend(self, n=1):
        self.used += n
        if self.used > self.cap:
            raise BudgetExceeded(f"enumeration budget of {self.cap} nodes exhausted",
                                 nodes=self.used)


def _prepared(form: QuadForm):
    """Scaled integer LDL data for the reduced Gram (cached on the form)."""
    key = "_enum_prepared"
    cached = form.__dict__.get(key)
    if cached is not None:
        return cached
    gred, u = form.reduced
    m = form.dim
    L, d = rational.ldl([list(r) for r in gred])
    den = [1] * m
    for i in range(m):
        for j in range(i + 1, m):
            den[i] = rational.lcm(den[i], L[j][i].denominator)
    il = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            il[i][j] = int(L[j][i] * den[i])
    dd = [d[i].denominator * den[i] * den[i] for i in range(m)]
    scale = rational.lcm(*dd) if m else 1
    f = [int(d[i].numerator) * (scale // dd[i]) for i in range(m)]
    tails = [[(h, il[h][i]) for h in range(i) if il[h][i]] for i in range(m)]
    u_np = np.array(u, dtype=np.int64)
    data = (m, den, f, scale, tails, u_np)
    form.__dict__[key] = data
    return data


def _enumerate(form: QuadForm, bound: int, budget: _Budget, task_count: int = 1):
    """Return (coords list as flat int64 array, norms int64 array).

    Coordinates are in the reduced basis; the caller maps them back.
    """
    from array import array

    m, den, f, scale, tails, _ = _prepared(form)
    coords = array("q")
    norms_arr = array("q")
    if bound <= 0:
        return coords, norms_arr
    bound_scaled = bound * scale
    x = [0] * m
    c = [0] * m
    spend = budget.spend

    def rec(i, t):
        fi = f[i]
        deni = den[i]
        ci = c[i]
        s = isqrt(t // fi)
        lo = -((s + ci) // deni)
        hi = (s - ci) // deni
        if lo > hi:
            return
        spend(hi - lo + 1)
        tail = tails[i]
        if i == 0:
            for xi in range(lo, hi + 1):
                w = xi * deni + ci
                t2 = t - fi * w * w
                ns = bound_scaled - t2
                if ns:
                    x[0] = xi
                    coords.extend(x)
                    norms_arr.append(ns // scale)
            return
        for xi in range(lo, hi + 1):
            w = xi * deni + ci
            t2 = t - fi * w * w
            x[i] = xi
            if xi:
                for h, coef in tail:
                    c[h] += coef * xi
            rec(i - 1, t2)
            if xi:
                for h, coef in tail:
                    c[h] -= coef * xi

    top = m - 1
    if m == 1:
        rec(0, bound_scaled)
        return coords, norms_arr
    # split the top level range into task_count chunks; the merged result is
    # independent of the partitioning (tested) because each (level, value)
    # subtree is enumerated identically.
    fi = f[top]
    s = isqrt(bound_scaled // fi)
    deni = den[top]
    lo = -(s // deni)
    hi = s // deni
    if lo > hi:
        return coords, norms_arr
    total = hi - lo + 1
    tasks = max(1, min(int(task_count), total))
    edges = [lo + (total * t) // tasks for t in range(tasks)] + [hi + 1]
    tail = tails[top]
    for t_index in range(tasks):
        for xi in range(edges[t_index], edges[t_index + 1]):
            spend()
            w = xi * deni
            t2 = bound_scaled - fi * w * w
            if t2 < 0:
                continue
            x[top] = xi
            if xi:
                for h, coef in tail:
                    c[h] += coef * xi
            rec(top - 1, t2)
            if xi:
                for h, coef in tail:
                    c[h] -= coef * xi
    return coords, norms_arr


def short_vectors(form: QuadForm, bound: int, budget=None, task_count: int = 1) -> RepSet:
    """All x != 0 with x^T A x <= bound, sorted lexicographically."""
    bound = int(bound)
    key = (form.gram, bound)
    hit = _SHORT_CACHE.get(key)
    if hit is not None:
        return hit
    b = _Budget(node_budget(budget))
    coords, norms_arr = _enumerate(form, bound, b, task_count)
    m = form.dim
    u_np = _prepared(form)[5]
    if len(norms_arr) == 0:
        vectors = np.zeros((0, m), dtype=np.int64)
        norms = np.zeros((0,), dtype=np.int64)
    else:
        reduced_coords = np.frombuffer(coords, dtype=np.int64).reshape(-1, m)
        vectors = reduced_coords @ u_np.T
        norms = np.frombuffer(norms_arr, dtype=np.int64)
        order = np.lexsort(vectors.T[::-1])
        vectors = np.ascontiguousarray(vectors[order])
        norms = np.ascontiguousarray(norms[order])
    out = RepSet(form, bound, vectors, norms, b.used)
    _SHORT_CACHE[key] = out
    return out


def rep_count(form: QuadForm, n: int, budget=None) -> int:
    """R_A(n): number of x with x^T A x = n (n >= 1)."""
    n = int(n)
    if n <= 0:
        raise TargetNotPositive(f"representation target must be positive, got {n}")
    return short_vectors(form, n, budget=budget).count_norm(n)


_NORM_CACHE: dict = {}


def norm_vectors(form: QuadForm, n: int, budget=None) -> np.ndarray:
    """All x with x^T A x = n exactly, without sweeping the lower norms.

    For a large isolated norm this enumerates only the target shell (as a
    one-column representation search), which is far cheaper than the full
    ball that short_vectors walks.  Rows are sorted lexicographically.
    """
    n = int(n)
    if n <= 0:
        raise TargetNotPositive(f"representation target must be positive, got {n}")
    swept = _SHORT_CACHE.get((form.gram, n))
    if swept is not None:
        return swept.vectors_norm(n)
    key = (form.gram, n)
    hit = _NORM_CACHE.get(key)
    if hit is not None:
        return hit
    mats = rep_matrices(form, [[n]], budget=budget)
    if mats:
        vectors = np.array([mat[:, 0] for mat in mats], dtype=np.int64)
        order = np.lexsort(vectors.T[::-1])
        vectors = np.ascontiguousarray(vectors[order])
    else:
        vectors = np.zeros((0, form.dim), dtype=np.int64)
    _NORM_CACHE[key] = vectors
    return vectors


def root_vectors(form: QuadForm, budget=None) -> RootProfile:
    """Counts of norm-1 and norm-2 vectors."""
    sv = short_vectors(form, 2, budget=budget)
    return RootProfile(sv.count_norm(1), sv.count_norm(2))


def _validate_target(target):
    if isinstance(target, QuadForm):
        return [list(r) for r in target.as_lists()]
    rows = [list(r) for r in target]
    n = len(rows)
    if n == 0:
        raise TargetNotPositive("empty target")
    for row in rows:
        if len(row) != n:
            raise NotSymmetric("target matrix is not square")
        for xx in row:
            if xx != int(xx):
                raise NotIntegral(f"non-integer target entry {xx!r}")
    b = [[int(x) for x in row] for row in rows]
    for i in range(n):
        for j in range(i):
            if b[i][j] != b[j][i]:
                raise NotSymmetric("target matrix is not symmetric")
    try:
        rational.ldl(b)
    except ValueError:
        raise TargetNotPositive("target matrix is not positive definite") from None
    return b


def rep_matrices(form: QuadForm, target, budget=None) -> list[np.ndarray]:
    """All integer X (m x n) with X^T A X = B, column-extension backtracking.

    Columns are filled in increasing order of the target diagonal; the result
    list is sorted by the flattened matrix, so output order is deterministic.
    """
    b = _validate_target(target)
    n = len(b)
    m = form.dim
    if n > m:
        return []
    budget_obj = _Budget(node_budget(budget))
    maxdiag = max(b[j][j] for j in range(n))
    sv = short_vectors(form, maxdiag, budget=budget)
    a_np = np.array(form.as_lists(), dtype=np.int64)
    cand = {}
    for j in range(n):
        nj = b[j][j]
        if nj not in cand:
            cand[nj] = sv.vectors_norm(nj)
        if cand[nj].shape[0] == 0:
            return []
    order = sorted(range(n), key=lambda j: (b[j][j], j))
    results = []
    chosen: list[np.ndarray] = []

    def extend(t):
        j = order[t]
        pool = cand[b[j][j]]
        for j_prev_pos in range(t):
            j_prev = order[j_prev_pos]
            want = b[j][j_prev]
            mask = (pool @ (a_np @ chosen[j_prev_pos])) == want
            pool = pool[mask]
            if pool.shape[0] == 0:
                return
        budget_obj.spend(max(1, pool.shape[0]))
        for v in pool:
            chosen.append(v)
            if t + 1 == n:
                x = np.zeros((m, n), dtype=np.int64)
                for pos, col in enumerate(order):
                    x[:, col] = chosen[pos]
                results.append(x)
            else:
                extend(t + 1)
            chosen.pop()

    extend(0)
    results.sort(key=lambda xm: tuple(xm.flatten()))
    return results
