"""Root vectors of norm 1 and 2: counts, the norm-1 splitting, orthogonal sets.

The norm-1 vectors of a positive definite integral form are pairwise
orthogonal (Cauchy-Schwarz forces integer pairings in {-1, 0, 1}), so their
span V restricts the form to an identity block and Z^m decomposes as the
orthogonal direct sum of V and its exact integral complement.  The analysis
here certifies that decomposition and audits the size bounds

    #(norm 1) <= 2m        #(norm 2) <= 10 m^2

which every positive definite integral form satisfies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import rational
from .enumeration import node_budget, short_vectors
from .errors import BudgetExceeded, RootSplittingError
from .forms import QuadForm

IntRows = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RootAnalysis:
    """Summary of the root structure of one form.

    ``splitting`` holds integer row bases (v_basis, v_perp_basis) with
    Z^m = V (+) V_perp, V the span of the norm-1 vectors.
    ``max_orthogonal_norm2`` is a maximum-size set of pairwise orthogonal
    norm-2 vectors (one per +- pair), or None when it was not requested.
    """

    dim: int
    norm1_count: int
    norm2_count: int
    span_rank_norm1: int
    splitting: tuple[IntRows, IntRows]
    max_orthogonal_norm2: Optional[IntRows]
    bounds_ok: bool


def _root_arrays(form: QuadForm, budget):
    reps = short_vectors(form, 2, budget=budget)
    n1 = reps.vectors_norm(1)
    n2 = reps.vectors_norm(2)
    return n1, n2


def _sign_representatives(vecs: np.ndarray) -> np.ndarray:
    """One vector out of each +-v pair (the lexicographically larger one)."""
    if vecs.shape[0] == 0:
        return vecs
    keep = []
    for v in vecs:
        for x in v:
            if x > 0:
                keep.append(v)
                break
            if x < 0:
                break
    return np.array(keep, dtype=np.int64) if keep else vecs[:0]


def norm1_span_analysis(form: QuadForm, budget=None) -> RootAnalysis:
    """Split Z^m into the span V of the norm-1 vectors and its complement.

    Asserts the structural facts along the way: norm-1 vectors are pairwise
    orthogonal, the form restricted to V is an identity block, every norm-2
    vector lies wholly in V or wholly in V_perp, and [Z^m : V (+) V_perp] = 1.
    A failed index check raises RootSplittingError (it would mean the computed
    bases are wrong, not that the form is unusual).
    """
    m = form.dim
    n1, n2 = _root_arrays(form, budget)
    gram_np = np.array(form.as_lists(), dtype=np.int64)

    v_basis = _sign_representatives(n1)
    p = v_basis.shape[0]
    if p:
        pairings = v_basis @ gram_np @ v_basis.T
        assert (pairings == np.eye(p, dtype=np.int64)).all(), \
            "norm-1 vectors must be pairwise orthogonal"

    if p == 0:
        v_rows: IntRows = ()
        perp_rows = tuple(tuple(int(x) for x in row) for row in np.eye(m, dtype=np.int64))
    else:
        v_rows = tuple(tuple(int(x) for x in row) for row in v_basis)
        # V_perp = integer kernel of x -> (v_i^T A) x
        constraints = (v_basis @ gram_np).tolist()
        kernel = rational.integer_kernel(constraints)
        perp_rows = tuple(tuple(int(x) for x in row) for row in kernel)

    stacked = [list(r) for r in v_rows] + [list(r) for r in perp_rows]
    if len(stacked) != m:
        raise RootSplittingError(
            f"splitting ranks {p} + {len(perp_rows)} != {m}")
    index = rational.sublattice_index(stacked)
    if index != 1:
        raise RootSplittingError(
            f"V (+) V_perp has index {index} in Z^m; "
            f"V basis {v_rows}, complement basis {perp_rows}")

    if p and n2.shape[0]:
        # each norm-2 vector is entirely inside V or entirely inside V_perp
        coeffs = n2 @ gram_np @ v_basis.T       # integer projections onto V
        sq = (coeffs * coeffs).sum(axis=1)
        assert set(np.unique(sq)) <= {0, 2}, \
            "norm-2 vector with a mixed V / V_perp decomposition"

    return RootAnalysis(
        dim=m,
        norm1_count=int(n1.shape[0]),
        norm2_count=int(n2.shape[0]),
        span_rank_norm1=p,
        splitting=(v_rows, perp_rows),
        max_orthogonal_norm2=None,
        bounds_ok=_bounds_ok(m, int(n1.shape[0]), int(n2.shape[0])),
    )


def _bounds_ok(m: int, c1: int, c2: int) -> bool:
    return c1 <= 2 * m and c2 <= 10 * m * m


def orthogonal_root_basis(form: QuadForm, budget=None) -> IntRows:
    """Maximum-size set of pairwise orthogonal norm-2 vectors (one per pair).

    Branch and bound over the orthogonality graph of the sign-representative
    norm-2 vectors, followed by an explicit maximality pass: no norm-2 vector
    of the form is orthogonal to everything in the returned set.
    """
    _, n2 = _root_arrays(form, budget)
    if n2.shape[0] == 0:
        return ()
    gram_np = np.array(form.as_lists(), dtype=np.int64)
    reps = _sign_representatives(n2)
    pair = reps @ gram_np @ reps.T
    ortho = pair == 0
    n = reps.shape[0]
    # visit high-degree lines first: frames live inside the densest part
    order = np.argsort(-(ortho.sum(axis=1)))
    ortho = ortho[np.ix_(order, order)]
    reps = reps[order]

    limit = node_budget(budget)
    nodes = 0
    best: list[int] = []
    chosen: list[int] = []

    def extend(cand: np.ndarray) -> None:
        nonlocal nodes, best
        nodes += 1
        if nodes > limit:
            raise BudgetExceeded("orthogonal set search exceeded node budget",
                                 nodes=nodes)
        live = np.nonzero(cand)[0]
        if len(chosen) + live.shape[0] <= len(best):
            return
        if live.shape[0] == 0:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        i = int(live[0])
        chosen.append(i)
        extend(cand & ortho[i])
        chosen.pop()
        cand = cand.copy()
        cand[i] = False
        extend(cand)

    extend(np.ones(n, dtype=bool))
    out = reps[np.array(sorted(best), dtype=np.int64)]

    certify = out @ gram_np @ n2.T              # pairings against every root
    assert not (certify == 0).all(axis=0).any(), \
        "returned orthogonal set is extendable"
    return tuple(tuple(int(x) for x in row) for row in out)


def verify_root_bounds(form: QuadForm, budget=None) -> RootAnalysis:
    """Full root analysis: splitting, maximum orthogonal set, size bounds.

    bounds_ok False would indicate a bug in the enumeration, not a property
    of the input; the counts are therefore reported rather than raised on.
    """
    base = norm1_span_analysis(form, budget=budget)
    ortho = orthogonal_root_basis(form, budget=budget)
    if base.span_rank_norm1 == 0 and len(ortho) == form.dim:
        # rootless-in-norm-1 forms carrying a full orthogonal norm-2 frame
        # obey the sharper count bound
        m = form.dim
        assert base.norm2_count <= 6 * m * m - 4 * m
    return RootAnalysis(
        dim=base.dim,
        norm1_count=base.norm1_count,
        norm2_count=base.norm2_count,
        span_rank_norm1=base.span_rank_norm1,
        splitting=base.splitting,
        max_orthogonal_norm2=ortho,
        bounds_ok=base.bounds_ok,
    )
