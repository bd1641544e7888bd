"""Integral automorphism groups, isometry testing, orbit decomposition.

aut_order follows the classical backtracking scheme: images of basis vectors
are searched among equal-norm short vectors under partial Gram compatibility,
and the group order is the product of orbit sizes along the pointwise
stabilizer chain of the basis, so the group is never materialized.  Orbits at
each level are closed under the generators found so far (and found dead
candidates are closed too), which keeps the number of completion searches
small.

is_isometric runs the same completion search between two forms, after cheap
invariant rejection (det, parity, level, theta slice) and per-vector
fingerprints including a Bacher-style neighborhood-graph invariant that
separates otherwise theta-identical pairs quickly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rational
from .enumeration import _Budget, node_budget, short_vectors
from .errors import EmptySolutionSet
from .forms import QuadForm

_FP_CACHE_KEY = "_iso_fingerprints"


def _pools(form: QuadForm, norms_needed, budget):
    """Candidate vector arrays and their Gram products, per needed norm."""
    top = max(norms_needed)
    sv = short_vectors(form, top, budget=budget)
    g_np = np.array(form.as_lists(), dtype=np.int64)
    pools = {}
    for n in sorted(set(norms_needed)):
        vecs = sv.vectors_norm(n)
        pools[n] = (vecs, vecs @ g_np)
    return pools, g_np


def _root_component_sizes(vecs, g_np):
    """Sorted connected-component sizes of the root graph.

    Vertices are the norm-2 vectors, edges join pairs with nonzero inner
    product; the size multiset is an isometry invariant and separates direct
    sums from irreducible root systems that share every counting invariant.
    """
    k = vecs.shape[0]
    if k == 0:
        return ()
    adj = (vecs @ g_np @ vecs.T) != 0
    seen = np.zeros(k, dtype=bool)
    sizes = []
    for i in range(k):
        if seen[i]:
            continue
        comp = np.zeros(k, dtype=bool)
        frontier = np.zeros(k, dtype=bool)
        frontier[i] = True
        while frontier.any():
            comp |= frontier
            frontier = adj[frontier].any(axis=0) & ~comp
        seen |= comp
        sizes.append(int(comp.sum()))
    return tuple(sorted(sizes))


def _fingerprints(form: QuadForm, pools, g_np):
    """Per-vector invariants, grouped by norm.

    For each pool vector: the histogram of inner products against the norm-2
    pool, and for norm-2 vectors also (size, edges, triangles) of the graph on
    {w: <v,w> = 1} with adjacency <w,w'> = 1.  Isometries preserve all of it.
    """
    cache = form.__dict__.setdefault(_FP_CACHE_KEY, {})
    two = pools.get(2)
    out = {}
    for n, (vecs, vg) in pools.items():
        key = ("fp", n)
        if key in cache:
            out[n] = cache[key]
            continue
        if two is None or two[0].shape[0] == 0:
            fps = [(int(n),)] * vecs.shape[0]
        else:
            roots = two[0]
            prods = vg @ roots.T  # (count, nroots)
            fps = []
            for i in range(vecs.shape[0]):
                row = prods[i]
                vals, cnts = np.unique(row, return_counts=True)
                hist = tuple(zip(vals.tolist(), cnts.tolist()))
                if n == 2:
                    nb = roots[row == 1]
                    if nb.shape[0]:
                        adj = (nb @ g_np @ nb.T) == 1
                        deg = adj.sum()
                        tri = int(np.trace((adj.astype(np.int64) @ adj) * adj)) // 6
                        fps.append((int(n), hist, int(nb.shape[0]), int(deg) // 2, tri))
                    else:
                        fps.append((int(n), hist, 0, 0, 0))
                else:
                    fps.append((int(n), hist))
            fps = list(fps)
        cache[key] = fps
        out[n] = fps
    return out


def _complete(src_gram, pools, fixed, remaining, cand, budget, src_fp=None, tgt_fp=None):
    """Find one assignment of images for `remaining` source indices.

    fixed: list of (src_index, image row vector); cand: dict src_index ->
    integer index array into pools[diag]. Returns dict src->vec or None.
    """
    if not remaining:
        return {i: v for i, v in fixed}
    # most constrained first
    pick = min(remaining, key=lambda s: cand[s].shape[0])
    inds = cand[pick]
    if inds.shape[0] == 0:
        return None
    n_pick = src_gram[pick][pick]
    vecs, vg = pools[n_pick]
    budget.spend(inds.shape[0])
    rest = [s for s in remaining if s != pick]
    for idx in inds.tolist():
        v = vecs[idx]
        gv = vg[idx]  # v^T G, used to filter the others
        if src_fp is not None and tgt_fp[n_pick][idx] != src_fp[pick]:
            continue
        new_cand = {}
        ok = True
        for s in rest:
            ns = src_gram[s][s]
            pv, _ = pools[ns]
            want = src_gram[s][pick]
            sel = cand[s]
            mask = (pv[sel] @ gv) == want
            kept = sel[mask]
            if kept.shape[0] == 0:
                ok = False
                break
            new_cand[s] = kept
        if not ok:
            continue
        res = _complete(src_gram, pools, fixed + [(pick, v)], rest, new_cand, budget,
                        src_fp, tgt_fp)
        if res is not None:
            return res
    return None


def _base_candidates(src_gram, pools, m):
    """Unconstrained candidate index arrays for every source index."""
    return {s: np.arange(pools[src_gram[s][s]][0].shape[0]) for s in range(m)}


def _chain_order_and_generators(form: QuadForm, budget):
    """(group order, generating matrices) for O_A(Z) on the reduced form."""
    tracker = _Budget(node_budget(budget))
    gred, _ = form.reduced
    m = form.dim
    red = QuadForm(gred)
    diag = [gred[i][i] for i in range(m)]
    pools, g_np = _pools(red, diag, budget)
    src = [list(r) for r in gred]
    neg = -np.eye(m, dtype=np.int64)
    gens: list[np.ndarray] = [neg]
    order = 1

    # candidate index arrays under the prefix e_0..e_{i-1} constraints
    def prefix_cand(i):
        out = {}
        for s in range(i, m):
            vecs, vg = pools[src[s][s]]
            mask = np.ones(vecs.shape[0], dtype=bool)
            for j in range(i):
                mask &= vg[:, j] == src[s][j]
            out[s] = np.nonzero(mask)[0]
        return out

    basis = np.eye(m, dtype=np.int64)
    for i in range(m):
        cand_i = prefix_cand(i)
        vecs_i, _ = pools[src[i][i]]
        todo = cand_i[i]
        level_gens = [g for g in gens if all((g @ basis[j] == basis[j]).all() for j in range(i))]
        orbit = {tuple(basis[i].tolist())}
        dead: set = set()

        def close(seed_set):
            frontier = list(seed_set)
            while frontier:
                w = frontier.pop()
                wv = np.array(w, dtype=np.int64)
                for g in level_gens:
                    img = tuple((g @ wv).tolist())
                    if img not in seed_set:
                        seed_set.add(img)
                        frontier.append(img)

        close(orbit)
        for idx in todo.tolist():
            v = vecs_i[idx]
            tv = tuple(v.tolist())
            if tv in orbit or tv in dead:
                continue
            fixed = [(j, basis[j]) for j in range(i)] + [(i, v)]
            rest = [s for s in range(i + 1, m)]
            cand = {}
            feasible = True
            vg_row = v @ g_np
            for s in rest:
                pv, _ = pools[src[s][s]]
                sel = cand_i[s]
                mask = (pv[sel] @ vg_row) == src[s][i]
                cand[s] = sel[mask]
                if cand[s].shape[0] == 0:
                    feasible = False
                    break
            res = _complete(src, pools, fixed, rest, cand, tracker) if feasible else None
            if res is None:
                dead.add(tv)
                close(dead)
            else:
                gmat = np.stack([res[j] for j in range(m)], axis=1)  # columns are images
                gens.append(gmat)
                level_gens.append(gmat)
                orbit.add(tv)
                close(orbit)
        order *= len(orbit)
    return order, gens


def aut_order(form: QuadForm, budget=None) -> int:
    """|O_A(Z)| via the stabilizer-chain backtracking search."""
    cached = form.__dict__.get("_aut_order")
    if cached is not None:
        return cached
    order, gens = _chain_order_and_generators(form, budget)
    form.__dict__["_aut_order"] = order
    form.__dict__["_aut_gens_reduced"] = gens
    return order


def automorphism_generators(form: QuadForm, budget=None) -> list[np.ndarray]:
    """Generators of O_A(Z) in the original basis (columns = basis images)."""
    cached = form.__dict__.get("_aut_gens")
    if cached is not None:
        return cached
    aut_order(form, budget=budget)
    gens_red = form.__dict__["_aut_gens_reduced"]
    _, u = form.reduced
    u_np = np.array(u, dtype=np.int64)
    u_inv = np.array(
        [[int(x) for x in row] for row in rational.fraction_inverse([list(r) for r in u])],
        dtype=np.int64)
    g_np = np.array(form.as_lists(), dtype=np.int64)
    out = []
    for g in gens_red:
        w = u_np @ g @ u_inv
        assert (w.T @ g_np @ w == g_np).all()
        out.append(w)
    form.__dict__["_aut_gens"] = out
    return out


def is_isometric(f1: QuadForm, f2: QuadForm, budget=None):
    """An integer matrix W with W^T G1 W = G2, or None.

    Cheap invariants first, then fingerprint-pruned completion search on the
    LLL-reduced forms.
    """
    if f1.dim != f2.dim or f1.det != f2.det or f1.parity != f2.parity or f1.level != f2.level:
        return None
    b = _Budget(node_budget(budget))
    g1red, u1 = f1.reduced
    g2red, u2 = f2.reduced
    r1, r2 = QuadForm(g1red), QuadForm(g2red)
    m = f1.dim
    top = max(max(g1red[i][i] for i in range(m)), 2)
    sv1 = short_vectors(r1, top, budget=budget)
    sv2 = short_vectors(r2, top, budget=budget)
    if not np.array_equal(np.bincount(sv1.norms, minlength=top + 1),
                          np.bincount(sv2.norms, minlength=top + 1)):
        return None
    if (_root_component_sizes(sv1.vectors_norm(2), np.array(g1red, dtype=np.int64))
            != _root_component_sizes(sv2.vectors_norm(2), np.array(g2red, dtype=np.int64))):
        return None

    diag = [g1red[i][i] for i in range(m)]
    pools2, g2_np = _pools(r2, diag, budget)
    pools1, g1_np = _pools(r1, diag, budget)
    fp2 = _fingerprints(r2, pools2, g2_np)
    fp1 = _fingerprints(r1, pools1, g1_np)
    # multiset comparison per norm class: a mismatch proves non-isometry
    for n in fp1:
        if sorted(map(repr, fp1[n])) != sorted(map(repr, fp2.get(n, []))):
            return None
    src = [list(r) for r in g1red]
    src_fp = {}
    for i in range(m):
        vecs, _ = pools1[src[i][i]]
        # the i-th basis vector of r1 is itself in pool1; find its fingerprint
        hit = np.nonzero((vecs == np.eye(m, dtype=np.int64)[i]).all(axis=1))[0]
        if hit.shape[0]:
            src_fp[i] = fp1[src[i][i]][int(hit[0])]
        else:
            src_fp[i] = None
    if any(v is None for v in src_fp.values()):
        src_fp = None

    cand = _base_candidates(src, pools2, m)
    res = _complete(src, pools2, [], list(range(m)), cand, b,
                    src_fp=src_fp, tgt_fp=fp2 if src_fp is not None else None)
    if res is None:
        return None
    x = np.stack([res[j] for j in range(m)], axis=1)
    # X columns live in r2 coordinates and satisfy X^T G2red X = G1red, so X
    # is unimodular; W = U1 X^{-1} U2^{-1} then gives W^T G1 W = G2.
    x_inv = np.array(
        [[int(v) for v in row] for row in rational.fraction_inverse(x.tolist())],
        dtype=np.int64)
    u1_np = np.array(u1, dtype=np.int64)
    u2_inv = np.array(
        [[int(v) for v in row] for row in rational.fraction_inverse([list(r) for r in u2])],
        dtype=np.int64)
    w = u1_np @ x_inv @ u2_inv
    g1m = np.array(f1.as_lists(), dtype=np.int64)
    g2m = np.array(f2.as_lists(), dtype=np.int64)
    assert (w.T @ g1m @ w == g2m).all()
    return w


@dataclass(frozen=True)
class OrbitDecomposition:
    form: QuadForm
    n: int
    representatives: np.ndarray   # (k, m)
    orbit_sizes: tuple[int, ...]
    stabilizer_orders: tuple[int, ...]
    aut_order: int
    vectors: np.ndarray           # all norm-n vectors, lexicographic
    member_index: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.orbit_sizes)

    def orbit_vectors(self, i: int) -> np.ndarray:
        return self.vectors[list(self.member_index[i])]


def orbit_decompose(form: QuadForm, n: int, budget=None) -> OrbitDecomposition:
    """Decompose {x : x^T A x = n} into O_A(Z) orbits.

    Representatives are the lexicographically smallest member of each orbit;
    stabilizer orders come from orbit-stabilizer.
    """
    sv = short_vectors(form, n, budget=budget)
    vecs = sv.vectors_norm(int(n))
    if vecs.shape[0] == 0:
        raise EmptySolutionSet(f"no vectors of norm {n}")
    total = aut_order(form, budget=budget)
    gens = automorphism_generators(form, budget=budget)
    index = {tuple(v.tolist()): i for i, v in enumerate(vecs)}
    seen = np.zeros(vecs.shape[0], dtype=bool)
    reps = []
    sizes = []
    stabs = []
    member_lists = []
    for i in range(vecs.shape[0]):
        if seen[i]:
            continue
        frontier = [i]
        seen[i] = True
        members = [i]
        while frontier:
            j = frontier.pop()
            v = vecs[j]
            for g in gens:
                img = tuple((g @ v).tolist())
                k = index[img]
                if not seen[k]:
                    seen[k] = True
                    members.append(k)
                    frontier.append(k)
        size = len(members)
        if total % size:
            raise AssertionError("orbit size does not divide the group order")
        reps.append(vecs[min(members)])
        sizes.append(size)
        stabs.append(total // size)
        member_lists.append(tuple(sorted(members)))
    return OrbitDecomposition(form, int(n), np.stack(reps), tuple(sizes), tuple(stabs),
                              total, vecs, tuple(member_lists))
