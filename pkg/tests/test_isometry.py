"""Automorphism groups, isometry testing, and orbit decompositions.

The oracle for automorphism counts is an exhaustive sweep: pick every column
independently from the box of vectors of the right norm and keep the
assignments whose pairwise inner products reproduce the gram matrix.
"""

import itertools
import random

import numpy as np
import pytest

from conftest import box_vectors, conjugate, random_unimodular
from genusvar.errors import BudgetExceeded, EmptySolutionSet
from genusvar.forms import QuadForm, e8_form, identity_form, validate_form
from genusvar.isometry import (aut_order, automorphism_generators,
                               is_isometric, orbit_decompose)


def brute_aut_order(form: QuadForm) -> int:
    g = np.array(form.as_lists(), dtype=np.int64)
    m = form.dim
    pools = []
    for i in range(m):
        want = int(g[i][i])
        pool = [np.array(v, dtype=np.int64)
                for v, n in box_vectors(form, want) if n == want]
        pools.append(pool)
    count = 0
    for cols in itertools.product(*pools):
        x = np.stack(cols, axis=1)
        if np.array_equal(x.T @ g @ x, g):
            count += 1
    return count


def closure_order(gens, cap=10 ** 7) -> int:
    """Order of the matrix group generated by gens, by breadth-first closure."""
    m = gens[0].shape[0]
    ident = np.eye(m, dtype=np.int64)
    seen = {ident.tobytes()}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = g @ a
                key = b.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(b)
        frontier = nxt
        assert len(seen) <= cap
    return len(seen)


def test_aut_order_matches_brute_force():
    cases = [
        identity_form(2),
        identity_form(3),
        validate_form([[2, 1], [1, 2]]),
        validate_form([[2, 0], [0, 3]]),
        validate_form([[1, 0], [0, 2]]),
        validate_form([[2, 1, 0], [1, 2, 1], [0, 1, 4]]),
    ]
    for form in cases:
        assert aut_order(form) == brute_aut_order(form)


def test_aut_identity_forms():
    # signed permutation matrices: 2^m * m!
    import math
    for m in range(2, 7):
        assert aut_order(identity_form(m)) == 2 ** m * math.factorial(m)


def test_aut_e8(e8):
    assert aut_order(e8) == 696729600


def test_aut_conjugation_invariant():
    rng = random.Random(11)
    base = validate_form([[2, 1], [1, 2]])
    for _ in range(4):
        u = random_unimodular(2, rng)
        conj = validate_form(conjugate(base, u))
        assert aut_order(conj) == aut_order(base)


def test_generators_preserve_form_and_generate():
    for form in (identity_form(3), validate_form([[2, 1], [1, 2]]),
                 identity_form(4)):
        g = np.array(form.as_lists(), dtype=np.int64)
        gens = automorphism_generators(form)
        for w in gens:
            assert w.dtype == np.int64
            assert np.array_equal(w.T @ g @ w, g)
        assert closure_order(gens) == aut_order(form)


def test_is_isometric_finds_conjugates(e8):
    rng = random.Random(23)
    for form in (identity_form(3), validate_form([[2, 1], [1, 2]]), e8):
        m = form.dim
        u = random_unimodular(m, rng)
        conj = validate_form(conjugate(form, u))
        g1 = np.array(form.as_lists(), dtype=np.int64)
        g2 = np.array(conj.as_lists(), dtype=np.int64)
        w = is_isometric(form, conj)
        assert w is not None
        assert np.array_equal(w.T @ g1 @ w, g2)
        wb = is_isometric(conj, form)
        assert wb is not None
        assert np.array_equal(wb.T @ g2 @ wb, g1)


def test_is_isometric_rejects_distinct_forms():
    # determinant mismatch
    assert is_isometric(identity_form(2), validate_form([[2, 1], [1, 2]])) is None
    # same determinant, parity mismatch
    assert is_isometric(validate_form([[2, 0], [0, 2]]),
                        validate_form([[1, 0], [0, 4]])) is None
    # same determinant and parity, different minimum
    assert is_isometric(validate_form([[1, 0], [0, 11]]),
                        validate_form([[3, 1], [1, 4]])) is None


def test_dim16_pair_not_isometric(dim16_genus):
    a, b = dim16_genus.classes
    assert is_isometric(a, b) is None
    assert is_isometric(a, a) is not None
    assert is_isometric(b, b) is not None


def test_orbit_decompose_e8_roots(e8):
    od = orbit_decompose(e8, 2)
    assert od.orbit_sizes == (240,)
    assert od.stabilizer_orders == (2903040,)
    assert od.aut_order == 696729600
    assert od.vectors.shape == (240, 8)
    assert sorted(i for members in od.member_index for i in members) == list(range(240))


def test_orbit_decompose_identity_norms():
    od = orbit_decompose(identity_form(3), 1)
    assert od.orbit_sizes == (6,)
    assert od.stabilizer_orders == (8,)
    od2 = orbit_decompose(identity_form(4), 2)
    assert od2.orbit_sizes == (24,)
    assert od2.stabilizer_orders == (16,)


def test_orbit_representatives_are_lex_minimal(e8):
    od = orbit_decompose(e8, 2)
    members = od.orbit_vectors(0)
    lex_min = min(tuple(v) for v in members.tolist())
    assert tuple(od.representatives[0].tolist()) == lex_min


def test_orbit_decompose_empty():
    with pytest.raises(EmptySolutionSet):
        orbit_decompose(identity_form(3), 7)


def test_aut_budget_exhaustion():
    rng = random.Random(31)
    u = random_unimodular(6, rng)
    fresh = validate_form(conjugate(identity_form(6), u))
    with pytest.raises(BudgetExceeded):
        aut_order(fresh, budget=3)
