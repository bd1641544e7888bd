"""Root structure: norm-1 splitting, orthogonal norm-2 frames, size bounds."""

import random

import numpy as np
import pytest

from conftest import conjugate, random_unimodular
from genusvar.errors import BudgetExceeded
from genusvar.forms import direct_sum, e8_form, identity_form, validate_form
from genusvar.roots import (norm1_span_analysis, orthogonal_root_basis,
                            verify_root_bounds)


def test_identity_forms_full_split():
    for m in range(2, 9):
        ra = verify_root_bounds(identity_form(m))
        assert ra.norm1_count == 2 * m
        assert ra.norm2_count == 2 * m * (m - 1)
        assert ra.span_rank_norm1 == m
        v, perp = ra.splitting
        assert len(v) == m and len(perp) == 0
        assert ra.bounds_ok


def test_e8_orthogonal_frame(e8):
    ra = verify_root_bounds(e8)
    assert (ra.norm1_count, ra.norm2_count) == (0, 240)
    assert ra.span_rank_norm1 == 0
    frame = ra.max_orthogonal_norm2
    assert len(frame) == 8
    g = np.array(e8.as_lists(), dtype=np.int64)
    f = np.array(frame, dtype=np.int64)
    pair = f @ g @ f.T
    assert np.array_equal(pair, 2 * np.eye(8, dtype=np.int64))
    assert ra.bounds_ok


def test_mixed_direct_sum_splitting(e8):
    form = direct_sum(identity_form(2), e8)
    ra = norm1_span_analysis(form)
    assert ra.norm1_count == 4
    assert ra.norm2_count == 4 + 240
    assert ra.span_rank_norm1 == 2
    v, perp = ra.splitting
    assert len(v) == 2 and len(perp) == 8
    g = np.array(form.as_lists(), dtype=np.int64)
    vb = np.array(v, dtype=np.int64)
    pb = np.array(perp, dtype=np.int64)
    assert np.array_equal(vb @ g @ vb.T, np.eye(2, dtype=np.int64))
    assert (vb @ g @ pb.T == 0).all()


def test_hexagonal_block():
    form = direct_sum(identity_form(2), validate_form([[2, 1], [1, 2]]))
    ra = verify_root_bounds(form)
    assert ra.norm1_count == 4
    assert ra.norm2_count == 4 + 6
    assert ra.span_rank_norm1 == 2
    # the square block carries two orthogonal norm-2 vectors; the hexagonal
    # plane has no orthogonal pair, so it adds exactly one more
    assert len(ra.max_orthogonal_norm2) == 3


def test_counts_invariant_under_conjugation(e8):
    rng = random.Random(41)
    for base in (identity_form(4), e8):
        m = base.dim
        ref = norm1_span_analysis(base)
        for _ in range(3):
            u = random_unimodular(m, rng)
            conj = validate_form(conjugate(base, u))
            ra = norm1_span_analysis(conj)
            assert (ra.norm1_count, ra.norm2_count) == \
                (ref.norm1_count, ref.norm2_count)
            assert ra.span_rank_norm1 == ref.span_rank_norm1
            assert ra.bounds_ok


def test_orthogonal_basis_dimension_three():
    frame = orthogonal_root_basis(identity_form(3))
    assert len(frame) == 2
    g = np.eye(3, dtype=np.int64)
    f = np.array(frame, dtype=np.int64)
    assert np.array_equal(f @ g @ f.T, 2 * np.eye(2, dtype=np.int64))


def test_rootless_form(niemeier_genus):
    leech = niemeier_genus.classes[niemeier_genus.class_index("Leech")]
    ra = norm1_span_analysis(leech)
    assert (ra.norm1_count, ra.norm2_count) == (0, 0)
    assert ra.span_rank_norm1 == 0
    v, perp = ra.splitting
    assert len(v) == 0 and len(perp) == 24
    assert ra.bounds_ok


def test_orthogonal_search_budget(e8):
    with pytest.raises(BudgetExceeded):
        orthogonal_root_basis(e8, budget=3)
