"""Form validation, levels, genus ingestion, and file parsing."""

import json
import random
from fractions import Fraction

import pytest

from conftest import conjugate, random_unimodular
from genusvar import rational
from genusvar.errors import (EmptyGenus, InconsistentGenus, NotPositiveDefinite,
                             NotSymmetric, ParseError)
from genusvar.forms import (GenusData, QuadForm, direct_sum, e8_form,
                            genus_of_single, identity_form, load_form,
                            load_genus, read_form_entries, validate_form)


def brute_level(form: QuadForm) -> int:
    """Least D with D * gram^-1 integral and even on the diagonal."""
    inv = rational.fraction_inverse(form.as_lists())
    d = 1
    while True:
        ok = all((d * inv[i][j]).denominator == 1
                 for i in range(form.dim) for j in range(form.dim))
        if ok:
            diag_even = all((d * inv[i][i]) % 2 == 0 for i in range(form.dim))
            if diag_even:
                return d
        d += 1


def test_validate_small_even_form():
    f = validate_form([[2, 1], [1, 2]])
    assert f.det == 3
    assert f.parity == "even"


def test_validate_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        validate_form([[1, 2], [2, 1]])


def test_validate_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        validate_form([[1, 2], [0, 1]])


def test_e8_det_parity_level():
    f = e8_form()
    assert f.dim == 8
    assert f.det == 1
    assert f.parity == "even"
    assert f.level == 1


def test_levels_match_brute_force():
    cases = [identity_form(2), identity_form(3), validate_form([[2, 1], [1, 2]]),
             e8_form(), direct_sum(e8_form(), identity_form(1))]
    for f in cases:
        assert f.level == brute_level(f)
    assert identity_form(2).level == 2
    assert validate_form([[2, 1], [1, 2]]).level == 3


def test_unimodular_conjugation_invariants():
    rng = random.Random(41)
    for f in [identity_form(3), validate_form([[2, 1], [1, 2]]), e8_form()]:
        for _ in range(5):
            u = random_unimodular(f.dim, rng)
            g = validate_form(conjugate(f, u))
            assert g.det == f.det
            assert g.level == f.level
            assert g.parity == f.parity


def test_direct_sum_blocks():
    f = direct_sum(identity_form(2), validate_form([[2, 1], [1, 2]]))
    assert f.dim == 4
    assert f.det == 3
    assert f.parity == "odd"


def test_genus_weights_exact(dim9_genus):
    g = dim9_genus
    assert sum(g.weights) == 1
    assert all(w > 0 for w in g.weights)
    # scaling all aut orders by a common factor leaves weights unchanged
    scaled = GenusData(g.classes, g.names, tuple(7 * o for o in g.aut_orders))
    assert scaled.weights == g.weights


def test_single_class_genus(e8):
    g = genus_of_single(e8, "E8", 696729600)
    assert g.weights == (Fraction(1),)
    assert g.mass == Fraction(1, 696729600)


def test_load_genus_rejects_mixed_dims(tmp_path):
    entries = [
        {"name": "a", "dim": 1, "gram": [1], "aut_order": 2},
        {"name": "b", "dim": 2, "gram": [1, 0, 0, 1], "aut_order": 8},
    ]
    path = tmp_path / "mixed.json"
    path.write_text(json.dumps(entries))
    with pytest.raises(InconsistentGenus):
        load_genus(path)


def test_load_genus_rejects_empty(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("[]")
    with pytest.raises((EmptyGenus, ParseError)):
        load_genus(path)


def test_load_genus_missing_file():
    with pytest.raises(ParseError):
        load_genus("/nonexistent/nowhere.json")


def test_read_form_entries_rejects_bad_gram(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([{"name": "x", "dim": 2, "gram": [1, 0, 0],
                                 "aut_order": 2}]))
    with pytest.raises(ParseError):
        read_form_entries(path)


def test_read_form_entries_rejects_bad_aut(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([{"name": "x", "dim": 1, "gram": [1],
                                 "aut_order": 0}]))
    with pytest.raises(ParseError):
        read_form_entries(path)


def test_load_form_picks_by_name(data_dir):
    name, form, aut = load_form(data_dir / "unimodular.json", "E8")
    assert name == "E8"
    assert form.gram == e8_form().gram
    assert aut == 696729600


def test_load_form_compute_marker(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps([{"name": "I2", "dim": 2, "gram": [1, 0, 0, 1],
                                 "aut_order": "compute"}]))
    name, form, aut = load_form(path, compute_aut=True)
    assert aut == 8


def test_genus_weights_formula(niemeier_genus):
    g = niemeier_genus
    inv = [Fraction(1, o) for o in g.aut_orders]
    total = sum(inv)
    assert g.weights == tuple(x / total for x in inv)
    assert g.level == 1
    assert g.parity == "even"
    assert g.det == 1
