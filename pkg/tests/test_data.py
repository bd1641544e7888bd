"""Integrity checks for the bundled form files.

The package ships reference genera under ``genusvar/data``; these tests pin
their class lists, automorphism orders, parities, and a few root counts, and
confirm the stored orders against recomputation where that is cheap.
"""

import math

from genusvar.enumeration import root_vectors
from genusvar.forms import load_genus, read_form_entries
from genusvar.mass import even_unimodular_mass

E8_AUT = 696729600

FILES = {
    "unimodular.json": 11,
    "e8.json": 1,
    "dim9.json": 2,
    "dim16.json": 2,
    "niemeier24.json": 24,
}


def test_every_file_parses_with_resolved_auts(data_dir):
    for fname, count in FILES.items():
        entries = read_form_entries(data_dir / fname)
        assert len(entries) == count, fname
        for entry in entries:
            assert isinstance(entry["aut_order"], int), (fname, entry["name"])
            assert entry["aut_order"] > 0
            assert entry["form"].dim >= 1


def test_bundled_files_resolve_without_a_checkout(data_dir):
    from genusvar.cli import _resolve_path

    for fname in FILES:
        assert _resolve_path(f"data/{fname}").name == fname


def test_square_forms(data_dir):
    entries = {e["name"]: e for e in read_form_entries(data_dir / "unimodular.json")}
    assert set(entries) == {f"I{m}" for m in range(1, 10)} | {"E8", "E8I1"}
    for m in range(1, 10):
        e = entries[f"I{m}"]
        assert e["form"].as_lists() == [[int(i == j) for j in range(m)]
                                        for i in range(m)]
        assert e["aut_order"] == 2 ** m * math.factorial(m)
    assert entries["E8"]["aut_order"] == E8_AUT
    assert entries["E8"]["form"].parity == "even"
    assert entries["E8"]["form"].det == 1
    assert entries["E8I1"]["aut_order"] == 2 * E8_AUT


def test_dim9_genus_verifies(data_dir):
    genus = load_genus(data_dir / "dim9.json", verify=True)
    assert genus.names == ("I9", "E8I1")
    assert genus.aut_orders == (2 ** 9 * math.factorial(9), 2 * E8_AUT)
    assert genus.dim == 9
    assert genus.det == 1
    assert genus.parity == "odd"


def test_dim16_genus(data_dir):
    genus = load_genus(data_dir / "dim16.json")
    assert genus.names == ("E8E8", "D16plus")
    assert genus.dim == 16
    assert genus.det == 1
    assert genus.parity == "even"
    assert genus.level == 1
    assert genus.aut_orders[0] == 2 * E8_AUT ** 2
    assert genus.mass == even_unimodular_mass(16)


def test_niemeier_genus(data_dir):
    genus = load_genus(data_dir / "niemeier24.json")
    assert len(genus.classes) == 24
    assert len(set(genus.names)) == 24
    assert genus.dim == 24
    assert genus.det == 1
    assert genus.parity == "even"
    assert genus.level == 1
    assert genus.mass == even_unimodular_mass(24)


def test_niemeier_root_counts(niemeier_genus):
    expected = {
        "D24": 1104,       # 2 * 24 * 23
        "D16E8": 720,      # 2 * 16 * 15 + 240
        "E8^3": 720,       # 3 * 240
        "A1^24": 48,       # 24 * 2
        "Leech": 0,
    }
    for name, count in expected.items():
        cls = niemeier_genus.classes[niemeier_genus.class_index(name)]
        assert root_vectors(cls).as_tuple() == (0, count), name
