"""End-to-end tests of the command line front end.

Every test drives ``cli.run`` in-process and inspects the report on stdout
(or the error object on stderr), exactly as a shell user would see them.
"""

import csv
import json
from fractions import Fraction

import pytest

import genusvar
from genusvar import cli


def invoke(capsys, *argv):
    rc = cli.run(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def invoke_json(capsys, *argv):
    rc, out, err = invoke(capsys, *argv)
    assert rc == 0, f"exit {rc}, stderr: {err}"
    return json.loads(out)


def write_forms(path, entries):
    path.write_text(json.dumps(entries))
    return str(path)


# ---------------------------------------------------------------------------
# report envelope and serialization


def test_report_envelope(capsys):
    rep = invoke_json(capsys, "roots", "--form", "data/unimodular.json#E8")
    assert list(rep) == ["tool", "version", "command", "config", "result"]
    assert rep["tool"] == "genusvar"
    assert rep["version"] == genusvar.__version__
    assert rep["command"] == "roots"
    assert rep["config"]["seed"] == 0
    assert isinstance(rep["config"]["budget"], int)
    assert rep["config"]["budget"] > 0
    assert rep["config"]["format"] == "json"
    assert rep["config"]["form_resolved"]["name"] == "E8"
    assert rep["result"]["norm1_count"] == 0
    assert rep["result"]["norm2_count"] == 240
    assert rep["result"]["bounds_ok"] is True


def test_task_count_not_in_config(capsys):
    rep = invoke_json(capsys, "equidist", "--form", "data/unimodular.json#I4",
                      "--norm", "1", "--eta", "0.3", "--samples", "2000",
                      "--task-count", "6")
    assert "task_count" not in rep["config"]


def test_fraction_rendering(capsys):
    rep = invoke_json(capsys, "mass", "--genus", "data/dim9.json",
                      "--norm", "1", "--method", "enumerate")
    assert rep["result"]["enumerated"] == "274/17"
    assert rep["config"]["genus_resolved"]["mass"] == "17/2786918400"
    assert Fraction(rep["result"]["enumerated"]) == Fraction(274, 17)


def test_identical_invocations_byte_identical(capsys):
    argv = ("variance", "--genus", "data/unimodular.json#I4", "--norm", "2",
            "--scale", "0.6", "--mode", "mc", "--samples", "5000", "--seed", "11")
    _, out1, _ = invoke(capsys, *argv)
    _, out2, _ = invoke(capsys, *argv)
    assert out1 == out2


def test_task_count_byte_identical_variance(capsys):
    argv = ("variance", "--genus", "data/unimodular.json#I4", "--norm", "2",
            "--scale", "0.6", "--mode", "mc", "--samples", "20000", "--seed", "7")
    rc1, out1, _ = invoke(capsys, *argv, "--task-count", "1")
    rc2, out2, _ = invoke(capsys, *argv, "--task-count", "5")
    assert rc1 == rc2 == 0
    assert out1 == out2
    rep = json.loads(out1)
    assert rep["result"]["geometric"]["mode"] == "mc"
    assert rep["result"]["agreement_kind"] == "z_score"


def test_task_count_byte_identical_equidist(capsys):
    argv = ("equidist", "--form", "data/unimodular.json#I4", "--norm", "1",
            "--eta", "0.3", "--samples", "20000", "--seed", "3")
    rc1, out1, _ = invoke(capsys, *argv, "--task-count", "1")
    rc2, out2, _ = invoke(capsys, *argv, "--task-count", "4")
    assert rc1 == rc2 == 0
    assert out1 == out2
    rep = json.loads(out1)
    assert rep["result"]["rep_count"] == 8
    assert rep["result"]["gcd_warning"] is False


# ---------------------------------------------------------------------------
# CSV format


def test_csv_header_and_row(capsys):
    rc, out, _ = invoke(capsys, "cutoff", "--dim", "100", "--format", "csv")
    assert rc == 0
    lines = out.strip().split("\n")
    assert len(lines) == 2
    rows = list(csv.reader(lines))
    assert len(rows[0]) == len(rows[1])
    idx = rows[0].index("result.constant")
    assert rows[1][idx] == "5113"


def test_csv_one_row_per_corpus_form(capsys, tmp_path):
    write_forms(tmp_path / "small.json", [
        {"name": "I2", "dim": 2, "gram": [1, 0, 0, 1], "aut_order": 8},
        {"name": "I3", "dim": 3, "gram": [1, 0, 0, 0, 1, 0, 0, 0, 1],
         "aut_order": 48},
    ])
    rc, out, _ = invoke(capsys, "roots", "--corpus", str(tmp_path),
                        "--format", "csv")
    assert rc == 0
    rows = list(csv.reader(out.strip().split("\n")))
    assert len(rows) == 3  # header plus one row per form
    assert len({len(r) for r in rows}) == 1
    names = rows[0].index("result.forms.name")
    assert [r[names] for r in rows[1:]] == ["I2", "I3"]
    n2 = rows[0].index("result.forms.norm2_count")
    assert [r[n2] for r in rows[1:]] == ["4", "12"]


def test_corpus_json_lists_every_form(capsys, tmp_path):
    write_forms(tmp_path / "small.json", [
        {"name": "I2", "dim": 2, "gram": [1, 0, 0, 1], "aut_order": 8},
        {"name": "I3", "dim": 3, "gram": [1, 0, 0, 0, 1, 0, 0, 0, 1],
         "aut_order": 48},
    ])
    rep = invoke_json(capsys, "roots", "--corpus", str(tmp_path))
    forms = rep["result"]["forms"]
    assert [(f["name"], f["norm1_count"], f["norm2_count"]) for f in forms] \
        == [("I2", 4, 4), ("I3", 6, 12)]
    assert all(f["bounds_ok"] for f in forms)


# ---------------------------------------------------------------------------
# exit codes


def test_exit_0_on_success(capsys):
    rc, out, err = invoke(capsys, "cutoff", "--dim", "100")
    assert rc == 0
    assert err == ""
    assert json.loads(out)["result"]["constant"] == 5113


def test_exit_1_on_missing_file(capsys):
    rc, out, err = invoke(capsys, "roots", "--form", "nonexistent.json")
    assert rc == 1
    assert out == ""
    error = json.loads(err)["error"]
    assert error["type"] == "ParseError"
    assert "nonexistent.json" in error["message"]


def test_exit_1_on_missing_norm(capsys):
    rc, _, err = invoke(capsys, "enumerate", "--form", "data/unimodular.json#I2")
    assert rc == 1
    assert json.loads(err)["error"]["type"] == "ParseError"


def test_exit_1_on_verify_mismatch(capsys, tmp_path):
    path = write_forms(tmp_path / "bad.json", [
        {"name": "I2", "dim": 2, "gram": [1, 0, 0, 1], "aut_order": 7},
    ])
    rc, _, err = invoke(capsys, "mass", "--genus", path, "--norm", "1",
                        "--verify")
    assert rc == 1
    error = json.loads(err)["error"]
    assert error["type"] == "InconsistentGenus"
    assert "aut_order" in error["message"]


def test_exit_1_on_binary_local_product(capsys, tmp_path):
    path = write_forms(tmp_path / "i2.json", [
        {"name": "I2", "dim": 2, "gram": [1, 0, 0, 1], "aut_order": 8},
    ])
    rc, _, err = invoke(capsys, "mass", "--genus", path, "--norm", "1")
    assert rc == 1
    assert json.loads(err)["error"]["type"] == "InputError"
    rep = invoke_json(capsys, "mass", "--genus", path, "--norm", "1",
                      "--method", "enumerate")
    assert rep["result"]["enumerated"] == "4"


def test_exit_2_on_budget(capsys, tmp_path):
    # a conjugate of the 6-dim square form: equivalent, but its gram is new
    # to the enumeration cache, so the tiny budget must trip
    gram = [[5, 0, -3, -3, 3, 2], [0, 1, 1, 0, 0, 0], [-3, 1, 4, 2, -2, -1],
            [-3, 0, 2, 3, -2, -1], [3, 0, -2, -2, 2, 1], [2, 0, -1, -1, 1, 2]]
    path = write_forms(tmp_path / "conj.json", [
        {"name": "C6", "dim": 6, "gram": [x for row in gram for x in row],
         "aut_order": "compute"},
    ])
    rc, out, err = invoke(capsys, "enumerate", "--form", path,
                          "--norm", "2", "--budget", "10")
    assert rc == 2
    assert out == ""
    assert json.loads(err)["error"]["type"] == "BudgetExceeded"


def test_exit_2_on_usage_error(capsys):
    assert cli.run(["enumerate"]) == 2  # missing required --form
    capsys.readouterr()
    assert cli.run([]) == 2  # missing subcommand
    capsys.readouterr()


# ---------------------------------------------------------------------------
# individual commands


def test_enumerate_count_and_list(capsys):
    rep = invoke_json(capsys, "enumerate", "--form", "data/unimodular.json#I2",
                      "--norm", "1", "--list")
    assert rep["result"]["count"] == 4
    assert sorted(map(tuple, rep["result"]["solutions"])) \
        == [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_enumerate_target(capsys):
    rep = invoke_json(capsys, "enumerate", "--form", "data/unimodular.json#I2",
                      "--target", "data/unimodular.json#I2")
    assert rep["result"]["count"] == 8
    assert rep["config"]["target_resolved"]["name"] == "I2"


def test_aut(capsys):
    rep = invoke_json(capsys, "aut", "--form", "data/unimodular.json#I3")
    assert rep["result"]["order"] == 48
    assert rep["result"]["generator_count"] >= 1


def test_orbits(capsys):
    rep = invoke_json(capsys, "orbits", "--form", "data/unimodular.json#I3",
                      "--norm", "1")
    res = rep["result"]
    assert res["aut_order"] == 48
    assert res["vector_count"] == 6
    assert res["orbit_sizes"] == [6]
    assert res["stabilizer_orders"] == [8]
    assert len(res["representatives"]) == 1


def test_cutoff_large_dim(capsys):
    rep = invoke_json(capsys, "cutoff", "--dim", "1000000")
    res = rep["result"]
    assert res["constant"] == 5113
    assert abs(res["ratio_deviation"]) < 1e-3
    assert res["lower_threshold"]["odd"] < res["upper_threshold"]["odd"]


def test_theta_degree_zero(capsys):
    rep = invoke_json(capsys, "theta", "--form", "data/unimodular.json#E8",
                      "--degree", "0", "--prec", "4")
    res = rep["result"]
    assert Fraction(str(res["weight"])) == 4
    assert res["level"] == 1
    assert res["coefficients"] == {"0": "1", "1": "0", "2": "240",
                                   "3": "0", "4": "2160"}


def test_theta_degree_two_vanishes(capsys):
    rep = invoke_json(capsys, "theta", "--form", "data/unimodular.json#E8",
                      "--degree", "2", "--prec", "6")
    assert Fraction(str(rep["result"]["weight"])) == 6
    coeffs = rep["result"]["coefficients"]
    assert len(coeffs) == 7
    assert all(Fraction(str(v)) == 0 for v in coeffs.values())


def test_weyl(capsys):
    rep = invoke_json(capsys, "weyl", "--genus", "data/e8.json",
                      "--degree", "2", "--norm", "2")
    assert Fraction(rep["result"]["full"]) == 0
    assert Fraction(rep["result"]["orbit"]) == 0


def test_variance_quad_mode(capsys):
    rep = invoke_json(capsys, "variance", "--genus", "data/unimodular.json#I3",
                      "--norm", "2", "--scale", "0.5", "--mode", "quad")
    res = rep["result"]
    assert res["geometric"]["mode"] == "quad"
    assert res["agreement_kind"] == "relative_gap"
    assert res["agreement"] < 1e-3
    assert res["rep_counts"] == [12]


def test_caps(capsys):
    rep = invoke_json(capsys, "caps", "--form", "data/unimodular.json#I4",
                      "--norm", "5", "--eta", "2.1", "--samples", "5000")
    assert rep["result"]["fraction"] == 0.0
    assert rep["result"]["samples"] == 5000


def test_diophantine_exact_hit(capsys):
    rep = invoke_json(capsys, "diophantine", "--dim", "4", "--prime", "5",
                      "--k", "1", "--x", "1,0,0,0")
    res = rep["result"]
    assert res["dist"] == 0
    assert res["height"] == 1
    assert res["y"] == [1, 0, 0, 0]
    assert res["exponent"] is None
    assert res["warned"] is False


def test_mass_local_densities_listed(capsys):
    rep = invoke_json(capsys, "mass", "--genus", "data/e8.json", "--norm", "2")
    res = rep["result"]
    assert Fraction(res["enumerated"]) == 240
    assert res["rel_gap"] < 1e-3
    assert any(d["p"] == 2 for d in res["densities"])


def test_version_flag(capsys):
    assert cli.run(["--version"]) == 0
    assert capsys.readouterr().out.strip() == genusvar.__version__
