import csv
import io
import json

import pytest

from cuspbound.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bound_fixture(capsys):
    code, out, _ = run(capsys, "bound", "--alpha", "1,0,-1")
    assert code == 0
    doc = json.loads(out)
    assert doc["whole_cusp"] == "3" and doc["borel"] == "2" and doc["h_G"] == "4"
    per_k = {r["k"]: r for r in doc["maximal_parabolics"]}
    assert per_k[1]["bound"] == "3" and per_k[1]["C_k"] == "2/3" and per_k[1]["m_k"] == 1
    assert doc["phi_all"] == {"m": 1, "z_1": "0", "z_d": "-2"}
    assert out == json.dumps(doc, sort_keys=True, indent=2) + "\n"


def test_bound_d2_all_half(capsys):
    code, out, _ = run(capsys, "bound", "--alpha", "1,-1")
    doc = json.loads(out)
    assert code == 0
    assert doc["borel"] == doc["whole_cusp"] == doc["maximal_parabolics"][0]["bound"] == "1"
    assert doc["phi_all"] is None


def test_bound_zero_flow_degenerate(capsys):
    code, out, _ = run(capsys, "bound", "--alpha", "0,0,0")
    doc = json.loads(out)
    assert code == 0 and doc["degenerate"]
    assert {doc["borel"], doc["whole_cusp"]} | {r["bound"] for r in doc["maximal_parabolics"]} == {"0"}


def test_bound_k_selection_and_original_indices(capsys):
    code, out, _ = run(capsys, "bound", "--alpha=-1,1,0", "--k", "2")
    doc = json.loads(out)
    assert [r["k"] for r in doc["maximal_parabolics"]] == [2]
    assert doc["flow"]["applied_sort"] == [2, 3, 1]
    assert doc["flow"]["sorted"] == ["1", "0", "-1"]


def test_bound_table(capsys):
    code, out, _ = run(capsys, "bound", "--alpha", "1,0,-1", "--format", "table")
    assert code == 0 and "whole-cusp bound: 3" in out


@pytest.mark.parametrize("argv", [
    ["bound", "--alpha", "1,2"],
    ["bound", "--alpha", "0.5,-0.5"],
    ["bound", "--alpha", "1"],
    ["bound", "--alpha", "1,0,-1", "--k", "3"],
    ["hull", "--alpha", "1,0,-1"],
    ["bound"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_project_flag(capsys):
    code, out, _ = run(capsys, "bound", "--alpha", "1,2", "--project")
    doc = json.loads(out)
    assert code == 0 and doc["flow"]["projected"] and doc["flow"]["sorted"] == ["1/2", "-1/2"]


def test_hull_csv_fixture(capsys):
    code, out, _ = run(capsys, "hull", "--alpha", "1,0,-1", "--k", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 3
    assert [(r["psi"], r["h"]) for r in rows] == [("3/2", "4"), ("0", "3"), ("-3/2", "1")]
    assert [r["slope"] for r in rows] == ["2/3", "4/3", ""]
    assert [r["d_s"] for r in rows] == ["3/2", "3/2", ""]


def test_hull_degenerate(capsys):
    code, out, _ = run(capsys, "hull", "--alpha", "0,0", "--k", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1 and (rows[0]["psi"], rows[0]["h"]) == ("0", "0")


def test_hull_svg(capsys, tmp_path):
    path = tmp_path / "hull.svg"
    code, out, _ = run(capsys, "hull", "--alpha", "3,1,-1,-3", "--k", "2", "--format", "svg", "--out", str(path))
    text = path.read_text()
    assert code == 0 and out == ""
    assert "<polyline" in text and "psi_2 = 0" in text and "f = 14" in text
    assert text.count('r="3"') == 4
    main(["hull", "--alpha", "3,1,-1,-3", "--k", "2", "--format", "svg", "--out", str(tmp_path / "again.svg")])
    assert (tmp_path / "again.svg").read_text() == text


def test_hull_json(capsys):
    code, out, _ = run(capsys, "hull", "--alpha", "1,0,-1", "--k", "1", "--format", "json")
    doc = json.loads(out)
    assert doc["crossing"] == {"f": "3", "slope_interval": ["2/3", "4/3"], "vertex": "2,1,3"}


def test_unwritable_path(capsys, tmp_path):
    code, _, err = run(capsys, "hull", "--alpha", "1,0,-1", "--k", "1", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 2 and "cannot write" in err


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--alpha", "1,0,-1")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "verify", "--alpha", "1,1,-2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert any(c["name"] == "m_1.positive_count" and c["pass"] for c in doc["checks"])


def test_verify_limit(capsys):
    code, _, err = run(capsys, "verify", "--alpha", "1,0,-1", "--limit", "2")
    assert code == 2 and "limit" in err


def test_verify_failure_exit_1(capsys, monkeypatch):
    from cuspbound import cli
    from cuspbound.oracle import verify_all

    def broken(alpha, limit=None):
        report = verify_all(alpha, limit=limit)
        report.eq("injected", 0, 1)
        return report

    monkeypatch.setattr(cli, "verify_all", broken)
    code, out, _ = run(capsys, "verify", "--alpha", "1,0,-1")
    assert code == 1 and "FAIL  injected" in out


def test_fuzz_d5(capsys):
    code, out, _ = run(capsys, "fuzz", "--d", "5", "--trials", "100", "--seed", "42")
    assert code == 0 and out.rstrip().endswith("100/100 trials passed")
    code, again, _ = run(capsys, "fuzz", "--d", "5", "--trials", "100", "--seed", "42")
    assert again == out
