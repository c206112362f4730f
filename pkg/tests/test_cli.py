import csv
import io
import json
from pathlib import Path

import pytest

from sdpdegree.cli import main

from reference import DEGREE_TABLE

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_degree_human(capsys):
    code, out, _ = run(capsys, "degree", "--m", "3", "--n", "4", "--r", "3")
    assert code == 0
    assert out.startswith("delta(3,4,3) = 16\n")


def test_degree_infeasible(capsys):
    code, out, _ = run(capsys, "degree", "--m", "2", "--n", "3", "--r", "1", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["value"] == "0" and doc["pataki_ok"] is False


def test_degree_json_uses_strings(capsys):
    code, out, _ = run(capsys, "degree", "--m", "9", "--n", "6", "--r", "4", "--format", "json")
    doc = json.loads(out)
    assert doc["value"] == "1470"
    assert all(isinstance(c["value"], str) for c in doc["cross_checks"])
    assert json.dumps(doc, indent=2, sort_keys=True) + "\n" == out


def test_degree_csv(capsys):
    _, out, _ = run(capsys, "degree", "--m", "5", "--n", "5", "--r", "3", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["value"] == "207"


@pytest.mark.parametrize("argv", [
    ["degree", "--m", "3", "--n", "4", "--r", "4"],
    ["degree", "--m", "x", "--n", "4", "--r", "1"],
    ["degree", "--m", "0", "--n", "4", "--r", "1"],
    ["degree", "--n", "4", "--r", "1"],
    ["frobnicate"],
    [],
    ["ranks", "--trials", "5"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 64
    assert "usage" in err


def test_table_reproduces_reference(capsys):
    code, out, _ = run(capsys, "table", "--n-max", "6", "--m-max", "9", "--format", "csv")
    assert code == 0
    cells = {(int(r["m"]), int(r["n"]), int(r["r"])): int(r["value"])
             for r in csv.DictReader(io.StringIO(out)) if r["kind"] == "cell"}
    assert cells == DEGREE_TABLE


def test_table_row_sum_line(capsys):
    _, out, _ = run(capsys, "table", "--n-max", "4")
    assert "  n=4 r=2: 122" in out.splitlines()
    assert "  n=4 r=3: 40" in out.splitlines()


def test_table_json_round_trip(capsys):
    _, out, _ = run(capsys, "table", "--n-max", "3", "--format", "json")
    assert json.dumps(json.loads(out), indent=2, sort_keys=True) + "\n" == out


def test_solve_example22(capsys):
    code, out, _ = run(capsys, "solve", "example22", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert [round(v, 4) for v in doc["y"]] == [0.3377, 0.5725, 0.3255]
    assert (doc["rank_Z"]["rank"], doc["rank_X"]["rank"]) == (3, 1)


def test_solve_diagonal_file(capsys):
    code, out, _ = run(capsys, "solve", str(FIXTURES / "diagonal.json"), "--format", "json")
    assert code == 0
    assert json.loads(out)["primal_objective"] == pytest.approx(2.0, abs=1e-6)


def test_solve_parse_error(capsys):
    code, _, err = run(capsys, "solve", str(FIXTURES / "truncated.json"))
    assert code == 65
    assert "truncated.json" in err


def test_solve_numerical_failure_exit(capsys, tmp_path):
    path = tmp_path / "unbounded.json"
    path.write_text(json.dumps({"n": 2, "m": 1, "C": [-1, 0, 0, 0], "A": [[0, 0, 0, 1]], "b": [1]}))
    code, _, _ = run(capsys, "solve", str(path))
    assert code == 3


def test_ranks_deterministic(capsys):
    args = ["ranks", "--m", "3", "--n", "4", "--trials", "40", "--seed", "7", "--format", "json"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    doc = json.loads(first)
    assert {r["rank"] for r in doc[0]["ranks"] if r["count"]} <= {2, 3}


def test_ranks_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("SDPDEGREE_SEED", "7")
    _, env_out, _ = run(capsys, "ranks", "--m", "4", "--n", "3", "--trials", "10", "--format", "csv")
    _, flag_out, _ = run(capsys, "ranks", "--m", "4", "--n", "3", "--trials", "10", "--seed", "7",
                         "--format", "csv")
    assert env_out == flag_out
    monkeypatch.setenv("SDPDEGREE_SEED", "seven")
    code, _, _ = run(capsys, "ranks", "--m", "4", "--n", "3", "--trials", "10")
    assert code == 64


def test_check_duality_lists_conjectural(capsys):
    code, out, _ = run(capsys, "check", "--scope", "duality", "--n-max", "6")
    assert code == 0
    assert "delta(6,6,4) = delta(15,6,2) = 1400" in out


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", "--scope", "all", "--n-max", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert {s["name"] for s in doc["suites"]} == {"duality", "class", "closed", "dispatch"}


def test_check_failure_exit(capsys, monkeypatch):
    import sdpdegree.checks as checks

    monkeypatch.setattr(checks, "delta_via_class", lambda m, n, r: 0)
    code, _, err = run(capsys, "check", "--scope", "class", "--n-max", "4")
    assert code == 2
    assert "query" in err


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "sdpdegree", "degree", "--m", "1", "--n", "2", "--r", "1"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "= 2" in out.stdout
