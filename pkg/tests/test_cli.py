from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest

from ringelhall.catalog import get_catalog
from ringelhall.cli import EXIT_BUDGET, EXIT_MISS, EXIT_USAGE, main
from ringelhall.hallnum import DEFAULT_BUDGET, get_calculator
from ringelhall.quiver import builtin


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    assert code == 0
    return json.loads(text)


def test_hall_g_example():
    assert run_json("hall", "g", "--quiver", "A2", "--q", "2", "--M", "S1", "--N", "S2", "--L", "P(1)") == {"g": "1"}


def test_hall_g_all_methods():
    data = run_json("hall", "g", "--quiver", "A1", "--q", "3", "--M", "S1", "--N", "S1", "--L", "2*S1", "--method", "all")
    assert data["g"] == "4"
    assert set(data["methods"].values()) == {"4"}


def test_serre_example():
    assert run_json("check", "serre", "--quiver", "K", "--q", "3")["ok"] is True


def test_quiver_show_periods():
    data = run_json("quiver", "show", "--quiver", "E~7")
    assert data["tame"]["periods"] == ["2", "3", "4"]
    assert len(data["vertices"]) == 8


def test_numbers_are_strings():
    data = run_json("hall", "extset", "--quiver", "A2", "--q", "2", "--M", "S1", "--N", "S2")
    cat = get_catalog(builtin("A2"), 2)
    assert {row["L"] for row in data} == {str(cat.parse("P(1)")), str(cat.parse("S1+S2"))}
    assert all(isinstance(row["g"], str) for row in data)


def test_alg_commands():
    data = run_json("alg", "mul", "--quiver", "A2", "--q", "2", "--a", "S1", "--b", "S2")
    assert data["text"]
    assert run_json("alg", "delta", "--quiver", "A1", "--q", "2", "--x", "S1")["delta"]
    a = run_json("alg", "antipode", "--quiver", "A1", "--q", "2", "--x", "2*S1")
    b = run_json("alg", "antipode", "--quiver", "A1", "--q", "2", "--x", "2*S1", "--method", "recursive")
    assert a == b


def test_checks():
    assert run_json("check", "hopf", "--quiver", "A2", "--q", "2", "--max-total", "2")["ok"] is True
    assert run_json("check", "orders", "--quiver", "A3", "--q", "2", "--max-total", "3")["ok"] is True
    assert run_json("check", "pbw", "--quiver", "K", "--q", "2", "--gamma", "1,1")["ok"] is True
    data = run_json("check", "ldelta", "--quiver", "A~2,1", "--q", "2", "--ell", "1")
    assert data["dim"] == "1" and data["ok"] is True


def test_poly_fit_single():
    data = run_json("poly", "fit", "--quiver", "A1", "--X1", "S1", "--X2", "S1", "--X3", "2*S1", "--samples", "2,3,5", "--verify", "7")
    assert data["status"] == "verified"
    assert data["coefficients"] == ["1", "1"]


def test_poly_fit_needs_triple():
    code, _ = run("poly", "fit", "--quiver", "A1", "--X1", "S1")
    assert code == EXIT_USAGE


def test_poly_fit_file(tmp_path: Path):
    f = tmp_path / "t.json"
    f.write_text(json.dumps({"triples": [{"quiver": "A2", "X1": "S1", "X2": "S2", "X3": "P(1)"}, {"quiver": "A1", "X1": "S1", "X2": "S1", "X3": "2*S1"}]}))
    data = run_json("poly", "fit", "--triples", str(f), "--samples", "2,3,5", "--verify", "7")
    assert [d["coefficients"] for d in data] == [["1"], ["1", "1"]]


@pytest.mark.parametrize(
    "argv,code",
    [
        (["hall", "g", "--quiver", "nope", "--M", "S1", "--N", "S1", "--L", "S1"], EXIT_USAGE),
        (["hall", "g", "--quiver", "A2", "--M", "S1", "--N", "S2", "--L", "P(7)"], EXIT_USAGE),
        (["hall", "g", "--quiver", "A2", "--M", "S1", "--N", "S2", "--L", "tau^-2 P(2)"], EXIT_MISS),
        (["hall", "g", "--quiver", "A1", "--M", "3*S1", "--N", "3*S1", "--L", "6*S1", "--budget-ops", "2"], EXIT_BUDGET),
        (["bogus"], EXIT_USAGE),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert run(*argv)[0] == code
    err = capsys.readouterr().err.strip().splitlines()
    if argv[0] != "bogus":
        assert json.loads(err[-1])["error"] in {"usage", "budget", "catalog-miss"}


def test_csv_and_pretty():
    code, text = run("catalog", "list", "--quiver", "A2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 3
    assert {r["label"] for r in rows} == {"P(1)", "P(2)", "tau^-1 P(2)"}
    code, text = run("hall", "g", "--quiver", "A2", "--M", "S1", "--N", "S2", "--L", "P(1)", "--format", "pretty")
    assert code == 0 and text.strip() == "g: 1"


def test_deterministic():
    argv = ("catalog", "list", "--quiver", "A~2,1", "--q", "3", "--bound", "3", "--seed", "7")
    assert run(*argv) == run(*argv)


def test_budget_does_not_leak():
    # a fresh count, so nothing is served from the calculator cache
    argv = ["hall", "g", "--quiver", "A1", "--q", "7", "--M", "S1", "--N", "2*S1", "--L", "3*S1"]
    assert run(*argv, "--budget-ops", "1")[0] == EXIT_BUDGET
    assert get_calculator(get_catalog(builtin("A1"), 7)).budget == DEFAULT_BUDGET
    # lines in F_7^3
    assert run_json(*argv) == {"g": "57"}
