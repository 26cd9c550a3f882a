from __future__ import annotations

import json
import subprocess
import sys

import jsonschema
import pytest

from mtcalc import builtin
from mtcalc.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main, report_schema

NAMES = ["trivial", "fibonacci", "ising", "z3"]
SCHEMA = report_schema()


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_exit(capsys, *argv):
    """Like :func:`run` for argument errors, which exit through argparse."""
    with pytest.raises(SystemExit) as ei:
        main(list(argv))
    out = capsys.readouterr()
    return ei.value.code, out.out, out.err


def test_validate_builtin(capsys):
    code, out, _ = run(capsys, "validate", "--builtin", "fibonacci")
    assert code == EXIT_OK
    assert out.startswith("PASS validate[fibonacci]")


@pytest.mark.parametrize("name", NAMES)
def test_run_all_json(capsys, name):
    code, out, _ = run(capsys, "run-all", "--builtin", name, "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    assert len(data) == 12
    assert all(r["pass"] for r in data)


def test_run_all_threads_same_result(capsys):
    _, a, _ = run(capsys, "run-all", "--builtin", "ising", "--json")
    _, b, _ = run(capsys, "run-all", "--builtin", "ising", "--json", "--threads", "4")
    strip = lambda d: [(r["check"], r["pass"]) for r in json.loads(d)]  # noqa: E731
    assert strip(a) == strip(b)


def test_validate_file_and_fail_exit(capsys, tmp_path):
    raw = builtin("fibonacci").to_dict()
    p = tmp_path / "fib.json"
    p.write_text(json.dumps(raw))
    assert run(capsys, "validate", str(p))[0] == EXIT_OK
    # break the pentagon: valid schema, failing check
    raw["F"][-1]["value"][0] += 0.3
    p.write_text(json.dumps(raw))
    code, out, _ = run(capsys, "validate", "--category", str(p), "--json")
    assert code == EXIT_FAIL
    jsonschema.validate(json.loads(out), SCHEMA)


@pytest.mark.parametrize("argv", [
    ["validate", "--builtin", "su2_5"],
    ["validate", "/no/such/file.json"],
    ["smatrix"],
    ["validate", "--builtin", "fibonacci", "--category", "x.json"],
    ["eval", "(trace (id tau)", "--builtin", "fibonacci"],
    ["eval", "(trace (id nope))", "--builtin", "fibonacci"],
    ["build-cardy", "--builtin", "fibonacci", "--brane", "anyon"],
])
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT
    assert err.startswith("mtcalc:")


def test_malformed_json_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"labels": ["1",')
    assert run(capsys, "validate", str(p))[0] == EXIT_INPUT
    assert run(capsys, "check-frobenius", str(p), "--builtin", "fibonacci")[0] == EXIT_INPUT


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["validate", "--tol", "abc"], ["run-all", "--threads", "0"]])
def test_usage_errors_exit_2(capsys, argv):
    assert run_exit(capsys, *argv)[0] == EXIT_INPUT


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "(trace (id tau))", "--builtin", "fibonacci")
    assert code == EXIT_OK
    assert float(out) == pytest.approx(1.6180339887)
    code, out, _ = run(capsys, "eval", "(trace (twist tau))", "--builtin", "fibonacci", "--json")
    re_, im = json.loads(out)["scalar"]
    assert re_ == pytest.approx(-1.309016994) and im == pytest.approx(-0.9510565163)


def test_smatrix_and_info(capsys):
    code, out, _ = run(capsys, "smatrix", "--builtin", "ising", "--json")
    S = json.loads(out)["S"]
    assert S[0][2][0] == pytest.approx(2 ** -0.5)
    code, out, _ = run(capsys, "info", "--builtin", "fibonacci", "--double", "--json")
    assert json.loads(out)["rank"] == 4


def test_cardy_round_trip(capsys, tmp_path):
    p = tmp_path / "t.json"
    assert run(capsys, "build-cardy", "--builtin", "fibonacci", "--brane", "1+tau", "-o", str(p))[0] == EXIT_OK
    code, out, _ = run(capsys, "check-cardy", str(p), "--builtin", "fibonacci", "--json", "--threads", "2")
    assert code == EXIT_OK
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    assert len(data) == 5


def test_algebra_commands(capsys, tmp_path):
    from mtcalc import cardy as cd
    from mtcalc import frobenius as fr

    cat = builtin("ising")
    p = tmp_path / "a.json"
    p.write_text(json.dumps(fr.to_json(cd.build_diagonal_closed(cat), double=True)))
    assert run(capsys, "check-frobenius", str(p), "--builtin", "ising")[0] == EXIT_OK
    assert run(capsys, "check-modular-invariance", str(p), "--builtin", "ising")[0] == EXIT_OK
    q = tmp_path / "b.json"
    q.write_text(json.dumps(fr.to_json(cd.build_diagonal_closed(cat, phases=False), double=True)))
    assert run(capsys, "check-modular-invariance", str(q), "--builtin", "ising")[0] == EXIT_FAIL
    r = tmp_path / "c.json"
    r.write_text(json.dumps(fr.to_json(fr.unit_algebra(cat))))
    assert run(capsys, "check-modular-invariance", str(r), "--builtin", "ising")[0] == EXIT_INPUT


def test_check_relations_and_sl2z(capsys):
    assert run(capsys, "check-relations", "--builtin", "z3")[0] == EXIT_OK
    assert run(capsys, "check-sl2z", "--builtin", "fibonacci")[0] == EXIT_OK


def test_schema_command(capsys):
    code, out, _ = run(capsys, "schema")
    assert json.loads(out) == SCHEMA


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mtcalc.cli", "validate", "--builtin", "ising"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    proc = subprocess.run([sys.executable, "-m", "mtcalc.cli", "validate", "--builtin", "nope"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
