"""Command-line frontend: exit codes, JSON reports, determinism.

Only cheap commands run here (scheme, lvalue); the heavy pipeline commands
are covered through the library tests and the acceptance suite."""

import json
import subprocess
import sys

import pytest

from fuchsmon.cli import main

OP217 = "2.17"


def run_json(tmp_path, argv):
    # global flags go before the subcommand
    out = tmp_path / "report.json"
    code = main(["--json", str(out)] + list(argv))
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_scheme_shipped_operator(tmp_path):
    code, rep = run_json(tmp_path, ["scheme", OP217])
    assert code == 0
    assert rep["fuchs_relation_holds"] is True
    locs = {e["location"]: e for e in rep["singularities"]}
    assert locs["1/256"]["type"] == "halfC"
    assert locs["0"]["type"] == "MUM"
    assert locs["0"]["exponents"] == ["0", "0", "0", "0"]


def test_scheme_inline_expression(tmp_path):
    code, rep = run_json(tmp_path, ["scheme", "T^4 - 2^4*t*(2*T+1)^4"])
    assert code == 0
    assert rep["config"]["operator"] == "inline"
    locs = {e["location"]: e["type"] for e in rep["singularities"]}
    assert locs["1/256"] == "C"


def test_parse_failure_exit_code(capsys):
    assert main(["scheme", "T^5"]) == 2
    assert "fuchsmon" in capsys.readouterr().err


def test_digits_floor_enforced(capsys):
    assert main(["--digits", "10", "scheme", OP217]) == 2
    capsys.readouterr()


def test_safety_range_enforced(capsys):
    assert main(["--safety", "1.5", "scheme", OP217]) == 2
    capsys.readouterr()


def test_geometry_failure_exit_code(capsys):
    # an operator with no MUM point at 0
    assert main(["--digits", "60", "monodromy", "(1-t)*T^4 + T^2"]) == 3
    capsys.readouterr()


def test_lvalue_report(tmp_path):
    code, rep = run_json(tmp_path, ["--digits", "60", "lvalue", "8_1"])
    assert code == 0
    assert rep["form"]["level"] == 8
    assert rep["form"]["ncoeffs"] >= 2000
    # the value string carries the full requested precision
    digits = rep["L2"]["value"].split(".")[1]
    assert len(digits) > 50
    assert float(rep["functional_relation_residual"]) < 1e-50
    assert float(rep["modularity_residual"]) < 1e-30


def test_lvalue_unknown_form(capsys):
    assert main(["lvalue", "99_9"]) == 2
    capsys.readouterr()


def test_reports_are_deterministic(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(["--json", str(out1), "scheme", OP217]) == 0
    assert main(["--json", str(out2), "scheme", OP217]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_console_script_entrypoint(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "fuchsmon.cli", "--json", str(out),
         "scheme", OP217],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(out.read_text())["singularities"]


def test_list_of_commands_requires_subcommand():
    with pytest.raises(SystemExit):
        main([])
