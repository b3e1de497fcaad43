"""Command-line interface: exit codes, JSON payloads, stdin plumbing, and
byte-stable round trips.

Everything runs in-process through main(argv) so exit codes and streams
are observable without spawning subprocesses.
"""
from __future__ import annotations

import io
import json
from fractions import Fraction

import pytest

from shimlift.cli import main
from shimlift.fixtures import fixture_names
from shimlift.qseries import qexp_from_json, qexp_to_json


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    payload = json.loads(out) if out.strip() else None
    return code, payload, err


def test_lift_fixture_human_output(capsys):
    code, out, err = run(capsys, "lift", "--fixture", "cohen52", "--t", "1", "--prec", "6")
    assert code == 0
    assert "case (i)" in out
    assert "-1/2880" in out


def test_lift_fixture_json_payload(capsys):
    code, payload, _ = run_json(
        capsys, "lift", "--fixture", "cohen52", "--t", "1", "--prec", "6", "--json"
    )
    assert code == 0
    assert set(payload) >= {"lift", "verdict"}
    lift = qexp_from_json(payload["lift"])
    assert lift.coeff(0) == Fraction(-1, 2880)
    assert lift.coeff(1) == Fraction(-1, 12)
    assert payload["verdict"]["case"] == "i"
    assert payload["verdict"]["level"] == 1


def test_lift_zero_fixture(capsys):
    code, payload, _ = run_json(
        capsys, "lift", "--fixture", "zero", "--prec", "5", "--json"
    )
    assert code == 0
    assert qexp_from_json(payload["lift"]).is_zero()


def test_lift_even_index_obstruction_exit_2(capsys):
    code, payload, _ = run_json(
        capsys, "lift", "--fixture", "cohen52", "--t", "2", "--prec", "5", "--json"
    )
    assert code == 2
    assert payload["error"] == "HypothesisError"
    assert payload["case"] == "vi"
    assert payload["obstruction"] == "eta-conductor-8"


def test_lift_precision_exit_3(capsys, tmp_path):
    # a file input has whatever window it has; fixtures are rebuilt to order,
    # so only this path can come up short
    code, out, _ = run(capsys, "fixtures", "--name", "cohen52", "--prec", "100", "--json")
    assert code == 0
    p = tmp_path / "short.json"
    p.write_text(out)
    code2, payload, _ = run_json(
        capsys,
        "lift", "--input", str(p), "--k", "2", "--epsilon", "1", "--N", "1",
        "--prec", "50", "--json",
    )
    assert code2 == 3
    assert payload["error"] == "PrecisionError"
    assert payload["required_window"][1] == 50 * 50 + 1


def test_lift_from_stdin(capsys, monkeypatch):
    code, payload, _ = run_json(
        capsys, "fixtures", "--name", "cohen52", "--prec", "200", "--json"
    )
    assert code == 0
    blob = json.dumps(payload)
    monkeypatch.setattr("sys.stdin", io.StringIO(blob))
    code2, payload2, _ = run_json(
        capsys,
        "lift", "--input", "-", "--k", "2", "--epsilon", "1", "--N", "1",
        "--prec", "10", "--json",
    )
    assert code2 == 0
    assert qexp_from_json(payload2["lift"]).coeff(1) == Fraction(-1, 12)


def test_lift_composite_payload_unwraps(capsys, tmp_path):
    code, payload, _ = run_json(
        capsys, "lift", "--fixture", "cohen52", "--prec", "8", "--json"
    )
    p = tmp_path / "lifted.json"
    p.write_text(json.dumps(payload))
    # feeding a {"lift": ...} payload back in: integral weight now
    code2, payload2, _ = run_json(
        capsys,
        "verify", "--input", str(p), "--weight", "4", "--level", "1",
        "--mode", "exact", "--json",
    )
    assert code2 == 0


def test_project_requires_4n_exit_2(capsys):
    code, payload, _ = run_json(
        capsys,
        "project", "--fixture", "cohen52", "--prec", "40", "--k", "2",
        "--epsilon", "1", "--N", "1", "--json",
    )
    assert code == 2
    assert payload["error"] == "HypothesisError"
    assert "4" in payload["obstruction"]


def test_project_plus_and_two(capsys):
    code, payload, _ = run_json(
        capsys,
        "project", "--fixture", "cohen52", "--prec", "40", "--k", "2",
        "--epsilon", "1", "--N", "4", "--json",
    )
    assert code == 0
    proj = qexp_from_json(payload["projection"])
    assert proj.coeff(1) == Fraction(-1, 12)
    code2, payload2, _ = run_json(
        capsys,
        "project", "--fixture", "cohen52", "--prec", "40", "--k", "2",
        "--epsilon", "1", "--N", "4", "--two", "--json",
    )
    assert code2 == 0
    two = qexp_from_json(payload2["projection"])
    assert all(a % 4 in (0, 2) for a in two.coeffs)


def test_level_predict_worked_verdicts(capsys):
    code, payload, _ = run_json(
        capsys, "level-predict", "--N", "1", "--t", "1", "--plus", "--json"
    )
    v = payload["verdict"]
    assert code == 0 and v["case"] == "i" and v["level"] == 1
    code2, payload2, _ = run_json(
        capsys, "level-predict", "--N", "1", "--t", "2", "--json"
    )
    v2 = payload2["verdict"]
    assert code2 == 0 and v2["case"] == "vi" and v2["level"] == 2
    code3, payload3, _ = run_json(
        capsys, "level-predict", "--N", "2", "--M", "3", "--json"
    )
    v3 = payload3["verdict"]
    assert code3 == 0 and v3["case"] == "vii" and v3["level"] == 12


def test_level_predict_uncovered_case_viii(capsys):
    code, payload, _ = run_json(
        capsys, "level-predict", "--N", "1", "--M", "3", "--json"
    )
    assert code == 0
    v = payload["verdict"]
    assert v["case"] == "viii"
    assert v["level"] is None and v["covered"] is False


def test_verify_numeric_pass_and_fail(capsys):
    code, payload, _ = run_json(
        capsys,
        "verify", "--fixture", "theta", "--prec", "900",
        "--weight", "1/2", "--level", "4", "--json",
    )
    assert code == 0
    assert payload["passed"] is True
    assert payload["report"]["max_residual"] < 1e-9
    code2, payload2, _ = run_json(
        capsys,
        "verify", "--fixture", "theta", "--prec", "900",
        "--weight", "3/2", "--level", "4", "--json",
    )
    assert code2 == 1
    assert payload2["passed"] is False


def test_verify_exact_mode_failure_names_mismatch(capsys, tmp_path):
    bad = {"weight": {"num": 4, "den": 1}, "exponent_denominator": 1,
           "window": [0, 30], "coefficients": [[0, "1"], [1, "5"], [2, "7"]]}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    code, payload, _ = run_json(
        capsys, "verify", "--input", str(p), "--weight", "4", "--mode", "exact", "--json"
    )
    assert code == 1
    assert payload["passed"] is False
    assert "first_mismatch" in payload
    assert "exponent" in payload["first_mismatch"]


def test_weil_selftest_cli(capsys):
    code, payload, _ = run_json(
        capsys, "weil-selftest", "--max-n", "4", "--words", "10", "--json"
    )
    assert code == 0
    assert payload["modules"] == 6
    assert payload["max_word_error"] < 1e-10
    code2, _, _ = run_json(
        capsys, "weil-selftest", "--max-n", "2", "--words", "5", "--perturb", "--json"
    )
    assert code2 == 1


def test_fixtures_list_names(capsys):
    code, out, _ = run(capsys, "fixtures", "--list")
    assert code == 0
    for name in fixture_names():
        assert name in out


def test_fixtures_emit_and_reemit_byte_identical(capsys, tmp_path):
    code, out, _ = run(capsys, "fixtures", "--name", "hj4", "--prec", "30", "--json")
    assert code == 0
    p = tmp_path / "hj4.json"
    p.write_text(out)
    code2, out2, _ = run(capsys, "fixtures", "--reemit", str(p), "--json")
    assert code2 == 0
    assert out2 == out
    # and the payload itself parses back to the same series
    f = qexp_from_json(json.loads(out))
    g = qexp_from_json(json.loads(out2))
    assert f == g


def test_fixtures_reemit_canonicalizes_key_order(capsys, tmp_path):
    code, out, _ = run(capsys, "fixtures", "--name", "e4", "--prec", "10", "--json")
    scrambled = json.dumps(json.loads(out), sort_keys=False, indent=2)
    p = tmp_path / "e4.json"
    p.write_text(scrambled)
    code2, out2, _ = run(capsys, "fixtures", "--reemit", str(p), "--json")
    assert code2 == 0
    assert out2 == out


def test_unknown_fixture_is_schema_error_exit_2(capsys):
    code, payload, _ = run_json(
        capsys, "lift", "--fixture", "nope", "--prec", "5", "--json"
    )
    assert code == 2


def test_human_error_goes_to_stderr(capsys):
    code, out, err = run(capsys, "lift", "--fixture", "cohen52", "--t", "2", "--prec", "5")
    assert code == 2
    assert not out.strip()
    assert "eta-conductor-8" in err or "conductor" in err
