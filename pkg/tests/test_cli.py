"""The command line interface: one JSON record per run on stdout, fixed field
order, exit codes, and the differential fuzz subcommand."""

import json
import subprocess
import sys

import pytest

from neqsolve import __version__
from neqsolve.cli import main

EXAMPLE = "structure group\nvar x z w\neq z (+ x x)\neq w 0\nneq z w\n"
SL_EXAMPLE = "structure semilattice\nvar x y\neq x (meet x y)\nneq x y\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip()
    assert out.count("\n") == 0, "exactly one stdout record expected"
    return code, json.loads(out)


def check_envelope(rec, command):
    assert list(rec)[:3] == ["version", "command", "status"]
    assert rec["version"] == __version__
    assert rec["command"] == command


class TestSolve:
    def test_sat_with_witness(self, tmp_path, capsys):
        f = tmp_path / "inst.txt"
        f.write_text(EXAMPLE)
        code, rec = run(
            capsys, "solve", "--structure", "2^2:1 + 2^1:w", "--instance", str(f)
        )
        assert code == 0
        check_envelope(rec, "solve")
        assert rec["status"] == "sat"
        assert rec["classification"] == {"status": "tractable", "m": 2, "with_double": True}
        assert rec["method"] == "polynomial"
        w = rec["witness"]
        assert w["assignment"]["x"]["head"] == [1]
        assert w["assignment"]["z"]["head"] == [2]

    def test_unsat_has_reason_no_witness(self, tmp_path, capsys):
        f = tmp_path / "inst.txt"
        f.write_text(EXAMPLE)
        code, rec = run(capsys, "solve", "--structure", "2^1:w", "--instance", str(f))
        assert code == 0
        assert rec["status"] == "unsat"
        assert "witness" not in rec
        assert rec["reason"] == "disequality-entailed"
        assert rec["pair"] == ["z", "w"]

    def test_semilattice_target(self, tmp_path, capsys):
        f = tmp_path / "inst.txt"
        f.write_text(SL_EXAMPLE)
        code, rec = run(capsys, "solve", "--structure", "U", "--instance", str(f))
        assert code == 0
        assert rec["status"] == "sat"
        assert rec["structure"] == "U"
        assert sorted(rec["witness"]["assignment"]) == ["_t1", "x", "y"]

    def test_kind_mismatch_is_input_error(self, tmp_path, capsys):
        f = tmp_path / "inst.txt"
        f.write_text(SL_EXAMPLE)
        code, rec = run(capsys, "solve", "--structure", "2^1:w", "--instance", str(f))
        assert code == 2
        assert rec["status"] == "error"

    def test_missing_file(self, capsys):
        code, rec = run(capsys, "solve", "--structure", "U", "--instance", "/no/such")
        assert code == 2
        assert rec["status"] == "error"

    def test_np_hard_search(self, tmp_path, capsys):
        f = tmp_path / "inst.txt"
        f.write_text("structure group\nvar x y\neq x y\nneq x y\n")
        code, rec = run(
            capsys, "solve", "--structure", "3^2:1 + 3^1:w", "--instance", str(f)
        )
        assert code == 0
        assert rec["classification"] == {"status": "np-hard"}
        assert rec["method"] == "search-based"
        assert rec["status"] == "unsat"

    def test_budget_status(self, tmp_path, capsys):
        f = tmp_path / "inst.txt"
        f.write_text("structure group\nvar x y\neq x y\nneq x y\n")
        code, rec = run(
            capsys, "solve", "--structure", "2^3:1 + 2^1:w", "--instance", str(f),
            "--budget", "3",
        )
        assert code == 0
        assert rec["status"] == "budget-exhausted"
        assert "witness" not in rec

    def test_bad_budget(self, tmp_path, capsys):
        f = tmp_path / "inst.txt"
        f.write_text(EXAMPLE)
        code, rec = run(
            capsys, "solve", "--structure", "U", "--instance", str(f), "--budget", "0"
        )
        assert code == 2

    def test_env_budget_override(self, tmp_path, capsys, monkeypatch):
        f = tmp_path / "inst.txt"
        f.write_text("structure group\nvar x y\neq x y\nneq x y\n")
        monkeypatch.setenv("NEQSOLVE_BUDGET", "3")
        code, rec = run(
            capsys, "solve", "--structure", "2^3:1 + 2^1:w", "--instance", str(f)
        )
        assert code == 0
        assert rec["status"] == "budget-exhausted"
        monkeypatch.setenv("NEQSOLVE_BUDGET", "junk")
        code, rec = run(
            capsys, "solve", "--structure", "2^3:1 + 2^1:w", "--instance", str(f)
        )
        assert code == 2


class TestClassify:
    def test_tractable(self, capsys):
        code, rec = run(capsys, "classify", "--group", "2^2:1 + 2^1:w")
        assert code == 0
        check_envelope(rec, "classify")
        assert rec["status"] == "tractable"
        assert rec["m"] == 2 and rec["with_double"] is True
        assert rec["normal_form"] == [
            {"p": 2, "omega_level": 1, "finite": [[2, 1]]}
        ]

    def test_np_hard(self, capsys):
        code, rec = run(capsys, "classify", "--group", "3^2:1 + 3^1:w")
        assert code == 0
        assert rec["status"] == "np-hard"
        assert "m" not in rec

    def test_trivial(self, capsys):
        code, rec = run(capsys, "classify", "--group", "1")
        assert code == 0
        assert rec["status"] == "tractable"
        assert rec["m"] == 1 and rec["with_double"] is False

    def test_bad_descriptor(self, capsys):
        code, rec = run(capsys, "classify", "--group", "6^1:1")
        assert code == 2
        assert rec["status"] == "error"


class TestIdentityAndEntailment:
    def test_identity_over_groups(self, capsys):
        code, rec = run(
            capsys, "check-identity", "--structure", "2^1:w",
            "--lhs", "(+ x x)", "--rhs", "0",
        )
        assert code == 0
        check_envelope(rec, "check-identity")
        assert rec["status"] == "valid"
        code, rec = run(
            capsys, "check-identity", "--structure", "2^2:1 + 2^1:w",
            "--lhs", "(+ x x)", "--rhs", "0",
        )
        assert rec["status"] == "invalid"

    def test_identity_over_semilattice(self, capsys):
        code, rec = run(
            capsys, "check-identity", "--structure", "U",
            "--lhs", "(meet x y)", "--rhs", "(meet y x)",
        )
        assert rec["status"] == "valid"
        code, rec = run(
            capsys, "check-identity", "--structure", "U",
            "--lhs", "(meet x y)", "--rhs", "x",
        )
        assert rec["status"] == "invalid"

    def test_entail_with_assumptions(self, tmp_path, capsys):
        f = tmp_path / "assume.txt"
        f.write_text("structure group\nvar x y\neq y (+ x x)\n")
        code, rec = run(
            capsys, "entail", "--structure", "2^1:w",
            "--assume", str(f), "--lhs", "y", "--rhs", "0",
        )
        assert code == 0
        assert rec["status"] == "valid"
        code, rec = run(
            capsys, "entail", "--structure", "2^2:1 + 2^1:w",
            "--assume", str(f), "--lhs", "y", "--rhs", "0",
        )
        assert rec["status"] == "invalid"

    def test_entail_without_assumptions(self, capsys):
        code, rec = run(
            capsys, "entail", "--structure", "U", "--lhs", "x", "--rhs", "y"
        )
        assert rec["status"] == "invalid"

    def test_assume_rejects_disequalities(self, tmp_path, capsys):
        f = tmp_path / "assume.txt"
        f.write_text("structure group\nvar x y\nneq x y\n")
        code, rec = run(
            capsys, "entail", "--structure", "2^1:w",
            "--assume", str(f), "--lhs", "x", "--rhs", "y",
        )
        assert code == 2

    def test_bad_term_syntax(self, capsys):
        code, rec = run(
            capsys, "check-identity", "--structure", "2^1:w",
            "--lhs", "(+ x", "--rhs", "0",
        )
        assert code == 2

    def test_budget_exhaustion_status(self, capsys):
        code, rec = run(
            capsys, "check-identity", "--structure", "2^3:1 + 2^1:w",
            "--lhs", "x", "--rhs", "y", "--budget", "1",
        )
        assert code == 0
        assert rec["status"] == "budget-exhausted"


class TestVerifyPs:
    def test_pass(self, capsys):
        code, rec = run(
            capsys, "verify-ps", "--n", "2", "--truncation", "4", "--samples", "200"
        )
        assert code == 0
        check_envelope(rec, "verify-ps")
        assert rec["status"] == "pass"
        assert rec["report"]["checks"]["identity"]["failed"] == 0

    def test_validation(self, capsys):
        code, rec = run(capsys, "verify-ps", "--n", "0")
        assert code == 2


class TestFuzz:
    def test_group_campaign(self, tmp_path, capsys):
        log = tmp_path / "trials.jsonl"
        code, rec = run(
            capsys, "fuzz", "--structure", "2^2:1 + 2^1:w", "--count", "40",
            "--seed", "3", "--log", str(log),
        )
        assert code == 0
        check_envelope(rec, "fuzz")
        assert rec["status"] == "pass"
        assert rec["count"] == 40 and rec["agreements"] == 40
        lines = [json.loads(l) for l in log.read_text().splitlines()]
        assert len(lines) == 40
        for entry in lines:
            assert set(entry) >= {"seed", "descriptor", "verdict_solver", "verdict_oracle", "agree"}
            assert entry["agree"] is True

    def test_semilattice_campaign(self, capsys):
        code, rec = run(capsys, "fuzz", "--structure", "U", "--count", "25", "--seed", "1")
        assert code == 0
        assert rec["status"] == "pass"
        assert rec["agreements"] == 25

    def test_semilattice_var_clamp(self, capsys):
        code, rec = run(
            capsys, "fuzz", "--structure", "U", "--count", "5", "--max-vars", "4"
        )
        assert code == 2

    def test_np_hard_target_rejected(self, capsys):
        code, rec = run(
            capsys, "fuzz", "--structure", "3^2:1 + 3^1:w", "--count", "5"
        )
        assert code == 2
        assert rec["status"] == "error"


class TestInvocation:
    def test_unknown_command(self, capsys):
        code, rec = run(capsys, "frobnicate")
        assert code == 2
        assert rec["status"] == "error"

    def test_console_script_end_to_end(self, tmp_path):
        f = tmp_path / "inst.txt"
        f.write_text(EXAMPLE)
        proc = subprocess.run(
            [sys.executable, "-m", "neqsolve.cli", "--verbose", "solve",
             "--structure", "1", "--instance", str(f)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        rec = json.loads(proc.stdout)
        assert rec["status"] == "unsat"
        assert proc.stdout.strip().count("\n") == 0  # logs stay on stderr
