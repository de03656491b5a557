import stat
import sys

import pytest

from modules.errors import ProverError
from prover_runner import ProverResult, ProverRunner, parse_szs_status

pytestmark = pytest.mark.skipif(sys.platform == "win32", reason="fake provers are shell scripts")

PROBLEM = "fof(ax1, axiom, p(a)).\nfof(goal, conjecture, ?[X]: p(X)).\n"


def fake_prover(tmp_path, body, name="prover.sh"):
    script = tmp_path / name
    script.write_text("#!/bin/sh\n" + body + "\n")
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    return str(script)


def test_parse_szs_status():
    assert parse_szs_status("% SZS status Theorem for goal.p\n") == "Theorem"
    assert parse_szs_status("% SZS status CounterSatisfiable for x") == "CounterSatisfiable"
    assert parse_szs_status("no verdict") == "Unknown"


@pytest.mark.parametrize("status,code", [
    ("Theorem", 0), ("Unsatisfiable", 0), ("CounterSatisfiable", 1),
    ("Satisfiable", 1), ("GaveUp", 4), ("Timeout", 4),
])
def test_exit_codes(status, code):
    assert ProverResult(status, "").exit_code == code


def test_template_needs_a_file_placeholder():
    with pytest.raises(ProverError):
        ProverRunner("vampire --mode casc")


def test_runs_prover_on_problem_file(tmp_path):
    script = fake_prover(tmp_path, 'grep -q conjecture "$1" && echo "% SZS status Theorem for $1"')
    result = ProverRunner(f"{script} {{file}}").run(PROBLEM)
    assert result.status == "Theorem"
    assert result.exit_code == 0


def test_keeps_problem_file(tmp_path):
    script = fake_prover(tmp_path, 'echo "% SZS status CounterSatisfiable for $1"')
    kept = tmp_path / "goal.p"
    problem = "% Größe ≤ 3\n" + PROBLEM
    result = ProverRunner(f"{script} {{file}}").run(problem, keep=str(kept))
    assert result.exit_code == 1
    assert kept.read_text(encoding="utf-8") == problem


def test_missing_prover(tmp_path):
    runner = ProverRunner(f"{tmp_path / 'no-such-prover'} {{file}}")
    with pytest.raises(ProverError, match="prover not found"):
        runner.run(PROBLEM)


def test_timeout(tmp_path):
    script = fake_prover(tmp_path, "exec sleep 5")
    result = ProverRunner(f"{script} {{file}}", timeout=0.5).run(PROBLEM)
    assert result.status == "Timeout"
    assert result.exit_code == 4
