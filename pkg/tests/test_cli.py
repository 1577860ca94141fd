import io
import subprocess
import sys
from pathlib import Path

import pytest

from paiditp.cli import EXIT_INPUT, EXIT_OK, EXIT_SAT, EXIT_UNKNOWN, run

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_halves_problem_in_div_form():
    code, out, _ = call(PROBLEMS / "halves.sexp", "--div-form", "--verify")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "(or (not (divides 2 y)) (p (div y 2)))"
    assert lines[1].endswith("(verdict Verified))")


def test_default_output_is_guarded_universal():
    code, out, _ = call(PROBLEMS / "halves.sexp")
    assert code == EXIT_OK
    assert out.strip() == "(forall ((x Int)) (or (not (= (* 2 x) y)) (p x)))"


def test_proof_trace_is_written(tmp_path):
    trace = tmp_path / "proof.txt"
    code, _, _ = call(PROBLEMS / "two_functions.sexp", "--proof", trace)
    assert code == EXIT_OK
    lines = trace.read_text().splitlines()
    assert lines[0].startswith("(node 0 ")
    assert all(line.startswith("(node ") for line in lines)


def test_satisfiable_input(tmp_path):
    f = tmp_path / "sat.sexp"
    f.write_text("(declare-const x Int)(assert-A (<= x 3))(assert-B (<= 0 x))")
    code, out, _ = call(f)
    assert code == EXIT_SAT and out.strip() == "satisfiable"


def test_budget_exhaustion(tmp_path):
    code, out, err = call(PROBLEMS / "two_functions.sexp", "--budget", "2")
    assert code == EXIT_UNKNOWN
    assert out.strip() == "unknown" and "reason" in err


@pytest.mark.parametrize(
    "text",
    ["(assert-A (= x 1))", "(declare-const x Int)(assert-A (= x 1)", "(declare-const x Bool)"],
)
def test_malformed_input(tmp_path, text):
    f = tmp_path / "bad.sexp"
    f.write_text(text)
    code, _, err = call(f)
    assert code == EXIT_INPUT and err.startswith("error:")


def test_missing_file_and_bad_flag(tmp_path):
    assert call(tmp_path / "nope.sexp")[0] == EXIT_INPUT
    assert call(PROBLEMS / "halves.sexp", "--strategy", "greedy")[0] == EXIT_INPUT


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "paiditp.cli", str(PROBLEMS / "guard_trap.sexp")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == EXIT_OK
    assert proc.stdout.strip() == "false"
