import itertools
from pathlib import Path

import pytest

from paiditp.calculus import LF, L, R, Sequent, export_trace, init_sequent
from paiditp.formulas import FALSE, conj, disj, divides, eq, leq, ne, neg, pred
from paiditp.guards import classify_fragment
from paiditp.pipeline import interpolate
from paiditp.proofcheck import validate_proof
from paiditp.prover import Closed, ProverConfig, Satisfiable, Unknown, prove
from paiditp.semantics import Interp, equivalent, evaluate
from paiditp.sexpr import parse_problem
from paiditp.terms import LinTerm

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
a, b, c, d = (LinTerm.sym(n) for n in "abcd")


def load(name):
    return parse_problem((PROBLEMS / f"{name}.sexp").read_text())


def run(name, **kw):
    prob = load(name)
    return interpolate(prob.part_a, prob.part_b, ProverConfig(**kw))


def test_shared_predicate():
    out = interpolate(pred("p", [c]), neg(pred("p", [c])))
    assert out.status == "interpolant"
    assert out.interpolant == pred("p", [c])


def test_parity_interpolant():
    # a = 2b and a = 2c + 1 separate on the parity of a
    out = interpolate(eq(a - b * 2), eq(a - c * 2 - 1))
    assert out.status == "interpolant"
    assert equivalent(out.interpolant, divides(2, a), bound=6)


def test_halves_problem_yields_guarded_universal():
    out = run("halves")
    assert out.status == "interpolant"
    assert classify_fragment(out.interpolant) == "PAID+UP"
    assert not validate_proof(out.proof)


def test_restricted_strategy_gives_false_on_guard_example():
    out = run("guard_trap", strategy="restricted")
    assert out.status == "interpolant"
    assert out.interpolant == FALSE


def _table(f, names=("a", "b", "c", "d")):
    rows = []
    for vals in itertools.product(range(-4, 5), repeat=len(names)):
        rows.append(evaluate(f, dict(zip(names, vals)), Interp()))
    return rows


@pytest.mark.parametrize(
    "order,expected",
    [
        ("derivation", disj(ne(a - 1), conj(eq(b - c), eq(d - 1)))),
        ("reverse", conj(disj(ne(a - 1), eq(b - c)), eq(d - 1))),
    ],
)
def test_function_instance_order(order, expected):
    out = run("two_functions", fc_order=order)
    assert out.status == "interpolant"
    assert not validate_proof(out.proof)
    assert _table(out.interpolant) == _table(expected)


def test_satisfiable_pair():
    seq = init_sequent(leq(c - 3), leq(-c + 1))
    res = prove(seq)
    assert isinstance(res, Satisfiable)
    assert 1 <= res.model["c"] <= 3


def test_budget_exhaustion_is_unknown():
    res = prove(init_sequent(leq(c - 3), leq(-c + 1)), ProverConfig(max_nodes=1, use_oracle=False))
    assert isinstance(res, Unknown)


def test_strengthening_closes_integer_gap():
    # c <= 2 against c >= 2 with c != 2: closing needs the case split c = 2 or c <= 1
    seq = Sequent((LF(leq(c - 2), L), LF(leq(-c + 2), R)), (LF(eq(c - 2), R),))
    res = prove(seq, ProverConfig(use_oracle=False))
    assert isinstance(res, Closed)
    assert not validate_proof(res.proof)
    assert any(n.rule == "STRENGTHEN" for n in res.proof.iter_nodes())
    assert equivalent(res.interpolant, leq(c - 2), bound=5)


def test_trace_is_deterministic():
    first = export_trace(run("two_functions").proof)
    second = export_trace(run("two_functions").proof)
    assert first == second
    assert first.startswith("(node 0 ")


def test_array_problem_closes_with_quantified_interpolant():
    out = run("arrays")
    assert out.status == "interpolant"
    assert classify_fragment(out.interpolant) != "QF-PA"
    assert not validate_proof(out.proof)
