from paiditp.formulas import FALSE, Exists, Forall, conj, disj, eq, leq, ne, neg, pred
from paiditp.semantics import (
    Interp,
    bounded_model_search,
    counterexample,
    equivalent,
    evaluate,
)
from paiditp.terms import LinTerm

x, y = LinTerm.sym("x"), LinTerm.sym("y")
fy = LinTerm.app("f", [y])


def test_decided_conjunction_skips_missing_entries():
    # p(y) is never looked up because the second conjunct is already false
    assert evaluate(conj(pred("p", [y]), eq(y - 1)), {"y": 0}, Interp()) is False
    assert evaluate(disj(pred("p", [y]), eq(y)), {"y": 0}, Interp()) is True


def test_guarded_quantifier_visits_guard_solutions_only():
    f = Forall("x", disj(ne(x * 3 - y), leq(x - 100)))
    # for y = 300 the only guard solution is x = 100, far outside the bound
    assert evaluate(f, {"y": 300}, Interp(bound=2)) is True
    assert evaluate(f, {"y": 303}, Interp(bound=2)) is False


def test_model_search_fills_function_tables():
    model = bounded_model_search(conj(eq(fy - 2), eq(y - 1)), bound=3)
    assert model.consts == {"y": 1}
    assert model.interp.funs[("f", (1,))] == 2


def test_unsatisfiable_function_constraint():
    assert bounded_model_search(conj(eq(fy - 1), eq(fy - 2)), bound=3) is None


def test_counterexample_reports_a_distinguishing_point():
    env, _ = counterexample(leq(y), leq(y - 1), bound=3)
    assert env == {"y": 1}
    assert equivalent(Exists("x", conj(eq(x * 2 - y), pred("p", [x]))), neg(Forall("x", disj(ne(x * 2 - y), neg(pred("p", [x]))))), bound=4)
    assert not equivalent(pred("p", [y]), FALSE, bound=2)
