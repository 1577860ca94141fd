"""End-to-end acceptance checks; a summary line per criterion is printed at the end of the run."""

import io
import itertools
import random
import time
from pathlib import Path

import pytest
from generators import (
    multi_guard_formula,
    paid_formula,
    parity_terms,
    projection_instance,
    uf_formula,
)

from paiditp.axioms import rel_encode
from paiditp.cli import EXIT_OK, EXIT_SAT, run
from paiditp.formulas import FALSE, Forall, conj, disj, eq, is_quantifier_free, ne, pred
from paiditp.fuzz import corpus
from paiditp.guards import (
    classify_fragment,
    from_div_form,
    normalize_guards,
    to_div_form,
)
from paiditp.intmath import bareiss_det, matmul, smith_decompose
from paiditp.pipeline import interpolate
from paiditp.prover import ProverConfig
from paiditp.semantics import (
    Interp,
    equivalent,
    evaluate,
    satisfiable_relational,
    satisfiable_with_functions,
)
from paiditp.sexpr import Problem, parse_formula, parse_problem
from paiditp.terms import LinTerm
from paiditp.verify import (
    VERIFIED,
    check_interpolant,
    floor_shift_bounded,
    integer_projection_witness,
    parity_avoiding_valid,
    parity_avoiding_witness,
)

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
a, b, c, d = (LinTerm.sym(n) for n in "abcd")


def load(name):
    return parse_problem((PROBLEMS / f"{name}.sexp").read_text())


def solve(name, **kw):
    prob = load(name)
    config = ProverConfig(**kw)
    out = interpolate(prob.part_a, prob.part_b, config)
    assert out.status == "interpolant", out.reason
    report = check_interpolant(prob.part_a, prob.part_b, out.interpolant, out.relational, config)
    return prob, out, report


@pytest.mark.criterion(1, "halves problem: verified, PAID+UP, div form equals (2 does not divide y) or p(y div 2)")
def test_halves_end_to_end():
    prob, out, report = solve("halves")
    assert report.verdict == VERIFIED
    assert classify_fragment(out.interpolant) == "PAID+UP"
    qf = to_div_form(out.interpolant)
    assert is_quantifier_free(qf)
    expected = parse_formula("(or (not (divides 2 y)) (p (div y 2)))", Problem(consts={"y": "Int"}, preds={"p": 1}))
    assert equivalent(qf, expected, bound=6)
    y, x = LinTerm.sym("y"), LinTerm.sym("x")
    assert equivalent(out.interpolant, Forall("x", disj(ne(y - x * 2), pred("p", [x]))), bound=6)


@pytest.mark.criterion(2, "halves problem: raw extracted interpolant is quantified")
def test_raw_interpolant_is_not_quantifier_free():
    _, out, _ = solve("halves")
    assert not is_quantifier_free(out.raw)
    assert classify_fragment(out.raw) in ("PAID+UP", "GENERAL")


def _truth_table(f):
    return [evaluate(f, dict(zip("abcd", v)), Interp()) for v in itertools.product(range(-4, 5), repeat=4)]


@pytest.mark.criterion(3, "function-consistency order decides the interpolant shape")
@pytest.mark.parametrize(
    "order,expected",
    [
        ("derivation", disj(ne(a - 1), conj(eq(b - c), eq(d - 1)))),
        ("reverse", conj(disj(ne(a - 1), eq(b - c)), eq(d - 1))),
    ],
)
def test_instance_order(order, expected):
    _, out, report = solve("two_functions", fc_order=order)
    assert report.verdict == VERIFIED
    assert _truth_table(out.interpolant) == _truth_table(expected)


@pytest.mark.criterion(4, "restricted strategy yields false, not an unguarded universal")
def test_restricted_strategy():
    _, out, report = solve("guard_trap", strategy="restricted")
    assert report.verdict == VERIFIED
    assert equivalent(out.interpolant, FALSE, bound=4)
    assert not equivalent(out.interpolant, Forall("x", pred("p", [LinTerm.sym("x")])), bound=4)


@pytest.mark.criterion(5, "array pair closes within budget with a verified quantified interpolant")
def test_array_pair():
    _, out, report = solve("arrays", max_nodes=100_000)
    assert out.proof.size() <= 100_000
    assert report.verdict == VERIFIED
    assert classify_fragment(out.interpolant) != "QF-PA"
    assert not is_quantifier_free(out.interpolant)


def _random_matrix(rng):
    k, n = rng.randint(1, 4), rng.randint(1, 4)
    return [[rng.randint(-9, 9) for _ in range(n)] for _ in range(k)]


@pytest.mark.criterion(6, "Smith decomposition on 200 random matrices, exact and under 2 s")
def test_smith_suite():
    rng = random.Random(6)
    start = time.perf_counter()
    for _ in range(200):
        m = _random_matrix(rng)
        st = smith_decompose(m)
        assert matmul(matmul(st.L, st.S), st.R) == m
        assert abs(bareiss_det(st.L)) == 1 and abs(bareiss_det(st.R)) == 1
        for i, row in enumerate(st.S):
            for j, v in enumerate(row):
                assert v == (st.diag[i] if i == j and i < st.rank else 0)
        assert all(v > 0 for v in st.diag)
        assert all(st.diag[i + 1] % st.diag[i] == 0 for i in range(st.rank - 1))
    assert time.perf_counter() - start < 2.0


@pytest.mark.criterion(7, "guard normalization preserves meaning on 100 random formulas")
def test_guard_normalization_suite():
    for seed in range(100):
        f = multi_guard_formula(random.Random(5000 + seed))
        assert equivalent(normalize_guards(f), f, bound=6), seed


@pytest.mark.criterion(8, "div form round trip on 100 random formulas")
def test_div_round_trip_suite():
    for seed in range(100):
        f = paid_formula(random.Random(6000 + seed))
        assert equivalent(from_div_form(to_div_form(f)), f, bound=8), seed


@pytest.mark.criterion(9, "parity-avoiding and integer projection witnesses validate")
def test_witness_suite():
    for seed in range(100):
        terms = parity_terms(random.Random(8000 + seed))
        assert parity_avoiding_valid(terms, parity_avoiding_witness(terms))
    for seed in range(100):
        inst, point = projection_instance(random.Random(9000 + seed))
        z, h = integer_projection_witness(inst, point)
        assert all(0 <= hi <= inst.p**2 for hi in h)
        assert all(t[0] + sum(x * y for x, y in zip(t[1:], z)) <= 0 for t in inst.ts)
        assert all(s[0] + sum(x * y for x, y in zip(s[1:], z)) != 0 for s in inst.ss)
        assert floor_shift_bounded(inst, point)


def _cli(text, tmp_path, *flags):
    f = tmp_path / "problem.sexp"
    f.write_text(text)
    out, err = io.StringIO(), io.StringIO()
    return run([str(f), *flags], out, err), out.getvalue()


@pytest.mark.criterion(10, "soundness fuzz: 300 unsatisfiable pairs verified, decoys rejected, under 60 s")
def test_soundness_fuzz(tmp_path):
    start = time.perf_counter()
    rng = random.Random(10)
    for kind, text in corpus(300, rng):
        code, out = _cli(text, tmp_path, "--verify")
        assert code == EXIT_OK, (kind, text, out)
        assert out.splitlines()[1].endswith("(vocab Pass) (verdict Verified))"), (kind, text, out)
    for kind, text in corpus(300, rng, sat=True):
        code, out = _cli(text, tmp_path, "--verify")
        assert code == EXIT_SAT and out.strip() == "satisfiable", (kind, text, out)
    assert time.perf_counter() - start < 60.0


@pytest.mark.criterion(11, "relational encoding with consistency axioms preserves satisfiability")
def test_relational_encoding_suite():
    for seed in range(100):
        phi = uf_formula(random.Random(7000 + seed))
        assert satisfiable_with_functions(phi, bound=2) == satisfiable_relational(rel_encode(phi), bound=2), seed
