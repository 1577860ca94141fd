import random
from fractions import Fraction

import pytest
from generators import parity_terms, projection_instance
from hypothesis import given, settings
from hypothesis import strategies as st

from paiditp.formulas import FALSE, TRUE, eq, neg, pred
from paiditp.pipeline import interpolate
from paiditp.terms import LinTerm
from paiditp.verify import (
    REJECTED,
    VERIFIED,
    HypothesisViolated,
    ProjectionInstance,
    check_interpolant,
    floor_shift_bounded,
    integer_projection_witness,
    linterm_pair,
    parity_avoiding_valid,
    parity_avoiding_witness,
    vocabulary_violations,
)

c, d = LinTerm.sym("c"), LinTerm.sym("d")
P = pred("p", [c])


def test_correct_interpolant_is_verified():
    report = check_interpolant(P, neg(P), P)
    assert report.verdict == VERIFIED
    assert str(report) == "(check (left Proved) (right Proved) (vocab Pass) (verdict Verified))"


@pytest.mark.parametrize("bad", [FALSE, TRUE])
def test_wrong_interpolant_is_rejected(bad):
    report = check_interpolant(P, neg(P), bad)
    assert report.verdict == REJECTED


def test_non_shared_symbol_is_reported():
    a = eq(c - d)
    b = neg(eq(c - d))
    assert vocabulary_violations(a, eq(c), eq(d)) == frozenset({"d"})
    report = check_interpolant(a, b, a)
    assert report.verdict == VERIFIED
    bad = check_interpolant(a, eq(c - 1), eq(c - d))
    assert not bad.vocab_ok and bad.verdict == REJECTED


def test_pipeline_output_verifies():
    a = eq(c - LinTerm.sym("y") * 2)
    b = eq(c - LinTerm.sym("z") * 2 - 1)
    out = interpolate(a, b)
    assert check_interpolant(a, b, out.interpolant, out.relational).verdict == VERIFIED


@pytest.mark.parametrize(
    "terms,expected",
    [([], 2), ([(1, 1)], 4), ([(0, 3)], 8), ([(0, 1), (-1, 6)], 14)],
)
def test_parity_avoiding_witness_values(terms, expected):
    assert parity_avoiding_witness(terms) == expected


@pytest.mark.parametrize("seed", range(30))
def test_parity_avoiding_witness_validates(seed):
    terms = parity_terms(random.Random(seed))
    a = parity_avoiding_witness(terms)
    assert parity_avoiding_valid(terms, a)
    assert a > 2 * max((abs(b) for _, b in terms), default=0)


def test_linterm_pair():
    assert linterm_pair(LinTerm.build(5, {"x": -2}), "x") == (-2, 5)


def test_projection_single_row():
    inst = ProjectionInstance([[0, 1]], [], 1)
    assert inst.radius() == -1
    assert integer_projection_witness(inst, [Fraction(-3, 2)]) == ([-2], [0])


def test_projection_bumps_past_disequalities():
    inst = ProjectionInstance([[0, 1, 0], [0, 0, 1]], [[0, 1, -1], [-1, 1, -1]], 2)
    assert inst.radius() == -10
    assert integer_projection_witness(inst, [-10, -10]) == ([-8, -10], [2, 0])


def test_projection_hypothesis_is_checked():
    inst = ProjectionInstance([[0, 1]], [], 1)
    with pytest.raises(HypothesisViolated):
        integer_projection_witness(inst, [0])


def test_disequality_rows_need_a_variable():
    with pytest.raises(ValueError):
        ProjectionInstance([[0, 1]], [[3, 0]], 1)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_projection_witness_properties(seed):
    inst, point = projection_instance(random.Random(seed))
    z, h = integer_projection_witness(inst, point)
    assert all(0 <= hi <= inst.p**2 for hi in h)
    for t in inst.ts:
        assert t[0] + sum(a * b for a, b in zip(t[1:], z)) <= 0
    for s in inst.ss:
        assert s[0] + sum(a * b for a, b in zip(s[1:], z)) != 0
    assert floor_shift_bounded(inst, point)
