import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paiditp.arith import (
    Contradiction,
    L,
    NotEntailed,
    R,
    close_by_inequalities,
    discharge_succedent_equality,
    entails_equality,
    eq_contradiction,
    solve_equalities,
    strengthen_step,
)
from paiditp.formulas import FALSE, Divides, conj, eq, implies, leq, ne
from paiditp.semantics import equivalent
from paiditp.terms import LinTerm

a, b, c, d, y = (LinTerm.sym(n) for n in "abcdy")


def test_two_halves_of_y_are_equal():
    system = solve_equalities([(c * 2 - y, L), (d * 2 - y, R)])
    assert [row.pivot for row in system.rows] == ["c", "d"]
    assert all(row.alpha == 2 for row in system.rows)
    assert entails_equality(system, c, d)


def test_single_unit_equation():
    system = solve_equalities([(c, L)])
    (row,) = system.rows
    assert (row.pivot, row.alpha, row.residual) == ("c", 1, LinTerm())


def test_parity_contradiction():
    res = solve_equalities([(c * 2, L), (c * 2 - 1, R)])
    assert isinstance(res, Contradiction)
    assert not any((2 * v) == 0 and (2 * v - 1) == 0 for v in range(-10, 11))


def test_discharge_with_split_halves():
    res = discharge_succedent_equality([(c * 2 - y, L), (d * 2 - y, R)], c - d, L)
    assert res.interpolant == ne(y - d * 2)
    assert res.alpha > 0


def test_discharge_trivial_target():
    assert discharge_succedent_equality([], c - c, L).interpolant == FALSE


def test_discharge_function_argument_equality():
    res = discharge_succedent_equality([(a - 1, R)], LinTerm.num(2) - (a + 1), L)
    assert res.interpolant == ne(a - 1)


def test_discharge_not_entailed():
    with pytest.raises(NotEntailed):
        discharge_succedent_equality([(a - 1, R)], c, L)


def test_entailment_cases():
    assert entails_equality(solve_equalities([]), c, c)
    assert entails_equality(solve_equalities([(a - 1, R)]), (LinTerm.num(2),), (a + 1,))
    assert not entails_equality(solve_equalities([(a - 1, R)]), (b,), (c,))


def test_integer_projection_gives_parity():
    res = eq_contradiction([(a - b * 2, L), (a - c * 2 - 1, R)])
    assert res.interpolant == Divides(2, a)
    # every A-model has even a, every B-model odd a
    for av, bv in itertools.product(range(-6, 7), repeat=2):
        if av - 2 * bv == 0:
            assert av % 2 == 0


def test_unit_fm_closure():
    res = close_by_inequalities([], [(c, L), (-c + 1, R)])
    assert res is not None
    assert res.interpolant == leq(c)


def test_fm_multipliers():
    res = close_by_inequalities([], [(c * 2 - 5, L), (-c + 3, L)])
    assert res.multipliers == (1, 2)
    # the same multipliers found by a small exhaustive search
    found = [
        (x, z)
        for x, z in itertools.product(range(11), repeat=2)
        if (x or z) and 2 * x - z == 0 and -5 * x + 3 * z > 0
    ]
    assert found[0] == (1, 2)


def test_fm_open():
    assert close_by_inequalities([], [(c, L)]) is None


def test_strengthen_premises():
    (e, lab1), (s, lab2) = strengthen_step(c, L)
    assert e == eq(c) and s == leq(c + 1) and lab1 == lab2 == L


coef = st.integers(-5, 5)
names = ("a", "b", "c", "d")


@st.composite
def systems(draw):
    rows = []
    for _ in range(draw(st.integers(1, 3))):
        coeffs = {n: draw(coef) for n in names}
        rows.append((LinTerm.build(draw(st.integers(-5, 5)), coeffs), draw(st.sampled_from([L, R]))))
    return rows


@settings(max_examples=60, deadline=None)
@given(systems())
def test_solved_form_keeps_solutions(rows):
    res = solve_equalities(rows)
    box = range(-3, 4)
    for vals in itertools.product(box, repeat=4):
        env = dict(zip(names, vals))
        sat_in = all(t.evaluate(env) == 0 for t, _ in rows)
        if isinstance(res, Contradiction):
            assert not sat_in
            continue
        sat_out = all((r.residual + LinTerm.sym(r.pivot, r.alpha)).evaluate(env) == 0 for r in res.rows)
        assert sat_in == sat_out


@settings(max_examples=60, deadline=None)
@given(systems())
def test_projection_is_an_interpolant(rows):
    res = eq_contradiction(rows)
    if res is None:
        return
    a_part = [t for t, lab in rows if lab == L]
    b_part = [t for t, lab in rows if lab == R]
    a_f = conj(*(eq(t) for t in a_part))
    b_f = conj(*(eq(t) for t in b_part))
    assert equivalent(implies(a_f, res.interpolant), eq(LinTerm()), bound=3)
    assert equivalent(conj(res.interpolant, b_f), FALSE, bound=3)
