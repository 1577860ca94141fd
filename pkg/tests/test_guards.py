import random

import pytest
from generators import multi_guard_formula, paid_formula

from paiditp.formulas import (
    Forall,
    disj,
    divides,
    eq,
    is_quantifier_free,
    ne,
    neg,
    pred,
)
from paiditp.guards import (
    classify_fragment,
    from_div_form,
    normalize_guards,
    to_div_form,
)
from paiditp.semantics import equivalent
from paiditp.sexpr import print_formula
from paiditp.terms import LinTerm

x, y, z = (LinTerm.sym(n) for n in "xyz")
HALVES = Forall("x", disj(ne(x * 2 - y), pred("p", [x])))


def test_div_form_of_halves_interpolant():
    out = to_div_form(HALVES)
    assert print_formula(out) == "(or (not (divides 2 y)) (p (div y 2)))"
    assert is_quantifier_free(out)
    assert equivalent(out, HALVES, bound=6)


def test_expand_divisibility():
    assert print_formula(to_div_form(divides(2, y), expand_divides=True)) == "(= y (* 2 (div y 2)))"


def test_from_div_form_inverts():
    back = from_div_form(to_div_form(HALVES))
    assert equivalent(back, HALVES, bound=6)


def test_two_guards_on_one_variable():
    f = Forall("x", disj(ne(x * 3 - y), ne(x * 2 - z), pred("p", [x])))
    out = normalize_guards(f)
    assert out != f
    assert equivalent(out, f, bound=6)


def test_single_guard_is_untouched():
    assert normalize_guards(HALVES) == HALVES


def test_classification():
    assert classify_fragment(eq(x - y)) == "QF-PA"
    assert classify_fragment(HALVES) == "PAID+UP"
    assert classify_fragment(Forall("x", pred("p", [x]))) == "GENERAL"
    assert classify_fragment(neg(pred("f", [y, z], relational=True))) == "PAID+UF_p"
    assert classify_fragment(eq(LinTerm.app("f", [y]) - z)) == "PAID+UF"
    assert classify_fragment(Forall("x", disj(ne(x * 2 - y), eq(x - z)))) == "PAID"


def test_negative_divisor_uses_floor():
    t = LinTerm.app("div", [y, LinTerm.num(-2)])
    f = eq(t - z)
    for yv in range(-5, 6):
        env = {"y": yv, "z": yv // -2}
        assert t.evaluate(env) == yv // -2
    assert equivalent(from_div_form(f), f, bound=5)


@pytest.mark.parametrize("seed", range(20))
def test_normalization_preserves_meaning(seed):
    f = multi_guard_formula(random.Random(seed))
    assert equivalent(normalize_guards(f), f, bound=5)


@pytest.mark.parametrize("seed", range(20))
def test_div_round_trip(seed):
    f = paid_formula(random.Random(1000 + seed))
    assert equivalent(from_div_form(to_div_form(f)), f, bound=6)
