import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from paiditp.omega import int_model

VARS = ("x", "y")
coef = st.integers(-4, 4)
row = st.tuples(st.tuples(coef, coef), st.integers(-8, 8))


def _val(r, env):
    (a, b), k = r
    return a * env["x"] + b * env["y"] + k


def _as_input(r):
    (a, b), k = r
    return {v: c for v, c in zip(VARS, (a, b)) if c}, k


def _brute(eqs, leqs, neqs, box=range(-20, 21)):
    for x, y in itertools.product(box, repeat=2):
        env = {"x": x, "y": y}
        if all(_val(r, env) == 0 for r in eqs) and all(_val(r, env) <= 0 for r in leqs) and all(_val(r, env) != 0 for r in neqs):
            return env
    return None


def test_parity_clash():
    # x = 2y and x = 2y + 1
    assert int_model(eqs=[({"x": 1, "y": -2}, 0), ({"x": 1, "y": -2}, -1)]) is None


def test_dark_shadow_gap():
    # 1 <= 3x <= 2 has rational but no integer solutions
    assert int_model(leqs=[({"x": -3}, 1), ({"x": 3}, -2)]) is None


def test_disequality_split():
    m = int_model(leqs=[({"x": -1}, 0), ({"x": 1}, -1)], neqs=[({"x": 1}, 0)])
    assert m == {"x": 1}


def test_divisibility_constraints():
    m = int_model(leqs=[({"x": -1}, 0), ({"x": 1}, -10)], divs=[(3, {"x": 1}, 1)], ndivs=[(2, {"x": 1}, 0)])
    assert m is not None and (m["x"] + 1) % 3 == 0 and m["x"] % 2 == 1


@settings(max_examples=250, deadline=None)
@given(
    st.lists(row, max_size=1),
    st.lists(row, max_size=3),
    st.lists(row, max_size=2),
)
def test_agrees_with_enumeration(eqs, leqs, neqs):
    # keep solutions inside the enumeration box
    box = [(((1, 0), -12)), ((-1, 0), -12), ((0, 1), -12), ((0, -1), -12)]
    leqs = leqs + box
    model = int_model([_as_input(r) for r in eqs], [_as_input(r) for r in leqs], [_as_input(r) for r in neqs])
    brute = _brute(eqs, leqs, neqs)
    assert (model is None) == (brute is None)
    if model is not None:
        env = {v: model.get(v, 0) for v in VARS}
        assert all(_val(r, env) == 0 for r in eqs)
        assert all(_val(r, env) <= 0 for r in leqs)
        assert all(_val(r, env) != 0 for r in neqs)
