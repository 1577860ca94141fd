import itertools
from math import gcd

from hypothesis import given, settings
from hypothesis import strategies as st

from paiditp.intmath import (
    bareiss_det,
    check_smith,
    matmul,
    rational_solve,
    smith_decompose,
    solve_integer,
)

entries = st.integers(-9, 9)


@st.composite
def matrices(draw, max_rows=4, max_cols=4):
    k = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    return [[draw(entries) for _ in range(n)] for _ in range(k)]


def determinantal_divisors(c):
    """gcd of all i x i minors, for each i; independent of any elimination."""
    k, n = len(c), len(c[0])
    out = []
    for size in range(1, min(k, n) + 1):
        g = 0
        for rows in itertools.combinations(range(k), size):
            for cols in itertools.combinations(range(n), size):
                g = gcd(g, bareiss_det([[c[r][s] for s in cols] for r in rows]))
        if g == 0:
            break
        out.append(g)
    return out


def test_row_vector():
    st_ = smith_decompose([[4, 6]])
    assert st_.diag == [2]
    assert matmul([[4, 6]], st_.R_inv) == [[2, 0]]


def test_diagonal_matrix_gets_divisibility_chain():
    st_ = smith_decompose([[2, 0], [0, 3]])
    assert st_.diag == [1, 6]
    assert check_smith([[2, 0], [0, 3]], st_)


def test_zero_matrix_has_rank_zero():
    st_ = smith_decompose([[0, 0], [0, 0]])
    assert st_.rank == 0
    assert check_smith([[0, 0], [0, 0]], st_)


@settings(max_examples=300, deadline=None)
@given(matrices())
def test_decomposition_is_exact(c):
    st_ = smith_decompose(c)
    assert check_smith(c, st_)
    assert matmul(st_.L, st_.L_inv) == [[int(i == j) for j in range(len(c))] for i in range(len(c))]
    n = len(c[0])
    assert matmul(st_.R, st_.R_inv) == [[int(i == j) for j in range(n)] for i in range(n)]


@settings(max_examples=150, deadline=None)
@given(matrices(3, 3))
def test_diagonal_matches_minor_gcds(c):
    dd = determinantal_divisors(c)
    diag = smith_decompose(c).diag
    assert len(diag) == len(dd)
    prod = 1
    for d, g in zip(diag, dd):
        prod *= d
        assert prod == g


@settings(max_examples=150, deadline=None)
@given(matrices(2, 2), st.lists(st.integers(-6, 6), min_size=2, max_size=2))
def test_solve_integer_against_enumeration(c, b):
    b = b[: len(c)]
    n = len(c[0])
    sol = solve_integer(c, b, n)
    box = range(-12, 13)
    brute = [x for x in itertools.product(box, repeat=n) if all(sum(r[i] * x[i] for i in range(n)) == v for r, v in zip(c, b))]
    if sol is None:
        assert not brute
        return
    x0, kernel = sol
    assert all(sum(r[i] * x0[i] for i in range(n)) == v for r, v in zip(c, b))
    for vec in kernel:
        assert all(sum(r[i] * vec[i] for i in range(n)) == 0 for r in c)
    assert len(kernel) == n - smith_decompose(c).rank


def test_rational_solve():
    lam = rational_solve([[1, 0], [1, 1]], [3, 2])
    assert [float(x) for x in lam] == [1.0, 2.0]
    assert rational_solve([[1, 1], [2, 2]], [1, 0]) is None
