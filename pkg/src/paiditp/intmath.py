"""Exact integer matrices: Smith decomposition, determinants, integer solving."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: list, b: list) -> list:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][t] * b[t][j] for t in range(inner)) for j in range(cols)] for i in range(len(a))]


def matvec(a: list, v: list) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def bareiss_det(m: list) -> int:
    """Fraction-free determinant of a square integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass
class SmithTriple:
    """``C = L * S * R`` with unimodular ``L``, ``R`` and diagonal ``S``.

    ``L_inv`` and ``R_inv`` are the exact inverses, so ``L_inv * C * R_inv = S``.
    """

    L: list
    S: list
    R: list
    L_inv: list
    R_inv: list
    diag: list

    @property
    def rank(self) -> int:
        return len(self.diag)


def smith_decompose(c: list, ncols: int | None = None) -> SmithTriple:
    """Smith decomposition of a k x n integer matrix (list of rows)."""
    k = len(c)
    n = len(c[0]) if k else (ncols or 0)
    s = [list(map(int, r)) for r in c]
    u, u_inv = identity(k), identity(k)  # u * C * v = S
    v, v_inv = identity(n), identity(n)

    def add_row(dst, src, q):  # row dst += q * row src
        if q:
            for m in (s, u):
                m[dst] = [x + q * y for x, y in zip(m[dst], m[src])]
            for row in u_inv:  # inverse: col src -= q * col dst
                row[src] -= q * row[dst]

    def add_col(dst, src, q):  # col dst += q * col src
        if q:
            for m in (s, v):
                for row in m:
                    row[dst] += q * row[src]
            v_inv[src] = [x - q * y for x, y in zip(v_inv[src], v_inv[dst])]

    def swap_rows(i, j):
        if i != j:
            for m in (s, u):
                m[i], m[j] = m[j], m[i]
            for row in u_inv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for m in (s, v):
                for row in m:
                    row[i], row[j] = row[j], row[i]
            v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def negate_row(i):
        for m in (s, u):
            m[i] = [-x for x in m[i]]
        for row in u_inv:
            row[i] = -row[i]

    diag = []
    for t in range(min(k, n)):
        entries = [(abs(s[i][j]), i, j) for i in range(t, k) for j in range(t, n) if s[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            changed = False
            for i in range(t + 1, k):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // s[t][t]))
                    if s[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // s[t][t]))
                    if s[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            bad = next(
                (i for i in range(t + 1, k) for j in range(t + 1, n) if s[i][j] % s[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if s[t][t] < 0:
            negate_row(t)
        diag.append(s[t][t])
    return SmithTriple(L=u_inv, S=s, R=v_inv, L_inv=u, R_inv=v, diag=diag)


def check_smith(c: list, st: SmithTriple) -> bool:
    k = len(c)
    n = len(st.R)
    if k and n and matmul(matmul(st.L, st.S), st.R) != [list(r) for r in c]:
        return False
    if abs(bareiss_det(st.L)) != 1 or abs(bareiss_det(st.R)) != 1:
        return False
    for i in range(k):
        for j in range(n):
            expect = st.diag[i] if i == j and i < st.rank else 0
            if st.S[i][j] != expect:
                return False
    if any(b <= 0 for b in st.diag):
        return False
    return all(st.diag[i + 1] % st.diag[i] == 0 for i in range(st.rank - 1))


def solve_integer(c: list, b: list, n: int):
    """Integer solutions of ``C x = b``.

    Returns ``None`` when there is none, else ``(x0, kernel)`` where every
    solution is ``x0 + sum k_j * kernel_j`` for integers ``k_j``.
    """
    if not c:
        return [0] * n, [[int(i == j) for i in range(n)] for j in range(n)]
    st = smith_decompose(c, n)
    ub = matvec(st.L_inv, b)
    y = [0] * n
    for i, val in enumerate(ub):
        if i < st.rank:
            if val % st.diag[i]:
                return None
            y[i] = val // st.diag[i]
        elif val:
            return None
    x0 = matvec(st.R_inv, y)
    kernel = [[st.R_inv[i][j] for i in range(n)] for j in range(st.rank, n)]
    return x0, kernel


def rational_solve(rows: list, rhs: list):
    """Find rational ``lam`` with ``sum lam_i rows_i = rhs``, or None."""
    m = len(rows)
    if m == 0:
        return [] if all(x == 0 for x in rhs) else None
    width = len(rhs)
    # columns are the rows; solve A^T lam = rhs by Gauss-Jordan
    aug = [[Fraction(rows[i][j]) for i in range(m)] + [Fraction(rhs[j])] for j in range(width)]
    pivots = []
    r = 0
    for col in range(m):
        p = next((i for i in range(r, width) if aug[i][col] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][col]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(width):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    if any(aug[i][m] != 0 for i in range(r, width)):
        return None
    lam = [Fraction(0)] * m
    for i, col in enumerate(pivots):
        lam[col] = aug[i][m]
    return lam
