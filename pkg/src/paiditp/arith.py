"""Ground linear reasoning with interpolant bookkeeping.

Every closing certificate is a linear combination of labelled literals.
The interpolant contribution is read off the part of the combination that
stems from L-labelled literals, which by construction only mentions
symbols shared between both sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .formulas import conj, divides, eq, leq, ne
from .intmath import rational_solve, smith_decompose, solve_integer
from .terms import LinTerm, _atom_key

L, R = "L", "R"


class NotEntailed(Exception):
    pass


def _atoms_of(terms):
    seen = set()
    for t in terms:
        for a, _ in t.monomials:
            seen.add(a)
    return sorted(seen, key=_atom_key)


def _scale(lams):
    """Multiply rational multipliers to integers by a positive factor."""
    den = 1
    for x in lams:
        den = lcm(den, Fraction(x).denominator)
    return den, [int(Fraction(x) * den) for x in lams]


def _lin_comb(terms, coeffs):
    out = LinTerm()
    for t, k in zip(terms, coeffs):
        if k:
            out = out + t * k
    return out


# ---------------------------------------------------------------------------
# equalities


@dataclass(frozen=True)
class Row:
    pivot: object
    alpha: int
    residual: LinTerm  # alpha*pivot + residual = 0
    partial: LinTerm


@dataclass
class SolvedEqSystem:
    rows: list = field(default_factory=list)

    def reduce(self, t: LinTerm) -> LinTerm:
        """Eliminate pivots from ``t``; result is a positive multiple of t modulo the system."""
        for row in self.rows:
            k = t.coeff(row.pivot)
            if k:
                t = t * row.alpha - (LinTerm.build(0, {row.pivot: row.alpha}) + row.residual) * k
                g = gcd(t.content(), t.const)
                if g > 1:
                    t = t.exact_div(g)
        return t


@dataclass(frozen=True)
class Contradiction:
    interpolant: object
    certificate: tuple


def solve_equalities(rows):
    """Bring labelled equalities ``(t, label)`` into solved form.

    Pivots are the least atom of each row in canonical order.  The partial
    term of a row tracks its L-labelled contribution.  Returns a
    :class:`SolvedEqSystem` or a :class:`Contradiction`.
    """
    contra = eq_contradiction(rows)
    if contra is not None:
        return contra
    work = [(t, t if lab == L else LinTerm()) for t, lab in rows]
    solved: list[Row] = []
    for t, part in work:
        for row in solved:
            k = t.coeff(row.pivot)
            if k:
                full = LinTerm.build(0, {row.pivot: row.alpha}) + row.residual
                t = t * row.alpha - full * k
                part = part * row.alpha - row.partial * k
        if t.is_const():
            continue
        if t.monomials[0][1] < 0:
            t, part = -t, -part
        pivot, alpha = t.monomials[0]
        residual = t.without(pivot)
        # back-substitute into earlier rows to keep pivots eliminated
        new_rows = []
        for row in solved:
            k = row.residual.coeff(pivot)
            if k:
                res = (LinTerm.build(0, {row.pivot: row.alpha}) + row.residual) * alpha - t * k
                new_rows.append(Row(row.pivot, row.alpha * alpha, res.without(row.pivot), row.partial * alpha - part * k))
            else:
                new_rows.append(row)
        solved = new_rows + [Row(pivot, alpha, residual, part)]
    return SolvedEqSystem(solved)


def entails_equality(system, s, t) -> bool:
    """True iff every ``s_i - t_i = 0`` follows from the solved system."""
    if isinstance(s, LinTerm):
        s, t = (s,), (t,)
    if isinstance(system, Contradiction):
        return True
    for a, b in zip(s, t):
        if not system.reduce(a - b).is_const() or system.reduce(a - b).const != 0:
            return False
    return True


def combination(rows, target: LinTerm):
    """Rational multipliers with ``sum lam_i * rows_i == target`` (constants included)."""
    terms = [t for t, _ in rows]
    atoms = _atoms_of(terms + [target])
    vecs = [[t.coeff(a) for a in atoms] + [t.const] for t in terms]
    rhs = [target.coeff(a) for a in atoms] + [target.const]
    return rational_solve(vecs, rhs)


@dataclass(frozen=True)
class Discharge:
    interpolant: object
    alpha: int
    multipliers: tuple
    partial: LinTerm
    steps: tuple = ()


def discharge_succedent_equality(rows, target: LinTerm, label: str) -> Discharge:
    """Close ``rows |- [target = 0]_label`` from antecedent equalities.

    Finds ``alpha*target = sum lam_i e_i`` with ``alpha > 0``.  For an L
    target the contribution is ``u != 0`` with ``u`` the R-part of the
    combination; for an R target it is ``u = 0`` with ``u`` the L-part.
    """
    lam = combination(rows, target)
    if lam is None:
        raise NotEntailed(str(target))
    alpha, ints = _scale(lam)
    terms = [t for t, _ in rows]
    side = R if label == L else L
    u = _lin_comb(terms, [k if lab == side else 0 for k, (_, lab) in zip(ints, rows)])
    steps = [("IPI-RIGHT", str(target))]
    if alpha != 1:
        steps.append(("MUL-RIGHT", alpha))
    for k, (t, lab) in zip(ints, rows):
        if k:
            steps.append(("RED-RIGHT", lab, k, str(t)))
    steps.append(("CLOSE-EQ-RIGHT",))
    interp = ne(u) if label == L else eq(u)
    return Discharge(interp, alpha, tuple(ints), u, tuple(steps))


def projection(rows_l, keep) -> object:
    """Exact integer projection of ``rows_l = 0`` onto the atoms in ``keep``."""
    terms = [t for t in rows_l]
    atoms = _atoms_of(terms)
    local = [a for a in atoms if a not in keep]
    if not local:
        return conj(*(eq(t) for t in terms))
    k = len(terms)
    mat = [[t.coeff(a) for a in local] for t in terms]
    st = smith_decompose(mat, len(local))
    rests = [LinTerm(t.const, tuple(m for m in t.monomials if m[0] not in local)) for t in terms]
    parts = []
    for i in range(k):
        w = _lin_comb(rests, st.L_inv[i])
        if i < st.rank:
            parts.append(divides(st.diag[i], w))
        else:
            parts.append(eq(w))
    return conj(*parts)


def eq_contradiction(rows):
    """Certificate that labelled equalities have no integer solution, or None."""
    if not rows:
        return None
    terms = [t for t, _ in rows]
    lam = combination(rows, LinTerm.num(1))
    if lam is not None:
        _, ints = _scale(lam)
        u = _lin_comb(terms, [k if lab == L else 0 for k, (_, lab) in zip(ints, rows)])
        return Contradiction(eq(u), ("rational", tuple(ints)))
    atoms = _atoms_of(terms)
    sol = solve_integer([[t.coeff(a) for a in atoms] for t in terms], [-t.const for t in terms], len(atoms))
    if sol is not None:
        return None
    left = [t for t, lab in rows if lab == L]
    right_atoms = set(_atoms_of([t for t, lab in rows if lab == R]))
    interp = projection(left, right_atoms)
    return Contradiction(interp, ("integer",))


# ---------------------------------------------------------------------------
# inequalities


@dataclass(frozen=True)
class InequalityClosure:
    interpolant: object
    multipliers: tuple  # per input row; equalities may be negative
    partial: LinTerm


def close_by_inequalities(eq_rows, leq_rows, limit: int = 4000):
    """Fourier-Motzkin search for ``sum lam_i t_i = c > 0`` with ``lam >= 0`` on inequalities.

    Returns an :class:`InequalityClosure` or None when the literals are
    rationally satisfiable (or the search grew beyond ``limit``).
    """
    rows = list(leq_rows) + list(eq_rows)
    n_leq = len(leq_rows)
    cons = []
    for i, (t, _) in enumerate(rows):
        base = ({a: Fraction(c) for a, c in t.monomials}, Fraction(t.const))
        cons.append((base[0], base[1], {i: Fraction(1)}))
        if i >= n_leq:
            cons.append(({a: -c for a, c in base[0].items()}, -base[1], {i: Fraction(-1)}))
    found = _fm(cons, limit)
    if found is None:
        return None
    _, ints = _scale([found.get(i, 0) for i in range(len(rows))])
    terms = [t for t, _ in rows]
    u = _lin_comb(terms, [k if lab == L else 0 for k, (_, lab) in zip(ints, rows)])
    total = _lin_comb(terms, ints)
    assert total.is_const() and total.const > 0
    return InequalityClosure(leq(u), tuple(ints), u)


def _norm_key(coeffs):
    return tuple(sorted(((a, c) for a, c in coeffs.items()), key=lambda m: _atom_key(m[0])))


def _fm(cons, limit):
    # normalize: scale so the leading coefficient magnitude is 1, dedupe
    def canon(c):
        coeffs, const, mult = c
        coeffs = {a: v for a, v in coeffs.items() if v}
        if not coeffs:
            return (coeffs, const, mult)
        lead = abs(coeffs[min(coeffs, key=_atom_key)])
        return ({a: v / lead for a, v in coeffs.items()}, const / lead, {i: m / lead for i, m in mult.items()})

    def insert(store, c):
        coeffs, const, mult = canon(c)
        if not coeffs:
            return const > 0
        key = _norm_key(coeffs)
        old = store.get(key)
        if old is None or old[1] < const:
            store[key] = (coeffs, const, mult)
        return False

    store = {}
    for c in cons:
        if not c[0] and c[1] > 0:
            return c[2]
        if insert(store, c):
            return canon(c)[2]
    while True:
        current = list(store.values())
        for coeffs, const, mult in current:
            if not coeffs and const > 0:
                return mult
        counts = {}
        for coeffs, _, _ in current:
            for a in coeffs:
                counts[a] = counts.get(a, 0) + 1
        if not counts:
            return None
        var = min(counts, key=lambda a: (counts[a], _atom_key(a)))
        ups = [c for c in current if c[0].get(var, 0) > 0]
        lows = [c for c in current if c[0].get(var, 0) < 0]
        store = {}
        for c in current:
            if var not in c[0]:
                store[_norm_key(c[0])] = c
        for uc, uk, um in ups:
            a = uc[var]
            for lc, lk, lm in lows:
                b = -lc[var]
                coeffs = {}
                for x, v in uc.items():
                    coeffs[x] = coeffs.get(x, 0) + b * v
                for x, v in lc.items():
                    coeffs[x] = coeffs.get(x, 0) + a * v
                coeffs.pop(var, None)
                mult = {}
                for i, m in um.items():
                    mult[i] = mult.get(i, 0) + b * m
                for i, m in lm.items():
                    mult[i] = mult.get(i, 0) + a * m
                cand = (coeffs, b * uk + a * lk, mult)
                if not {x: v for x, v in coeffs.items() if v} and cand[1] > 0:
                    return canon(cand)[2]
                insert(store, cand)
                if len(store) > limit:
                    return None


def strengthen_step(term: LinTerm, label: str):
    """Split ``[t <= 0]_D`` into ``[t = 0]_D`` and ``[t + 1 <= 0]_D``."""
    return (eq(term), label), (leq(term + 1), label)
