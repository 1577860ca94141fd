"""Independent checks: interpolant validation and constructive witnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .axioms import QuantifiedFunctionArgs
from .formulas import conj, free_symbols, neg
from .pipeline import ARRAY_OPS, encoded_sequent
from .prover import Closed, ProverConfig, Satisfiable, prove
from .semantics import BudgetExceeded, bounded_model_search
from .terms import LinTerm

PROVED, REFUTED, UNKNOWN = "Proved", "Refuted", "Unknown"
VERIFIED, REJECTED, INCONCLUSIVE = "Verified", "Rejected", "Inconclusive"


@dataclass
class Condition:
    status: str
    model: object = None

    def __str__(self):
        return self.status


@dataclass
class CheckReport:
    cond_left: Condition
    cond_right: Condition
    vocab_ok: bool
    offending: frozenset = frozenset()

    @property
    def verdict(self) -> str:
        if self.cond_left.status == PROVED and self.cond_right.status == PROVED and self.vocab_ok:
            return VERIFIED
        if self.cond_left.status == REFUTED or self.cond_right.status == REFUTED or not self.vocab_ok:
            return REJECTED
        return INCONCLUSIVE

    def __str__(self):
        vocab = "Pass" if self.vocab_ok else "Fail(" + " ".join(sorted(self.offending)) + ")"
        return f"(check (left {self.cond_left}) (right {self.cond_right}) (vocab {vocab}) (verdict {self.verdict}))"


def _entails_false(left, right, left_rel, right_rel, config, bound):
    """Prove ``[left]_L, [right]_R |-``; fall back to bounded refutation."""
    try:
        seq = encoded_sequent(left, right)
    except QuantifiedFunctionArgs:
        if left_rel is None or right_rel is None:
            return Condition(UNKNOWN)
        seq = encoded_sequent(left_rel, right_rel)
    res = prove(seq, config)
    if isinstance(res, Closed):
        return Condition(PROVED)
    if isinstance(res, Satisfiable):
        return Condition(REFUTED, res.model)
    try:
        model = bounded_model_search(conj(left, right), bound=bound, budget=200_000)
    except BudgetExceeded:
        model = None
    if model is not None:
        return Condition(REFUTED, model)
    return Condition(UNKNOWN)


def vocabulary_violations(a, b, interpolant) -> frozenset:
    """Uninterpreted symbols of the interpolant missing from one of the parts."""
    shared = free_symbols(a) & free_symbols(b)
    return frozenset(s for s in free_symbols(interpolant) if s not in shared and s not in ARRAY_OPS)


def check_interpolant(a, b, interpolant, relational=None, config: ProverConfig | None = None, bound: int = 4) -> CheckReport:
    """Check ``A -> I``, ``I /\\ B`` unsatisfiable, and the shared-vocabulary condition.

    ``relational`` is the interpolant over graph predicates; it is used when
    ``interpolant`` applies functions to quantified variables.
    """
    config = config or ProverConfig(max_nodes=100_000)
    rel_neg = neg(relational) if relational is not None else None
    left = _entails_false(a, neg(interpolant), a, rel_neg, config, bound)
    right = _entails_false(interpolant, b, relational, b, config, bound)
    bad = vocabulary_violations(a, b, interpolant)
    return CheckReport(left, right, not bad, bad)


# ---------------------------------------------------------------------------
# witnesses


def parity_avoiding_witness(terms) -> int:
    """Smallest even ``a > 2*max|beta|`` with ``a/2`` distinct from every ``alpha*a + beta``.

    ``terms`` holds pairs ``(alpha, beta)``.
    """
    terms = list(terms)
    top = max((abs(b) for _, b in terms), default=0)
    a = 2 * top + 2
    while any(al * a + be == a // 2 for al, be in terms):
        a += 2
    return a


class HypothesisViolated(ValueError):
    pass


@dataclass
class ProjectionInstance:
    """Inequality rows ``t_j <= 0`` and disequality rows ``s_k != 0`` as coefficient lists.

    Each row is ``[const, c_1, ..., c_n]``.
    """

    ts: list
    ss: list
    n: int = field(default=0)

    def __post_init__(self):
        if not self.n:
            rows = self.ts + self.ss
            self.n = len(rows[0]) - 1 if rows else 0
        for s in self.ss:
            if not any(s[1:]):
                raise ValueError("disequality row without variables")

    @property
    def norm(self) -> int:
        return sum(abs(c) for t in self.ts for c in t[1:])

    @property
    def p(self) -> int:
        return len(self.ss)

    def radius(self) -> int:
        """The level ``-(p^2 + 1) * ||C||`` that the real witness has to reach."""
        return -(self.p**2 + 1) * self.norm


def _row_value(row, point):
    return row[0] + sum(c * x for c, x in zip(row[1:], point))


def row_max(rows, point):
    return max((_row_value(r, point) for r in rows), default=None)


def integer_projection_witness(inst: ProjectionInstance, real_point):
    """Integer point satisfying all inequality and disequality rows.

    ``real_point`` is a rational point where every inequality row is at
    most the instance radius.  Returns ``(z, h)`` where ``z = floor(y) + h``.
    """
    y = [Fraction(v) for v in real_point]
    top = row_max(inst.ts, y)
    if top is not None and top > inst.radius():
        raise HypothesisViolated(f"rows reach {top} > {inst.radius()}")
    g = [math.floor(v) for v in y]
    h = [0] * inst.n
    for k in range(1, inst.p + 1):
        done = inst.ss[:k]
        point = [a + b for a, b in zip(g, h)]
        if _row_value(inst.ss[k - 1], point) != 0:
            continue
        i0 = next(i for i in range(inst.n) if inst.ss[k - 1][i + 1] != 0)
        while any(_row_value(s, [a + b for a, b in zip(g, h)]) == 0 for s in done):
            h[i0] += 1
    return [a + b for a, b in zip(g, h)], h


def floor_shift_bounded(inst: ProjectionInstance, real_point) -> bool:
    """``f(floor(y)) <= f(y) + ||C||`` for the row-maximum ``f``."""
    y = [Fraction(v) for v in real_point]
    if not inst.ts:
        return True
    z = [math.floor(v) for v in y]
    return row_max(inst.ts, z) <= row_max(inst.ts, y) + inst.norm


def parity_avoiding_valid(terms, a: int) -> bool:
    return a % 2 == 0 and all(al * a + be != a // 2 for al, be in terms)


def linterm_pair(t: LinTerm, var: str):
    """``(alpha, beta)`` for a term ``alpha*var + beta``."""
    return t.coeff(var), t.const
