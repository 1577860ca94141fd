"""Bounded-domain semantics: evaluation, model search and equivalence checks.

Unguarded quantifiers range over ``[-bound, bound]``.  Quantifier blocks
with linear equality guards are resolved exactly: the guard system is
solved over the integers and only its solutions (with kernel parameters in
the bounded range) are visited.  Predicate and function tables are filled
lazily; every missing entry is branched over, so a search enumerates all
tables over the argument tuples that evaluation actually reaches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .formulas import (
    And,
    Divides,
    Eq,
    Forall,
    Leq,
    Not,
    Or,
    Pred,
    free_constants,
)
from .intmath import solve_integer
from .terms import FunApp


class BudgetExceeded(Exception):
    pass


class _Need(Exception):
    def __init__(self, key):
        self.key = key


NO_VALUE = None


@dataclass
class Interp:
    """Constants plus (possibly partial) predicate, function and graph tables."""

    bound: int = 6
    preds: dict = field(default_factory=dict)  # (name, args) -> bool
    funs: dict = field(default_factory=dict)  # (name, args) -> int
    graphs: dict = field(default_factory=dict)  # (name, args) -> int | None
    strict: bool = False  # missing entries default instead of branching

    def pred(self, name, args):
        key = ("pred", name, args)
        if (name, args) in self.preds:
            return self.preds[(name, args)]
        if self.strict:
            return False
        raise _Need(key)

    def fun(self, name, args):
        if (name, args) in self.funs:
            return self.funs[(name, args)]
        if self.strict:
            return 0
        raise _Need(("fun", name, args))

    def graph(self, name, args):
        if (name, args) in self.graphs:
            return self.graphs[(name, args)]
        if self.strict:
            return NO_VALUE
        raise _Need(("graph", name, args))

    def extend(self, key, value):
        kind, name, args = key
        new = Interp(self.bound, dict(self.preds), dict(self.funs), dict(self.graphs), self.strict)
        {"pred": new.preds, "fun": new.funs, "graph": new.graphs}[kind][(name, args)] = value
        return new

    def choices(self, key):
        kind = key[0]
        rng = list(range(-self.bound, self.bound + 1))
        if kind == "pred":
            return [False, True]
        if kind == "fun":
            return rng
        return rng + [NO_VALUE]


def _term(t, env, interp):
    def funcs(name, args):
        return interp.fun(name, args)

    return t.evaluate(env, funcs)


def evaluate(f, env, interp: Interp) -> bool:
    if isinstance(f, Eq):
        return _term(f.term, env, interp) == 0
    if isinstance(f, Leq):
        return _term(f.term, env, interp) <= 0
    if isinstance(f, Divides):
        return _term(f.term, env, interp) % f.modulus == 0
    if isinstance(f, Pred):
        vals = tuple(_term(a, env, interp) for a in f.args)
        if f.relational:
            return interp.graph(f.name, vals[:-1]) == vals[-1]
        return interp.pred(f.name, vals)
    if isinstance(f, Not):
        return not evaluate(f.arg, env, interp)
    if isinstance(f, And):
        return _junction(f.args, env, interp, False)
    if isinstance(f, Or):
        return _junction(f.args, env, interp, True)
    return _quantifier(f, env, interp)


def _junction(args, env, interp, stop):
    """Kleene evaluation: a missing table entry only matters if no argument decides."""
    pending = None
    for a in args:
        try:
            if evaluate(a, env, interp) == stop:
                return stop
        except _Need as need:
            pending = pending or need
    if pending:
        raise pending
    return not stop


def _linear_in(t, names):
    """True when block variables occur only as direct monomials of ``t``."""
    for a, _ in t.monomials:
        if isinstance(a, FunApp) and a.symbols() & names:
            return False
    return any(t.coeff(v) for v in names)


def _quantifier(f, env, interp):
    kind = type(f)
    names = []
    body = f
    while isinstance(body, kind):
        names.append(body.var)
        body = body.body
    universal = kind is Forall
    nameset = set(names)
    parts = body.args if isinstance(body, Or if universal else And) else (body,)
    guards = []
    for p in parts:
        atom = p.arg if universal and isinstance(p, Not) else (None if universal else p)
        if isinstance(atom, Eq) and _linear_in(atom.term, nameset):
            guards.append(atom.term)
    inner = {k: v for k, v in env.items() if k not in nameset}
    if guards:
        mat = [[g.coeff(v) for v in names] for g in guards]
        rhs = []
        for g in guards:
            rest = g
            for v in names:
                rest = rest.without(v)
            rhs.append(-_term(rest, inner, interp))
        sol = solve_integer(mat, rhs, len(names))
        if sol is None:
            return universal
        x0, kernel = sol
    else:
        x0, kernel = [0] * len(names), [[int(i == j) for i in range(len(names))] for j in range(len(names))]
    rng = range(-interp.bound, interp.bound + 1)
    pending = None
    for lam in itertools.product(rng, repeat=len(kernel)):
        point = list(x0)
        for k, vec in zip(lam, kernel):
            for i in range(len(point)):
                point[i] += k * vec[i]
        local = dict(inner)
        local.update(zip(names, point))
        try:
            val = evaluate(body, local, interp)
        except _Need as need:
            pending = pending or need
            continue
        if val != universal:
            return val
    if pending:
        raise pending
    return universal


def _lazy(fn, interp, budget):
    """Yield ``(result, interp)`` for every completion of the lazy tables."""
    stack = [interp]
    while stack:
        cur = stack.pop()
        budget[0] -= 1
        if budget[0] < 0:
            raise BudgetExceeded()
        try:
            yield fn(cur), cur
        except _Need as need:
            for v in reversed(cur.choices(need.key)):
                stack.append(cur.extend(need.key, v))


@dataclass
class Model:
    consts: dict
    interp: Interp


def _constants(*fs):
    out = set()
    for f in fs:
        out |= free_constants(f)
    return sorted(out)


def bounded_model_search(phi, bound: int = 6, budget: int = 2_000_000, consts=None):
    """A model of ``phi`` with constants and table values in ``[-bound, bound]``, or None."""
    names = consts if consts is not None else _constants(phi)
    left = [budget]
    for vals in itertools.product(range(-bound, bound + 1), repeat=len(names)):
        env = dict(zip(names, vals))
        for res, interp in _lazy(lambda i: evaluate(phi, env, i), Interp(bound), left):
            if res:
                return Model(env, interp)
    return None


def equivalent(phi, psi, bound: int = 6, budget: int = 5_000_000, consts=None) -> bool:
    """Bounded equivalence over all constant values and reachable table entries."""
    names = consts if consts is not None else _constants(phi, psi)
    left = [budget]
    for vals in itertools.product(range(-bound, bound + 1), repeat=len(names)):
        env = dict(zip(names, vals))
        for res, _ in _lazy(lambda i: evaluate(phi, env, i) == evaluate(psi, env, i), Interp(bound), left):
            if not res:
                return False
    return True


def counterexample(phi, psi, bound: int = 6, budget: int = 5_000_000):
    names = _constants(phi, psi)
    left = [budget]
    for vals in itertools.product(range(-bound, bound + 1), repeat=len(names)):
        env = dict(zip(names, vals))
        for res, interp in _lazy(lambda i: evaluate(phi, env, i) == evaluate(psi, env, i), Interp(bound), left):
            if not res:
                return env, interp
    return None


def satisfiable_with_functions(phi, bound: int = 3, budget: int = 2_000_000):
    """Bounded satisfiability where functions are total with values in range."""
    return bounded_model_search(phi, bound, budget) is not None


def satisfiable_relational(phi_rel, bound: int = 3, budget: int = 2_000_000):
    """Bounded satisfiability of a graph-predicate formula under functional consistency.

    Graph tables map each argument tuple to at most one value, which is
    exactly the set of relations satisfying the consistency axiom.
    """
    return bounded_model_search(phi_rel, bound, budget) is not None


