"""Formulas over linear integer terms, predicates and functions.

Atoms are built through the smart constructors :func:`eq`, :func:`leq`,
:func:`divides` and :func:`pred`, which keep them canonical (coefficients
divided by their content, a fixed sign, trivially true/false atoms folded).
``TRUE`` and ``FALSE`` are the atoms ``0 = 0`` and ``1 = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .terms import LinTerm


class Formula:
    __slots__ = ()

    def __str__(self):
        from .sexpr import print_formula

        return print_formula(self)


@dataclass(frozen=True)
class Eq(Formula):
    """``term = 0``"""

    term: LinTerm


@dataclass(frozen=True)
class Leq(Formula):
    """``term <= 0``"""

    term: LinTerm


@dataclass(frozen=True)
class Divides(Formula):
    modulus: int
    term: LinTerm


@dataclass(frozen=True)
class Pred(Formula):
    name: str
    args: tuple = ()
    # graph predicate f_p of a function f (name holds f)
    relational: bool = False


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple


@dataclass(frozen=True)
class Or(Formula):
    args: tuple


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


ATOMS = (Eq, Leq, Divides, Pred)
TRUE = Eq(LinTerm())
FALSE = Eq(LinTerm(1))


# ---------------------------------------------------------------------------
# smart constructors


def eq(t: LinTerm) -> Formula:
    if t.is_const():
        return TRUE if t.const == 0 else FALSE
    g = t.content()
    if t.const % g:
        return FALSE
    t = t.exact_div(g)
    if t.monomials[0][1] < 0:
        t = -t
    return Eq(t)


def leq(t: LinTerm) -> Formula:
    if t.is_const():
        return TRUE if t.const <= 0 else FALSE
    g = t.content()
    # integer tightening: g*s + c <= 0  <=>  s + ceil(c/g) <= 0
    c = -((-t.const) // g)
    return Leq(LinTerm(c, tuple((a, k // g) for a, k in t.monomials)))


def divides(k: int, t: LinTerm) -> Formula:
    k = abs(int(k))
    if k == 0:
        return eq(t)
    if k == 1:
        return TRUE
    t = LinTerm.build(t.const % k, [(a, c % k) for a, c in t.monomials])
    if t.is_const():
        return TRUE if t.const == 0 else FALSE
    return Divides(k, t)


def pred(name: str, args=(), relational: bool = False) -> Formula:
    return Pred(name, tuple(args), relational)


def neg(f: Formula) -> Formula:
    if f == TRUE:
        return FALSE
    if f == FALSE:
        return TRUE
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def _flat(cls, fs):
    for f in fs:
        if isinstance(f, cls):
            yield from f.args
        else:
            yield f


def conj(*fs) -> Formula:
    if len(fs) == 1 and not isinstance(fs[0], Formula):
        fs = tuple(fs[0])
    out = []
    for f in _flat(And, fs):
        if f == FALSE:
            return FALSE
        if f != TRUE and f not in out:
            out.append(f)
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*fs) -> Formula:
    if len(fs) == 1 and not isinstance(fs[0], Formula):
        fs = tuple(fs[0])
    out = []
    for f in _flat(Or, fs):
        if f == TRUE:
            return TRUE
        if f != FALSE and f not in out:
            out.append(f)
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


def implies(a: Formula, b: Formula) -> Formula:
    return disj(neg(a), b)


def ne(t: LinTerm) -> Formula:
    return neg(eq(t))


def forall(var: str, body: Formula) -> Formula:
    return Forall(var, body) if var in free_constants(body) else body


def exists(var: str, body: Formula) -> Formula:
    return Exists(var, body) if var in free_constants(body) else body


def forall_many(vars_, body):
    for v in reversed(list(vars_)):
        body = forall(v, body)
    return body


def exists_many(vars_, body):
    for v in reversed(list(vars_)):
        body = exists(v, body)
    return body


# ---------------------------------------------------------------------------
# traversal


def atom_terms(f: Formula) -> tuple:
    if isinstance(f, (Eq, Leq, Divides)):
        return (f.term,)
    if isinstance(f, Pred):
        return f.args
    return ()


def map_atom_terms(f: Formula, fn: Callable[[LinTerm], LinTerm]) -> Formula:
    """Rebuild an atom with every term transformed (re-canonicalized)."""
    if isinstance(f, Eq):
        return eq(fn(f.term))
    if isinstance(f, Leq):
        return leq(fn(f.term))
    if isinstance(f, Divides):
        return divides(f.modulus, fn(f.term))
    if isinstance(f, Pred):
        return Pred(f.name, tuple(fn(a) for a in f.args), f.relational)
    raise TypeError(f"not an atom: {f!r}")


def map_atoms(f: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    """Rebuild ``f`` replacing every atom by ``fn(atom)``; binders are kept."""
    if isinstance(f, ATOMS):
        return fn(f)
    if isinstance(f, Not):
        return Not(map_atoms(f.arg, fn))
    if isinstance(f, And):
        return And(tuple(map_atoms(a, fn) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(map_atoms(a, fn) for a in f.args))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, map_atoms(f.body, fn))
    raise TypeError(f"unknown formula {f!r}")


def iter_atoms(f: Formula) -> Iterator[Formula]:
    if isinstance(f, ATOMS):
        yield f
    elif isinstance(f, Not):
        yield from iter_atoms(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from iter_atoms(a)
    else:
        yield from iter_atoms(f.body)


def all_symbols(f: Formula) -> set:
    """Every symbol name used in terms, bound or free."""
    out = set()
    for a in iter_atoms(f):
        for t in atom_terms(a):
            out |= t.symbols()
    if isinstance(f, (Forall, Exists)):
        out.add(f.var)
    for sub in _subformulas(f):
        if isinstance(sub, (Forall, Exists)):
            out.add(sub.var)
    return out


def _subformulas(f):
    yield f
    if isinstance(f, Not):
        yield from _subformulas(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from _subformulas(a)
    elif isinstance(f, (Forall, Exists)):
        yield from _subformulas(f.body)


def free_constants(f: Formula) -> set:
    if isinstance(f, ATOMS):
        out = set()
        for t in atom_terms(f):
            out |= t.symbols()
        return out
    if isinstance(f, Not):
        return free_constants(f.arg)
    if isinstance(f, (And, Or)):
        out = set()
        for a in f.args:
            out |= free_constants(a)
        return out
    return free_constants(f.body) - {f.var}


def predicates(f: Formula) -> set:
    """Names of uninterpreted (non-relational) predicates."""
    return {a.name for a in iter_atoms(f) if isinstance(a, Pred) and not a.relational}


def relations(f: Formula) -> set:
    """Function names whose graph predicate occurs in ``f``."""
    return {a.name for a in iter_atoms(f) if isinstance(a, Pred) and a.relational}


def functions(f: Formula) -> set:
    out = set()
    for a in iter_atoms(f):
        for t in atom_terms(a):
            out |= t.functions()
    return out


def free_symbols(f: Formula) -> frozenset:
    """Free constants plus uninterpreted predicate and function names.

    Graph predicates count as their function.
    """
    return frozenset(free_constants(f) | predicates(f) | relations(f) | (functions(f) - {"div"}))


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(s, (Forall, Exists)) for s in _subformulas(f))


# ---------------------------------------------------------------------------
# substitution


def fresh_name(base: str, avoid) -> str:
    if base not in avoid:
        return base
    for i in itertools.count(1):
        cand = f"{base}{i}"
        if cand not in avoid:
            return cand


def substitute(f: Formula, mapping: dict) -> Formula:
    """Simultaneous capture-avoiding substitution of terms for free symbols."""
    mapping = {k: v for k, v in mapping.items() if v != LinTerm.sym(k)}
    if not mapping:
        return f
    incoming = set()
    for t in mapping.values():
        incoming |= t.symbols()
    return _subst(f, mapping, incoming)


def _subst(f, mapping, incoming):
    if isinstance(f, ATOMS):
        return map_atom_terms(f, lambda t: t.substitute(mapping))
    if isinstance(f, Not):
        return neg(_subst(f.arg, mapping, incoming))
    if isinstance(f, And):
        return conj(*(_subst(a, mapping, incoming) for a in f.args))
    if isinstance(f, Or):
        return disj(*(_subst(a, mapping, incoming) for a in f.args))
    var, body = f.var, f.body
    inner = {k: v for k, v in mapping.items() if k != var}
    if not inner:
        return f
    if var in incoming:
        new = fresh_name(var, incoming | all_symbols(body) | set(inner))
        body = _subst(body, {var: LinTerm.sym(new)}, {new})
        var = new
    return type(f)(var, _subst(body, inner, incoming))


def rename_bound(f: Formula, avoid: set) -> Formula:
    """Rename bound variables that clash with ``avoid``."""
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, Not):
        return Not(rename_bound(f.arg, avoid))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(rename_bound(a, avoid) for a in f.args))
    var, body = f.var, f.body
    if var in avoid:
        new = fresh_name(var, avoid | all_symbols(body))
        body = substitute(body, {var: LinTerm.sym(new)})
        var = new
    return type(f)(var, rename_bound(body, avoid | {var}))


# ---------------------------------------------------------------------------
# negation normal form


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Push negations down to atoms; ``t <= 0`` negates to ``-t + 1 <= 0``."""
    if isinstance(f, ATOMS):
        if not negate:
            return f
        if isinstance(f, Leq):
            return leq(-f.term + 1)
        return neg(f)
    if isinstance(f, Not):
        return nnf(f.arg, not negate)
    if isinstance(f, And):
        parts = [nnf(a, negate) for a in f.args]
        return disj(*parts) if negate else conj(*parts)
    if isinstance(f, Or):
        parts = [nnf(a, negate) for a in f.args]
        return conj(*parts) if negate else disj(*parts)
    body = nnf(f.body, negate)
    if isinstance(f, Forall):
        return Exists(f.var, body) if negate else Forall(f.var, body)
    return Forall(f.var, body) if negate else Exists(f.var, body)


def is_nnf(f: Formula) -> bool:
    if isinstance(f, ATOMS):
        return True
    if isinstance(f, Not):
        return isinstance(f.arg, ATOMS) and not isinstance(f.arg, Leq)
    if isinstance(f, (And, Or)):
        return all(is_nnf(a) for a in f.args)
    return is_nnf(f.body)


# ---------------------------------------------------------------------------
# guarded quantifiers


@dataclass(frozen=True)
class Guard:
    """Decomposition of ``Q x. (alpha*x + t <op> 0 <conn> rest)``."""

    var: str
    alpha: int
    term: LinTerm
    rest: Formula = field(default=TRUE)


def _split_guard(var, literal, negated):
    """Return (alpha, t) when ``literal`` is an x-guard of the required polarity."""
    if negated:
        if not (isinstance(literal, Not) and isinstance(literal.arg, Eq)):
            return None
        t = literal.arg.term
    else:
        if not isinstance(literal, Eq):
            return None
        t = literal.term
    alpha = t.coeff(var)
    rest = t.without(var)
    if alpha == 0 or var in rest.symbols():
        return None
    return alpha, rest


def guarded_forall(f: Formula):
    """Recognize ``forall x. (alpha*x + t != 0 \\/ phi)``; return a Guard or None."""
    if not isinstance(f, Forall):
        return None
    parts = f.body.args if isinstance(f.body, Or) else (f.body,)
    for i, p in enumerate(parts):
        hit = _split_guard(f.var, p, negated=True)
        if hit:
            rest = disj(*(parts[:i] + parts[i + 1:]))
            return Guard(f.var, hit[0], hit[1], rest)
    return None


def guarded_exists(f: Formula):
    """Recognize ``exists x. (alpha*x + t = 0 /\\ phi)``; return a Guard or None."""
    if not isinstance(f, Exists):
        return None
    parts = f.body.args if isinstance(f.body, And) else (f.body,)
    for i, p in enumerate(parts):
        hit = _split_guard(f.var, p, negated=False)
        if hit:
            rest = conj(*(parts[:i] + parts[i + 1:]))
            return Guard(f.var, hit[0], hit[1], rest)
    return None


def relational_binding(f: Formula):
    """Recognize ``exists x. (f_p(t..., x) /\\ phi)`` with x not in t...; return the atom."""
    if not isinstance(f, Exists):
        return None
    parts = f.body.args if isinstance(f.body, And) else (f.body,)
    for p in parts:
        if isinstance(p, Pred) and p.relational and p.args and p.args[-1] == LinTerm.sym(f.var):
            if all(f.var not in a.symbols() for a in p.args[:-1]):
                return p
    return None
