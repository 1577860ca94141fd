"""Relational encoding of functions and ground instantiation of theory axioms.

Functions ``f`` are represented through graph predicates ``f_p`` (a
:class:`Pred` with ``relational=True`` whose last argument is the result).
Consistency axioms are never added as quantified formulas; instead the
prover asks :func:`candidate_instances` for ground instances whose trigger
literals occur on the current branch.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .formulas import (
    ATOMS,
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Pred,
    all_symbols,
    conj,
    disj,
    eq,
    free_constants,
    fresh_name,
    map_atom_terms,
    map_atoms,
    ne,
    neg,
    nnf,
    substitute,
)
from .terms import DIV, LinTerm

L, R = "L", "R"


class QuantifiedFunctionArgs(Exception):
    pass


# ---------------------------------------------------------------------------
# relational encoding


def _apps_in(f: Formula) -> list:
    out = []
    for a in _atoms_in_order(f):
        if isinstance(a, Pred):
            terms = a.args
        else:
            terms = (a.term,)
        for t in terms:
            for app in t.apps():
                if app.name != DIV and app not in out:
                    out.append(app)
    return out


def _atoms_in_order(f):
    if isinstance(f, ATOMS):
        yield f
    elif isinstance(f, Not):
        yield from _atoms_in_order(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from _atoms_in_order(a)
    else:
        yield from _atoms_in_order(f.body)


def _bound_inside(f) -> set:
    out = set()
    if isinstance(f, (Forall, Exists)):
        out.add(f.var)
        out |= _bound_inside(f.body)
    elif isinstance(f, Not):
        out |= _bound_inside(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            out |= _bound_inside(a)
    return out


def _replace_app(f, app, repl):
    return map_atoms(f, lambda a: map_atom_terms(a, lambda t: t.replace_app(app, repl)))


def rel_encode(phi: Formula, avoid: set | None = None) -> Formula:
    """Replace function applications by existentially bound graph predicates.

    The input is first brought into negation normal form.  Innermost
    applications are lifted first, each at the outermost position where
    its arguments are in scope.  Applications whose arguments mention a
    universally bound variable cannot be encoded without totality axioms
    and raise :class:`QuantifiedFunctionArgs`.
    """
    phi = nnf(phi)
    avoid = set(avoid or ()) | all_symbols(phi)
    return _encode(phi, avoid)


def _encode(phi, avoid):
    inner_bound = _bound_inside(phi)
    for app in _apps_in(phi):
        if any(t.apps() for t in app.args):
            continue
        if app.symbols() & inner_bound:
            continue
        x = fresh_name("x", avoid)
        avoid.add(x)
        body = _replace_app(phi, app, LinTerm.sym(x))
        graph = Pred(app.name, tuple(app.args) + (LinTerm.sym(x),), relational=True)
        return Exists(x, conj(graph, _encode(body, avoid)))
    if isinstance(phi, ATOMS) or isinstance(phi, Not):
        return phi
    if isinstance(phi, And):
        return conj(*(_encode(a, avoid) for a in phi.args))
    if isinstance(phi, Or):
        return disj(*(_encode(a, avoid) for a in phi.args))
    if isinstance(phi, Forall):
        for app in _apps_in(phi.body):
            if phi.var in app.symbols():
                raise QuantifiedFunctionArgs(f"{app} depends on universally bound {phi.var}")
        return Forall(phi.var, _encode(phi.body, avoid))
    return Exists(phi.var, _encode(phi.body, avoid))


def back_translate(phi: Formula) -> Formula:
    """Turn graph atoms ``f_p(t..., s)`` back into ``f(t...) = s`` and inline bound results."""

    def atom(a):
        if isinstance(a, Pred) and a.relational:
            *args, res = a.args
            return eq(LinTerm.app(a.name, args) - res)
        return a

    return one_point(map_atoms(phi, atom))


def _one_point_def(var, lits, positive):
    for i, lit in enumerate(lits):
        atom = lit if positive else (lit.arg if isinstance(lit, Not) else None)
        if not isinstance(atom, Eq):
            continue
        c = atom.term.coeff(var)
        rest = atom.term.without(var)
        if c in (1, -1) and var not in rest.symbols():
            return i, (-rest) * c
    return None


def one_point(phi: Formula) -> Formula:
    """Eliminate ``exists x.(x = T /\\ ...)`` and ``forall x.(x != T \\/ ...)``."""
    if isinstance(phi, ATOMS):
        return phi
    if isinstance(phi, Not):
        return neg(one_point(phi.arg))
    if isinstance(phi, And):
        return conj(*(one_point(a) for a in phi.args))
    if isinstance(phi, Or):
        return disj(*(one_point(a) for a in phi.args))
    kind = type(phi)
    names, body = [], phi
    while isinstance(body, kind):
        names.append(body.var)
        body = body.body
    body = one_point(body)
    positive = kind is Exists
    join = conj if positive else disj
    changed = True
    while changed:
        changed = False
        lits = list(body.args) if isinstance(body, And if positive else Or) else [body]
        for v in names:
            hit = _one_point_def(v, lits, positive)
            if hit is not None:
                i, value = hit
                body = one_point(substitute(join(*(lits[:i] + lits[i + 1:])), {v: value}))
                names.remove(v)
                changed = True
                break
    used = free_constants(body)
    for v in reversed(names):
        if v in used:
            body = kind(v, body)
    return body


def fc_axiom(name: str, arity: int) -> Formula:
    """Closed functional-consistency axiom for an ``arity``-ary function."""
    xs1 = [f"x{i}" for i in range(1, arity + 1)]
    xs2 = [f"x{i}'" for i in range(1, arity + 1)]
    a1 = Pred(name, tuple(LinTerm.sym(v) for v in xs1) + (LinTerm.sym("y1"),), True)
    a2 = Pred(name, tuple(LinTerm.sym(v) for v in xs2) + (LinTerm.sym("y2"),), True)
    body = disj(
        neg(a1),
        neg(a2),
        *(ne(LinTerm.sym(u) - LinTerm.sym(v)) for u, v in zip(xs1, xs2)),
        eq(LinTerm.sym("y1") - LinTerm.sym("y2")),
    )
    for v in reversed(xs1 + xs2 + ["y1", "y2"]):
        body = Forall(v, body)
    return body


def pc_axiom(name: str, arity: int) -> Formula:
    xs = [f"x{i}" for i in range(1, arity + 1)]
    ys = [f"y{i}" for i in range(1, arity + 1)]
    body = disj(
        neg(Pred(name, tuple(LinTerm.sym(v) for v in xs))),
        *(ne(LinTerm.sym(u) - LinTerm.sym(v)) for u, v in zip(xs, ys)),
        Pred(name, tuple(LinTerm.sym(v) for v in ys)),
    )
    for v in reversed(xs + ys):
        body = Forall(v, body)
    return body


def _sel(a, i, v):
    return Pred("select", (LinTerm.sym(a), LinTerm.sym(i), LinTerm.sym(v)), True)


def array_axioms() -> tuple:
    """The three relational array axioms (read-over-write hit, miss, extensionality)."""
    s = LinTerm.sym
    store = Pred("store", (s("x1"), s("y"), s("z1"), s("x2")), True)
    ar1 = disj(neg(store), neg(_sel("x2", "y", "z2")), eq(s("z1") - s("z2")))
    for v in reversed(["x1", "x2", "y", "z1", "z2"]):
        ar1 = Forall(v, ar1)
    store2 = Pred("store", (s("x1"), s("y1"), s("z"), s("x2")), True)
    ar2 = disj(
        neg(store2),
        neg(_sel("x1", "y2", "z1")),
        neg(_sel("x2", "y2", "z2")),
        eq(s("y1") - s("y2")),
        eq(s("z1") - s("z2")),
    )
    for v in reversed(["x1", "x2", "y1", "y2", "z", "z1", "z2"]):
        ar2 = Forall(v, ar2)
    pointwise = disj(neg(_sel("x1", "y", "z1")), neg(_sel("x2", "y", "z2")), eq(s("z1") - s("z2")))
    for v in reversed(["y", "z1", "z2"]):
        pointwise = Forall(v, pointwise)
    ar3 = disj(neg(pointwise), eq(s("x1") - s("x2")))
    ar3 = Forall("x1", Forall("x2", ar3))
    return ar1, ar2, ar3


# ---------------------------------------------------------------------------
# ground instances


@dataclass(frozen=True)
class AxiomInstance:
    kind: str  # PC | FC | AR1 | AR2 | AR3
    symbol: str
    label: str
    formula: Formula
    trigger: tuple  # ((atom, label), ...)
    gated: bool
    same_label: bool

    @property
    def key(self):
        return (self.kind, self.label, self.formula)


def instance_label(labels) -> str:
    """An instance touching any R literal is R-labelled, otherwise L."""
    return R if R in labels else L


def array_symbols(atoms) -> set:
    """Constants used in array positions of select/store graph atoms."""
    out = set()
    for a in atoms:
        if isinstance(a, Pred) and a.relational:
            if a.name == "select":
                out |= a.args[0].symbols()
            elif a.name == "store":
                out |= a.args[0].symbols() | a.args[3].symbols()
    return out


def _args_ne(s, t):
    return [ne(a - b) for a, b in zip(s, t)]


def _const_clash(s, t):
    return any((a - b).is_const() and (a - b).const != 0 for a, b in zip(s, t))


def candidate_instances(ant_atoms, succ_atoms, succ_eqs, entails, has_array=False):
    """Ground axiom instances suggested by the literals of a branch.

    ``ant_atoms``/``succ_atoms`` are lists of ``(Pred, label)``; ``succ_eqs``
    lists ``(LinTerm, label)``; ``entails(s, t)`` decides whether the
    antecedent equalities entail ``s = t`` componentwise.
    """
    out = []
    # predicate consistency: antecedent p(s) against succedent p(t)
    for (pa, d), (pb, e) in itertools.product(ant_atoms, succ_atoms):
        if pa.name != pb.name or pa.relational != pb.relational or pa == pb:
            continue
        if len(pa.args) != len(pb.args) or _const_clash(pa.args, pb.args):
            continue
        f = disj(neg(pa), *_args_ne(pa.args, pb.args), pb)
        out.append(AxiomInstance("PC", pa.name, d, f, ((pa, d), (pb, e)), entails(pa.args, pb.args), d == e))
    rel = [(a, lab) for a, lab in ant_atoms if a.relational]
    # functional consistency on pairs of antecedent graph atoms
    for (i, (a1, d)), (j, (a2, e)) in itertools.combinations(enumerate(rel), 2):
        if a1.name != a2.name or len(a1.args) != len(a2.args):
            continue
        s1, t1, s2, t2 = a1.args[:-1], a1.args[-1], a2.args[:-1], a2.args[-1]
        if _const_clash(s1, s2) or entails((t1,), (t2,)):
            continue
        f = disj(neg(a1), neg(a2), *_args_ne(s1, s2), eq(t1 - t2))
        out.append(
            AxiomInstance("FC", a1.name, instance_label((d, e)), f, ((a1, d), (a2, e)), entails(s1, s2), d == e)
        )
    if has_array:
        out.extend(_array_instances(rel, succ_eqs, entails, ant_atoms + succ_atoms))
    return out


def _array_instances(rel, succ_eqs, entails, all_atoms):
    out = []
    stores = [(a, lab) for a, lab in rel if a.name == "store"]
    selects = [(a, lab) for a, lab in rel if a.name == "select"]
    for st, d in stores:
        x1, y1, z, x2 = st.args
        for sel, e in selects:
            arr, idx, val = sel.args
            # read at the written position
            if not entails((y1,), (idx,)) and _const_clash((x2, y1), (arr, idx)):
                continue
            if entails((z,), (val,)):
                continue
            f = disj(neg(st), neg(sel), ne(x2 - arr), ne(y1 - idx), eq(z - val))
            gated = entails((x2, y1), (arr, idx))
            out.append(AxiomInstance("AR1", "select", instance_label((d, e)), f, ((st, d), (sel, e)), gated, d == e))
        for (s1, e1), (s2, e2) in itertools.permutations(selects, 2):
            a1, i1, v1 = s1.args
            a2, i2, v2 = s2.args
            if entails((v1,), (v2,)) or entails((y1,), (i1,)):
                continue
            if _const_clash((x1, x2, i1), (a1, a2, i2)):
                continue
            f = disj(neg(st), neg(s1), neg(s2), ne(x1 - a1), ne(x2 - a2), ne(i1 - i2), eq(y1 - i1), eq(v1 - v2))
            gated = entails((x1, x2, i1), (a1, a2, i2))
            labels = (d, e1, e2)
            out.append(
                AxiomInstance(
                    "AR2", "store", instance_label(labels), f, ((st, d), (s1, e1), (s2, e2)), gated, len(set(labels)) == 1
                )
            )
    arrays = array_symbols(a for a, _ in all_atoms)
    for t, e in succ_eqs:
        syms = [a for a, _ in t.monomials]
        if t.const or len(syms) != 2 or not all(isinstance(a, str) and a in arrays for a in syms):
            continue
        if sorted(c for _, c in t.monomials) != [-1, 1]:
            continue
        m1, m2 = (LinTerm.sym(a) for a in syms)
        names = set(arrays) | {str(a) for a in syms}
        y = fresh_name("y", names)
        z1 = fresh_name("z1", names | {y})
        z2 = fresh_name("z2", names | {y, z1})
        witness = conj(
            Pred("select", (m1, LinTerm.sym(y), LinTerm.sym(z1)), True),
            Pred("select", (m2, LinTerm.sym(y), LinTerm.sym(z2)), True),
            ne(LinTerm.sym(z1) - LinTerm.sym(z2)),
        )
        f = disj(eq(m1 - m2), Exists(y, Exists(z1, Exists(z2, witness))))
        out.append(AxiomInstance("AR3", "select", e, f, ((eq(t), e),), True, True))
    return out


# ---------------------------------------------------------------------------
# e-matching for unguarded quantifiers


def quantifier_block(f: Formula):
    kind = type(f)
    names = []
    while isinstance(f, kind) and kind in (Forall, Exists):
        names.append(f.var)
        f = f.body
    return names, f


def _literals(f, positive=True):
    if isinstance(f, ATOMS):
        yield f, positive
    elif isinstance(f, Not):
        yield from _literals(f.arg, not positive)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from _literals(a, positive)


def ematch(f: Formula, in_antecedent: bool, ant_atoms, succ_atoms, entails=None) -> list:
    """Instantiation tuples for a leading quantifier block of ``f``.

    A pattern atom that would close against an antecedent atom (negated in
    a universal, positive in an existential) is matched against antecedent
    predicate atoms, the others against succedent ones.  Only arguments
    that are exactly a bound variable bind it; ground pattern arguments
    must equal the atom's argument, syntactically or by ``entails``.
    """
    names, body = quantifier_block(f)
    results = []
    seen = set()
    for pat, positive in _literals(body):
        if not isinstance(pat, Pred):
            continue
        wants_ant = (not positive) if in_antecedent else positive
        pool = ant_atoms if wants_ant else succ_atoms
        for atom in pool:
            if atom.name != pat.name or atom.relational != pat.relational or len(atom.args) != len(pat.args):
                continue
            binding = {}
            ok = True
            for pa, ga in zip(pat.args, atom.args):
                if len(pa.monomials) == 1 and pa.const == 0 and pa.monomials[0][1] == 1 and pa.monomials[0][0] in names:
                    v = pa.monomials[0][0]
                    if binding.setdefault(v, ga) != ga:
                        ok = False
                        break
                elif not (pa.symbols() & set(names)) and pa != ga and not (entails and entails((pa,), (ga,))):
                    ok = False
                    break
            if not ok or set(binding) != set(names):
                continue
            tup = tuple(binding[v] for v in names)
            if tup not in seen:
                seen.add(tup)
                results.append(tup)
    return results


def instantiate_block(f: Formula, terms) -> Formula:
    names, body = quantifier_block(f)
    return substitute(body, dict(zip(names, terms)))


def instantiate_axiom(inst: AxiomInstance):
    """The labelled formula an instance contributes to the antecedent."""
    return inst.formula, inst.label


def select_instantiation_pairs(ant_atoms, succ_atoms, system, has_array=False):
    """Gated instance candidates as ``(literal, literal, kind)`` triples."""
    from .arith import entails_equality

    def entails(s, t):
        return entails_equality(system, tuple(s), tuple(t))

    out = []
    for inst in candidate_instances(ant_atoms, succ_atoms, [], entails, has_array):
        if inst.gated:
            out.append((inst.trigger[0], inst.trigger[-1], inst.kind))
    return out
