"""Labelled sequents, rule application, proof trees and interpolant extraction."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .formulas import (
    FALSE,
    TRUE,
    And,
    Divides,
    Exists,
    Forall,
    Leq,
    Not,
    Or,
    all_symbols,
    conj,
    disj,
    divides,
    eq,
    exists,
    forall,
    free_constants,
    fresh_name,
    guarded_exists,
    guarded_forall,
    leq,
    ne,
    neg,
    substitute,
)
from .terms import LinTerm

L, R = "L", "R"
LABELS = (L, R)


class SchemaMismatch(Exception):
    pass


class NonGuarded(SchemaMismatch):
    pass


class OpenProof(Exception):
    pass


def other(label: str) -> str:
    return R if label == L else L


@dataclass(frozen=True)
class LabelledFormula:
    formula: object
    label: str

    def __str__(self):
        from .sexpr import print_formula

        return f"({self.label} {print_formula(self.formula)})"


LF = LabelledFormula


@dataclass(frozen=True)
class Sequent:
    ant: tuple = ()
    succ: tuple = ()
    # implicit theory axioms available as (kind, symbol, label)
    axioms: frozenset = frozenset()

    def side(self, label: str) -> list:
        return [lf.formula for lf in self.ant + self.succ if lf.label == label]

    def constants(self, label: str) -> set:
        out = set()
        for f in self.side(label):
            out |= free_constants(f)
        return out

    def symbols(self) -> set:
        out = set()
        for lf in self.ant + self.succ:
            out |= all_symbols(lf.formula)
        return out

    def __str__(self):
        ant = " ".join(str(x) for x in self.ant)
        succ = " ".join(str(x) for x in self.succ)
        return f"(sequent (ant {ant}) (succ {succ}))"


def init_sequent(a, b, axioms=()) -> Sequent:
    """``[A]_L, [B]_R |- `` with the given implicit axioms."""
    return Sequent((LF(a, L), LF(b, R)), (), frozenset(axioms))


def _without(items, i):
    return items[:i] + items[i + 1:]


def _replace(items, i, new):
    return items[:i] + tuple(new) + items[i + 1:]


# ---------------------------------------------------------------------------
# combinators: how premise interpolants compose into the conclusion's


def split_combinator(label: str) -> str:
    """Splitting an L formula joins premise interpolants by disjunction, R by conjunction."""
    return "or" if label == L else "and"


@dataclass(frozen=True)
class Step:
    """Result of applying a rule: premises plus the interpolant combinator."""

    rule: str
    premises: tuple
    combine: str  # same | or | and | leaf
    prefix: tuple = ()  # (quantifier, constants) wrapping the combined interpolant
    interpolant: object = None
    info: tuple = ()


def _fresh_constant(counter) -> str:
    k = counter[0]
    counter[0] += 1
    return f"${k}"


def apply_prop_rule(rule: str, seq: Sequent, side: str, index: int) -> Step:
    """Apply a propositional rule to the formula at ``side``/``index``."""
    items = seq.ant if side == "ant" else seq.succ
    if not 0 <= index < len(items):
        raise SchemaMismatch(f"no formula at {side}[{index}]")
    lf = items[index]
    f, lab = lf.formula, lf.label
    base = rule.rsplit("-", 1)[0] if rule.endswith(("-L", "-R")) and rule.count("-") >= 2 else rule
    if rule in ("CLOSE-LL", "CLOSE-RR", "CLOSE-LR", "CLOSE-RL"):
        if side != "ant":
            raise SchemaMismatch("closing rules take the antecedent position")
        want = rule[-1]
        for s in seq.succ:
            if s.formula == f and s.label == want and lab == rule[-2]:
                return Step(rule, (), "leaf", interpolant=close_interpolant(lab, want, f))
        raise SchemaMismatch(f"{rule}: no matching succedent formula")
    if side == "ant":
        if base == "AND-LEFT" and isinstance(f, And):
            new = _replace(seq.ant, index, [LF(a, lab) for a in f.args])
            return Step(rule, (replace(seq, ant=new),), "same")
        if base == "OR-LEFT" and isinstance(f, Or):
            if rule != f"OR-LEFT-{lab}":
                raise SchemaMismatch(f"{rule} applied to an {lab}-formula")
            prem = tuple(replace(seq, ant=_replace(seq.ant, index, [LF(a, lab)])) for a in f.args)
            return Step(rule, prem, split_combinator(lab))
        if base == "NOT-LEFT" and isinstance(f, Not):
            return Step(rule, (replace(seq, ant=_without(seq.ant, index), succ=seq.succ + (LF(f.arg, lab),)),), "same")
    else:
        if base == "OR-RIGHT" and isinstance(f, Or):
            new = _replace(seq.succ, index, [LF(a, lab) for a in f.args])
            return Step(rule, (replace(seq, succ=new),), "same")
        if base == "AND-RIGHT" and isinstance(f, And):
            if rule != f"AND-RIGHT-{lab}":
                raise SchemaMismatch(f"{rule} applied to an {lab}-formula")
            prem = tuple(replace(seq, succ=_replace(seq.succ, index, [LF(a, lab)])) for a in f.args)
            return Step(rule, prem, split_combinator(lab))
        if base == "NOT-RIGHT" and isinstance(f, Not):
            return Step(rule, (replace(seq, succ=_without(seq.succ, index), ant=seq.ant + (LF(f.arg, lab),)),), "same")
    raise SchemaMismatch(f"{rule} does not match {type(f).__name__} in the {side}")


def close_interpolant(ant_label: str, succ_label: str, formula):
    if ant_label == L and succ_label == L:
        return FALSE
    if ant_label == R and succ_label == R:
        return TRUE
    if ant_label == L:
        return formula
    return neg(formula)


def local_constants(seq: Sequent, label: str, terms) -> tuple:
    """Constants of ``terms`` absent from the ``label`` side of ``seq``, sorted."""
    syms = set()
    for t in terms:
        syms |= t.symbols() if isinstance(t, LinTerm) else free_constants(t)
    return tuple(sorted(syms - seq.constants(label)))


def apply_quant_rule(rule: str, seq: Sequent, side: str, index: int, param=None, counter=None) -> Step:
    """Apply a quantifier, guard or arithmetic rewriting rule.

    ``param`` is the instantiation term tuple for ALL-LEFT/EX-RIGHT, or the
    fresh constant name for EX-LEFT/ALL-RIGHT/DIV-LEFT (generated from
    ``counter`` when omitted).
    """
    counter = counter if counter is not None else [0]
    items = seq.ant if side == "ant" else seq.succ
    if not 0 <= index < len(items):
        raise SchemaMismatch(f"no formula at {side}[{index}]")
    f, lab = items[index].formula, items[index].label

    def fresh():
        return param if isinstance(param, str) else _fresh_constant(counter)

    if rule == "EX-LEFT" and side == "ant" and isinstance(f, Exists):
        c = fresh()
        body = substitute(f.body, {f.var: LinTerm.sym(c)})
        return Step(rule, (replace(seq, ant=_replace(seq.ant, index, [LF(body, lab)])),), "same", info=(c,))
    if rule == "ALL-RIGHT" and side == "succ" and isinstance(f, Forall):
        c = fresh()
        body = substitute(f.body, {f.var: LinTerm.sym(c)})
        return Step(rule, (replace(seq, succ=_replace(seq.succ, index, [LF(body, lab)])),), "same", info=(c,))
    if rule == "ALL-LEFT-GRD" and side == "ant":
        g = guarded_forall(f)
        if g is None:
            raise NonGuarded(str(f))
        x = LinTerm.sym(g.var)
        new = disj(neg(divides(g.alpha, g.term)), Exists(g.var, conj(eq(x * g.alpha + g.term), g.rest)))
        return Step(rule, (replace(seq, ant=_replace(seq.ant, index, [LF(new, lab)])),), "same")
    if rule == "EX-RIGHT-GRD" and side == "succ":
        g = guarded_exists(f)
        if g is None:
            raise NonGuarded(str(f))
        x = LinTerm.sym(g.var)
        new = conj(divides(g.alpha, g.term), Forall(g.var, disj(ne(x * g.alpha + g.term), g.rest)))
        return Step(rule, (replace(seq, succ=_replace(seq.succ, index, [LF(new, lab)])),), "same")
    if rule == "DIV-LEFT" and side == "ant" and isinstance(f, Divides):
        c = fresh()
        new = eq(LinTerm.sym(c, f.modulus) - f.term)
        return Step(rule, (replace(seq, ant=_replace(seq.ant, index, [LF(new, lab)])),), "same", info=(c,))
    if rule == "DIV-RIGHT" and side == "succ" and isinstance(f, Divides):
        q = fresh_name("q", all_symbols(f))
        cases = [exists(q, eq(LinTerm.sym(q, f.modulus) - f.term + r)) for r in range(1, f.modulus)]
        new_seq = replace(seq, succ=_without(seq.succ, index), ant=seq.ant + (LF(disj(*cases), lab),))
        return Step(rule, (new_seq,), "same")
    if rule == "MOVE-INEQ" and side == "succ" and isinstance(f, Leq):
        new_seq = replace(seq, succ=_without(seq.succ, index), ant=seq.ant + (LF(leq(-f.term + 1), lab),))
        return Step(rule, (new_seq,), "same")
    if rule == "GUARD-NORM":
        from .guards import normalize_guards

        new = normalize_guards(f)
        if new == f:
            raise NonGuarded(str(f))
        key = "ant" if side == "ant" else "succ"
        new_items = _replace(items, index, [LF(new, lab)])
        return Step(rule, (replace(seq, **{key: new_items}),), "same")
    if rule in ("ALL-LEFT", "EX-RIGHT") and param is not None:
        want = Forall if rule == "ALL-LEFT" else Exists
        if side != ("ant" if rule == "ALL-LEFT" else "succ") or not isinstance(f, want):
            raise SchemaMismatch(f"{rule} does not match {type(f).__name__}")
        from .axioms import instantiate_block

        inst = instantiate_block(f, param)
        quant = "forall" if lab == L else "exists"
        prefix = (quant, local_constants(seq, lab, param))
        if rule == "ALL-LEFT":
            new_seq = replace(seq, ant=seq.ant + (LF(inst, lab),))
        else:
            new_seq = replace(seq, succ=seq.succ + (LF(inst, lab),))
        return Step(f"{rule}-{lab}", (new_seq,), "same", prefix=prefix, info=tuple(param))
    raise SchemaMismatch(f"{rule} does not match {type(f).__name__} in the {side}")


def apply_axiom_instance(seq: Sequent, formula, label: str, kind: str) -> Step:
    """Add a ground theory-axiom instance ``[formula]_label`` to the antecedent."""
    quant = "forall" if label == L else "exists"
    prefix = (quant, local_constants(seq, label, [formula]))
    new_seq = replace(seq, ant=seq.ant + (LF(formula, label),))
    return Step(f"ALL-LEFT-{label}", (new_seq,), "same", prefix=prefix, info=(kind,))


def strengthen(seq: Sequent, index: int) -> Step:
    lf = seq.ant[index]
    if not isinstance(lf.formula, Leq):
        raise SchemaMismatch("STRENGTHEN needs an inequality")
    t = lf.formula.term
    a = replace(seq, ant=_replace(seq.ant, index, [LF(eq(t), lf.label)]))
    b = replace(seq, ant=_replace(seq.ant, index, [LF(leq(t + 1), lf.label)]))
    return Step("STRENGTHEN", (a, b), split_combinator(lf.label))


# ---------------------------------------------------------------------------
# proof trees


@dataclass
class ProofNode:
    rule: str
    conclusion: Sequent
    premises: list = field(default_factory=list)
    combine: str = "leaf"
    prefix: tuple = ()
    interpolant: object = None  # fixed for leaves, filled by extraction otherwise
    info: tuple = ()
    position: tuple = ()  # (side, index) of the principal formula

    def size(self) -> int:
        n, stack = 0, [self]
        while stack:
            node = stack.pop()
            n += 1
            stack.extend(node.premises)
        return n

    def iter_nodes(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.premises))


def quantify_constants(quant: str, consts, formula):
    """Replace ``consts`` by fresh bound variables under ``quant``."""
    consts = [c for c in consts if c in free_constants(formula)]
    if not consts:
        return formula
    avoid = all_symbols(formula)
    names = []
    for _ in consts:
        n = fresh_name("x", avoid)
        avoid.add(n)
        names.append(n)
    body = substitute(formula, {c: LinTerm.sym(n) for c, n in zip(consts, names)})
    wrap = forall if quant == "forall" else exists
    for n in reversed(names):
        body = wrap(n, body)
    return body


def extract_interpolant(root: ProofNode):
    """Fold combinators bottom-up; every leaf must be a closing rule."""
    order, stack = [], [root]
    while stack:
        node = stack.pop()
        order.append(node)
        stack.extend(node.premises)
    for node in reversed(order):
        if not node.premises:
            if node.combine != "leaf" or node.interpolant is None:
                raise OpenProof(f"open leaf at rule {node.rule}")
            continue
        parts = [p.interpolant for p in node.premises]
        if node.combine == "or":
            val = disj(*parts)
        elif node.combine == "and":
            val = conj(*parts)
        else:
            val = parts[0]
        if node.prefix:
            val = quantify_constants(node.prefix[0], node.prefix[1], val)
        node.interpolant = val
    return root.interpolant


def export_trace(root: ProofNode) -> str:
    """One s-expression per node in pre-order: ``(node id rule conclusion (premises ids))``."""
    ids = {}
    order = list(root.iter_nodes())
    for i, node in enumerate(order):
        ids[id(node)] = i
    lines = []
    for node in order:
        prem = " ".join(str(ids[id(p)]) for p in node.premises)
        lines.append(f"(node {ids[id(node)]} {node.rule} {node.conclusion} (premises {prem}))")
    return "\n".join(lines) + "\n"
