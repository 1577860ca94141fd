"""Proof search over labelled sequents."""

from __future__ import annotations

import sys
import threading
import time
from dataclasses import dataclass, field

from . import arith
from .axioms import candidate_instances, ematch
from .calculus import (
    L,
    ProofNode,
    R,
    SchemaMismatch,
    Sequent,
    Step,
    apply_axiom_instance,
    apply_prop_rule,
    apply_quant_rule,
    close_interpolant,
    extract_interpolant,
    strengthen,
)
from .formulas import (
    FALSE,
    TRUE,
    And,
    Divides,
    Eq,
    Exists,
    Forall,
    Leq,
    Not,
    Or,
    Pred,
    guarded_exists,
    guarded_forall,
    iter_atoms,
)
from .guards import normalize_guards
from .omega import int_model

STRATEGIES = ("restricted", "free")
FC_ORDERS = ("derivation", "reverse")


@dataclass
class ProverConfig:
    strategy: str = "restricted"
    fc_order: str = "derivation"
    max_nodes: int = 100_000
    timeout: float | None = None
    use_oracle: bool = True


@dataclass
class Closed:
    proof: ProofNode
    interpolant: object


@dataclass
class Satisfiable:
    model: dict = field(default_factory=dict)


@dataclass
class Unknown:
    reason: str
    branch: object = None


class _Abort(Exception):
    def __init__(self, result):
        self.result = result


@dataclass(frozen=True)
class _Branch:
    seq: Sequent
    used: frozenset = frozenset()
    turn: int = 0


# ---------------------------------------------------------------------------
# literal views


def _is_stuck_forall(f):
    return isinstance(f, Forall) and guarded_forall(f) is None and normalize_guards(f) == f


def _is_stuck_exists(f):
    return isinstance(f, Exists) and guarded_exists(f) is None and normalize_guards(f) == f


def _ant_rule(f, label):
    if isinstance(f, And):
        return "AND-LEFT"
    if isinstance(f, Or):
        return f"OR-LEFT-{label}"
    if isinstance(f, Not):
        return "NOT-LEFT"
    if isinstance(f, Exists):
        return "EX-LEFT"
    if isinstance(f, Divides):
        return "DIV-LEFT"
    if isinstance(f, Forall):
        if guarded_forall(f) is not None:
            return "ALL-LEFT-GRD"
        if normalize_guards(f) != f:
            return "GUARD-NORM"
    return None


def _succ_rule(f, label):
    if isinstance(f, Or):
        return "OR-RIGHT"
    if isinstance(f, And):
        return f"AND-RIGHT-{label}"
    if isinstance(f, Not):
        return "NOT-RIGHT"
    if isinstance(f, Forall):
        return "ALL-RIGHT"
    if isinstance(f, Leq):
        return "MOVE-INEQ"
    if isinstance(f, Divides):
        return "DIV-RIGHT"
    if isinstance(f, Exists):
        if guarded_exists(f) is not None:
            return "EX-RIGHT-GRD"
        if normalize_guards(f) != f:
            return "GUARD-NORM"
    return None


PROP_RULES = ("AND-LEFT", "OR-LEFT-L", "OR-LEFT-R", "NOT-LEFT", "OR-RIGHT", "AND-RIGHT-L", "AND-RIGHT-R", "NOT-RIGHT")


def _apply(rule, seq, side, index, counter):
    if rule in PROP_RULES:
        return apply_prop_rule(rule, seq, side, index)
    return apply_quant_rule(rule, seq, side, index, counter=counter)


def _closing_pair(seq):
    for i, a in enumerate(seq.ant):
        if a.formula == FALSE:
            return i, None
        for s in seq.succ:
            if s.formula == a.formula:
                return i, s
    return None


def _branch_sat(seq):
    """Integer model of the literal branch with predicate consistency clauses, or None."""
    eqs, leqs, neqs = [], [], []
    for lf in seq.ant:
        f = lf.formula
        if isinstance(f, Eq):
            eqs.append(_coeffs(f.term))
        elif isinstance(f, Leq):
            leqs.append(_coeffs(f.term))
    for lf in seq.succ:
        if isinstance(lf.formula, Eq):
            neqs.append(_coeffs(lf.formula.term))
    ant_preds = [lf.formula for lf in seq.ant if isinstance(lf.formula, Pred)]
    succ_preds = [lf.formula for lf in seq.succ if isinstance(lf.formula, Pred)]
    clauses = []
    for a in ant_preds:
        for b in succ_preds:
            if a.name == b.name and a.relational == b.relational and len(a.args) == len(b.args):
                clauses.append([("ne", x - y) for x, y in zip(a.args, b.args)])
    rel = [a for a in ant_preds if a.relational]
    for i, a in enumerate(rel):
        for b in rel[i + 1:]:
            if a.name == b.name and len(a.args) == len(b.args):
                lits = [("ne", x - y) for x, y in zip(a.args[:-1], b.args[:-1])]
                clauses.append(lits + [("eq", a.args[-1] - b.args[-1])])
    return _dpll(eqs, neqs, leqs, clauses)


def _coeffs(t):
    return dict(t.monomials), t.const


def _dpll(eqs, neqs, leqs, clauses):
    model = int_model(eqs, leqs, neqs)
    if model is None:
        return None
    for ci, clause in enumerate(clauses):
        if any(_holds(lit, model) for lit in clause):
            continue
        rest = clauses[:ci] + clauses[ci + 1:]
        for kind, t in clause:
            if kind == "eq":
                found = _dpll(eqs + [_coeffs(t)], neqs, leqs, rest)
            else:
                found = _dpll(eqs, neqs + [_coeffs(t)], leqs, rest)
            if found is not None:
                return found
        return None
    return model


def _holds(lit, model):
    kind, t = lit
    val = t.const + sum(c * model.get(a, 0) for a, c in t.monomials)
    return (val == 0) == (kind == "eq")


# ---------------------------------------------------------------------------


class Prover:
    def __init__(self, config: ProverConfig | None = None):
        self.config = config or ProverConfig()
        self.counter = [0]
        self.nodes = 0
        self.deadline = None

    def prove(self, seq: Sequent):
        """Search for a closed proof of ``seq``; returns Closed, Satisfiable or Unknown."""
        self.nodes = 0
        self.counter = [0]
        self.deadline = time.monotonic() + self.config.timeout if self.config.timeout else None
        box = {}

        def run():
            try:
                root = self._search(_Branch(seq))
                box["result"] = Closed(root, extract_interpolant(root))
            except _Abort as ab:
                box["result"] = ab.result
            except RecursionError:
                box["result"] = Unknown("recursion depth exhausted")

        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 200_000))
        prev = threading.stack_size(512 * 1024 * 1024)
        try:
            th = threading.Thread(target=run)
            th.start()
            th.join()
        finally:
            threading.stack_size(prev)
            sys.setrecursionlimit(old)
        return box["result"]

    # -- search ---------------------------------------------------------------

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.config.max_nodes:
            raise _Abort(Unknown(f"node budget of {self.config.max_nodes} exhausted"))
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _Abort(Unknown("timeout"))

    def _node(self, step: Step, branch: _Branch, children, used=None, position=()):
        seq = branch.seq
        node = ProofNode(step.rule, seq, [], step.combine, step.prefix, step.interpolant, step.info, position)
        for prem in children:
            node.premises.append(self._search(_Branch(prem, used if used is not None else branch.used, branch.turn)))
        return node

    def _search(self, branch: _Branch) -> ProofNode:
        self._tick()
        seq = branch.seq
        pair = _closing_pair(seq)
        if pair is not None:
            i, s = pair
            a = seq.ant[i]
            if s is None:
                return ProofNode("CLOSE-FALSE", seq, interpolant=FALSE if a.label == L else TRUE, position=("ant", i))
            rule = f"CLOSE-{a.label}{s.label}"
            return ProofNode(rule, seq, interpolant=close_interpolant(a.label, s.label, a.formula), position=("ant", i))
        for j, s in enumerate(seq.succ):
            if s.formula == TRUE:
                return ProofNode("CLOSE-TRUE", seq, interpolant=FALSE if s.label == L else TRUE, position=("succ", j))

        found = self._structural(seq)
        if found is not None:
            step, pos = found
            return self._node(step, branch, step.premises, position=pos)

        leaf = self._arith_close(seq)
        if leaf is not None:
            return leaf

        stuck = [lf for lf in seq.ant if isinstance(lf.formula, Forall)] + [
            lf for lf in seq.succ if isinstance(lf.formula, Exists)
        ]
        atoms = [a for lf in seq.ant + seq.succ for a in iter_atoms(lf.formula)]
        has_array = any(isinstance(a, Pred) and a.relational and a.name in ("select", "store") for a in atoms)
        if self.config.use_oracle and not stuck and not has_array:
            model = _branch_sat(seq)
            if model is not None:
                raise _Abort(Satisfiable({str(k): v for k, v in model.items()}))

        for inst in self._instances(seq, branch, has_array):
            step = apply_axiom_instance(seq, inst.formula, inst.label, inst.kind)
            return self._node(step, branch, step.premises, branch.used | {inst.key})

        for step, key, pos in self._ematch(seq, branch):
            return self._node(step, branch, step.premises, branch.used | {key}, pos)

        leqs = [i for i, lf in enumerate(seq.ant) if isinstance(lf.formula, Leq)]
        if leqs:
            i = leqs[branch.turn % len(leqs)]
            step = strengthen(seq, i)
            node = ProofNode(step.rule, seq, [], step.combine, position=("ant", i))
            for prem in step.premises:
                node.premises.append(self._search(_Branch(prem, branch.used, branch.turn + 1)))
            return node
        raise _Abort(Unknown("no rule applies to an open branch", seq))

    def _structural(self, seq):
        for i, lf in enumerate(seq.ant):
            rule = _ant_rule(lf.formula, lf.label)
            if rule:
                return _apply(rule, seq, "ant", i, self.counter), ("ant", i)
        for i, lf in enumerate(seq.succ):
            rule = _succ_rule(lf.formula, lf.label)
            if rule:
                return _apply(rule, seq, "succ", i, self.counter), ("succ", i)
        return None

    def _arith_close(self, seq):
        eqs = [(lf.formula.term, lf.label) for lf in seq.ant if isinstance(lf.formula, Eq)]
        leqs = [(lf.formula.term, lf.label) for lf in seq.ant if isinstance(lf.formula, Leq)]
        contra = arith.eq_contradiction(eqs)
        if contra is not None:
            return ProofNode("CLOSE-EQ-LEFT", seq, interpolant=contra.interpolant, info=contra.certificate)
        for j, lf in enumerate(seq.succ):
            if isinstance(lf.formula, Eq):
                try:
                    d = arith.discharge_succedent_equality(eqs, lf.formula.term, lf.label)
                except arith.NotEntailed:
                    continue
                return ProofNode("CLOSE-EQ-RIGHT", seq, interpolant=d.interpolant, info=(d.alpha, d.multipliers), position=("succ", j))
        if leqs:
            fm = arith.close_by_inequalities(eqs, leqs)
            if fm is not None:
                return ProofNode("CLOSE-INEQ", seq, interpolant=fm.interpolant, info=fm.multipliers)
        return None

    def _instances(self, seq, branch, has_array):
        eqs = [(lf.formula.term, lf.label) for lf in seq.ant if isinstance(lf.formula, Eq)]
        system = arith.solve_equalities(eqs)

        def entails(s, t):
            return arith.entails_equality(system, tuple(s), tuple(t))

        ant_atoms = [(lf.formula, lf.label) for lf in seq.ant if isinstance(lf.formula, Pred)]
        succ_atoms = [(lf.formula, lf.label) for lf in seq.succ if isinstance(lf.formula, Pred)]
        succ_eqs = [(lf.formula.term, lf.label) for lf in seq.succ if isinstance(lf.formula, Eq)]
        found = candidate_instances(ant_atoms, succ_atoms, succ_eqs, entails, has_array)
        present = {lf.formula for lf in seq.ant}
        gated, same, cross = [], [], []
        for inst in found:
            inst = self._available(seq, inst)
            if inst is None or inst.key in branch.used or inst.formula in present:
                continue
            if inst.gated:
                gated.append(inst)
            elif inst.same_label:
                same.append(inst)
            elif self.config.strategy == "free":
                cross.append(inst)
        ordered = gated + same + cross
        if self.config.fc_order == "reverse":
            ordered.reverse()
        return ordered

    def _available(self, seq, inst):
        family = _axiom_family(inst.kind)
        if (family, inst.symbol, inst.label) in seq.axioms:
            return inst
        alt = R if inst.label == L else L
        if (family, inst.symbol, alt) in seq.axioms:
            return type(inst)(inst.kind, inst.symbol, alt, inst.formula, inst.trigger, inst.gated, inst.same_label)
        return None

    def _ematch(self, seq, branch):
        ant_atoms = [lf.formula for lf in seq.ant if isinstance(lf.formula, Pred)]
        succ_atoms = [lf.formula for lf in seq.succ if isinstance(lf.formula, Pred)]
        system = arith.solve_equalities([(lf.formula.term, lf.label) for lf in seq.ant if isinstance(lf.formula, Eq)])

        def entails(s, t):
            return arith.entails_equality(system, tuple(s), tuple(t))

        for side, items, rule in (("ant", seq.ant, "ALL-LEFT"), ("succ", seq.succ, "EX-RIGHT")):
            kind = Forall if side == "ant" else Exists
            for i, lf in enumerate(items):
                if not isinstance(lf.formula, kind):
                    continue
                for tup in ematch(lf.formula, side == "ant", ant_atoms, succ_atoms, entails):
                    key = ("inst", lf.formula, tup)
                    if key in branch.used:
                        continue
                    try:
                        step = apply_quant_rule(rule, seq, side, i, param=tup)
                    except SchemaMismatch:
                        continue
                    yield step, key, (side, i)


def _axiom_family(kind):
    return {"AR1": "AR", "AR2": "AR", "AR3": "AR"}.get(kind, kind)


def axioms_for(symbols, labels=(L, R)):
    """Implicit axiom triples ``(kind, symbol, label)`` for predicates, relations and arrays."""
    out = set()
    for kind, name in symbols:
        for lab in labels:
            out.add((kind, name, lab))
    return frozenset(out)


def prove(seq: Sequent, config: ProverConfig | None = None):
    return Prover(config).prove(seq)
