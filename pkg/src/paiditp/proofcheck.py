"""Re-validation of stored proof trees against the rule schemas."""

from __future__ import annotations

from . import arith
from .axioms import candidate_instances
from .calculus import (
    L,
    SchemaMismatch,
    apply_axiom_instance,
    apply_prop_rule,
    apply_quant_rule,
    close_interpolant,
    strengthen,
)
from .formulas import FALSE, TRUE, Eq, Leq, Pred, leq
from .prover import PROP_RULES
from .terms import LinTerm


def _literals(seq):
    eqs = [(lf.formula.term, lf.label) for lf in seq.ant if isinstance(lf.formula, Eq)]
    leqs = [(lf.formula.term, lf.label) for lf in seq.ant if isinstance(lf.formula, Leq)]
    return eqs, leqs


def _check_leaf(node):
    seq, rule = node.conclusion, node.rule
    side, idx = node.position if node.position else (None, None)
    if rule in ("CLOSE-LL", "CLOSE-LR", "CLOSE-RL", "CLOSE-RR"):
        a = seq.ant[idx]
        if a.label != rule[-2] or not any(s.formula == a.formula and s.label == rule[-1] for s in seq.succ):
            return "no complementary pair"
        return None if node.interpolant == close_interpolant(a.label, rule[-1], a.formula) else "wrong interpolant"
    if rule == "CLOSE-FALSE":
        a = seq.ant[idx]
        want = FALSE if a.label == L else TRUE
        return None if a.formula == FALSE and node.interpolant == want else "bad false closure"
    if rule == "CLOSE-TRUE":
        s = seq.succ[idx]
        want = FALSE if s.label == L else TRUE
        return None if s.formula == TRUE and node.interpolant == want else "bad true closure"
    eqs, leqs = _literals(seq)
    if rule == "CLOSE-EQ-LEFT":
        c = arith.eq_contradiction(eqs)
        return None if c is not None and c.interpolant == node.interpolant else "equalities not contradictory"
    if rule == "CLOSE-EQ-RIGHT":
        target = seq.succ[idx]
        alpha, mults = node.info
        total = LinTerm()
        for k, (t, _) in zip(mults, eqs):
            total = total + t * k
        if alpha <= 0 or total != target.formula.term * alpha:
            return "bad equality certificate"
        d = arith.discharge_succedent_equality(eqs, target.formula.term, target.label)
        return None if d.interpolant == node.interpolant else "wrong interpolant"
    if rule == "CLOSE-INEQ":
        rows = leqs + eqs
        mults = node.info
        if len(mults) != len(rows) or any(m < 0 for m in mults[: len(leqs)]):
            return "bad multipliers"
        total, part = LinTerm(), LinTerm()
        for k, (t, lab) in zip(mults, rows):
            total = total + t * k
            if lab == L:
                part = part + t * k
        if not total.is_const() or total.const <= 0:
            return "combination is not a positive constant"
        return None if node.interpolant == leq(part) else "wrong interpolant"
    return f"unknown closing rule {rule}"


def _recompute(node):
    seq, rule = node.conclusion, node.rule
    if rule == "STRENGTHEN":
        return strengthen(seq, node.position[1])
    if not node.position:
        # ground axiom instance
        added = node.premises[0].conclusion.ant[len(seq.ant):]
        if len(added) != 1:
            raise SchemaMismatch("axiom step must add one formula")
        lf = added[0]
        eqs, _ = _literals(seq)
        system = arith.solve_equalities(eqs)

        def entails(s, t):
            return arith.entails_equality(system, tuple(s), tuple(t))

        ant_atoms = [(x.formula, x.label) for x in seq.ant if isinstance(x.formula, Pred)]
        succ_atoms = [(x.formula, x.label) for x in seq.succ if isinstance(x.formula, Pred)]
        succ_eqs = [(x.formula.term, x.label) for x in seq.succ if isinstance(x.formula, Eq)]
        cands = candidate_instances(ant_atoms, succ_atoms, succ_eqs, entails, True)
        if not any(c.formula == lf.formula for c in cands):
            raise SchemaMismatch("added formula is not an axiom instance")
        return apply_axiom_instance(seq, lf.formula, lf.label, node.info[0])
    side, idx = node.position
    if rule in PROP_RULES or rule.startswith("CLOSE"):
        return apply_prop_rule(rule, seq, side, idx)
    if rule.startswith(("ALL-LEFT-", "EX-RIGHT-")) and rule[-1] in "LR" and not rule.endswith("GRD"):
        return apply_quant_rule(rule[:-2], seq, side, idx, param=node.info)
    param = node.info[0] if node.info else None
    return apply_quant_rule(rule, seq, side, idx, param=param)


def validate_proof(root) -> list:
    """Problems found when re-checking every node; empty for a well-formed proof."""
    problems = []
    for n, node in enumerate(root.iter_nodes()):
        if not node.premises:
            msg = _check_leaf(node)
            if msg:
                problems.append(f"node {n} {node.rule}: {msg}")
            continue
        try:
            step = _recompute(node)
        except (SchemaMismatch, IndexError, StopIteration) as ex:
            problems.append(f"node {n} {node.rule}: {ex}")
            continue
        got = tuple(p.conclusion for p in node.premises)
        if step.premises != got:
            problems.append(f"node {n} {node.rule}: premises differ from the schema")
        elif step.combine != node.combine or tuple(step.prefix) != tuple(node.prefix):
            problems.append(f"node {n} {node.rule}: combinator differs")
    return problems

