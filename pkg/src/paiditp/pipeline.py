"""End-to-end interpolation: encode, prove, extract, translate back, normalize."""

from __future__ import annotations

from dataclasses import dataclass

from .axioms import back_translate, rel_encode
from .calculus import LF, L, R, Sequent
from .formulas import all_symbols, atom_terms, iter_atoms, nnf, predicates, relations
from .guards import from_div_form, normalize_guards, to_div_form
from .prover import Closed, ProverConfig, Satisfiable, Unknown, prove
from .terms import DIV

ARRAY_OPS = ("select", "store")


def _has_div(f) -> bool:
    for a in iter_atoms(f):
        for t in atom_terms(a):
            if DIV in t.functions():
                return True
    return False


def prepare_part(f, avoid: set):
    """NNF, division elimination and relational encoding of one input part."""
    f = nnf(f)
    if _has_div(f):
        f = from_div_form(f)
    return rel_encode(f, avoid)


def theory_axioms(a_rel, b_rel) -> frozenset:
    """Implicit axioms: consistency axioms of each symbol labelled by the parts it occurs in.

    Predicate consistency also covers graph predicates, where it is the
    congruence of the relation itself.

    Array axioms are theory axioms and are available under both labels.
    """
    out = set()
    for f, lab in ((a_rel, L), (b_rel, R)):
        for name in predicates(f):
            out.add(("PC", name, lab))
        for name in relations(f):
            if name in ARRAY_OPS:
                for side in (L, R):
                    out.add(("AR", name, side))
                    out.add(("FC", name, side))
                    out.add(("PC", name, side))
            else:
                out.add(("FC", name, lab))
                out.add(("PC", name, lab))
    return frozenset(out)


def encoded_sequent(a, b):
    avoid = all_symbols(a) | all_symbols(b)
    a_rel = prepare_part(a, avoid)
    avoid |= all_symbols(a_rel)
    b_rel = prepare_part(b, avoid)
    return Sequent((LF(a_rel, L), LF(b_rel, R)), (), theory_axioms(a_rel, b_rel))


@dataclass
class Outcome:
    status: str  # interpolant | satisfiable | unknown
    interpolant: object = None  # user-facing form
    relational: object = None  # interpolant over graph predicates
    raw: object = None  # as extracted from the proof
    proof: object = None
    model: dict | None = None
    reason: str = ""


def interpolate(a, b, config: ProverConfig | None = None, relational: bool = False, div_form: bool = False) -> Outcome:
    seq = encoded_sequent(a, b)
    res = prove(seq, config)
    if isinstance(res, Satisfiable):
        return Outcome("satisfiable", model=res.model)
    if isinstance(res, Unknown):
        return Outcome("unknown", reason=res.reason)
    assert isinstance(res, Closed)
    raw = res.interpolant
    rel = normalize_guards(raw)
    out = rel if relational else normalize_guards(back_translate(rel))
    if div_form:
        out = to_div_form(out)
    return Outcome("interpolant", out, rel, raw, res.proof)
