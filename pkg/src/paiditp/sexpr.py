"""S-expression problem format: reader, converter and printer."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

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
    conj,
    disj,
    divides,
    eq,
    implies,
    leq,
    neg,
)
from .terms import DIV, LinTerm

ARRAY_FUNS = {"select": 2, "store": 3}


class ParseError(Exception):
    def __init__(self, line, col, message):
        super().__init__(f"{line}:{col}: {message}")
        self.line, self.col, self.message = line, col, message


class SortError(Exception):
    pass


class Sym(str):
    """A symbol token remembering its source position."""

    line = col = 0


@dataclass
class SList(list):
    line: int = 0
    col: int = 0

    def __init__(self, items=(), line=0, col=0):
        list.__init__(self, items)
        self.line, self.col = line, col

    __hash__ = None


_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s()]+")


def read_sexprs(text: str) -> list:
    stack = [SList()]
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        tok = m.group(0)
        if tok == "(":
            stack.append(SList(line=line, col=col))
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError(line, col, "unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        elif not tok[0].isspace() and tok[0] != ";":
            s = Sym(tok)
            s.line, s.col = line, col
            stack[-1].append(s)
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()
    if len(stack) != 1:
        top = stack[-1]
        raise ParseError(top.line, top.col, "unclosed '('")
    return list(stack[0])


def _pos(x):
    return getattr(x, "line", 0), getattr(x, "col", 0)


def _err(x, msg):
    raise ParseError(*_pos(x), msg)


def _is_int(tok) -> bool:
    return isinstance(tok, str) and re.fullmatch(r"-?\d+", tok) is not None


@dataclass
class Problem:
    consts: dict = field(default_factory=dict)  # name -> "Int" | "Array"
    preds: dict = field(default_factory=dict)  # name -> arity
    funs: dict = field(default_factory=dict)  # name -> arity
    part_a: object = TRUE
    part_b: object = TRUE

    def array_consts(self) -> set:
        return {c for c, s in self.consts.items() if s == "Array"}


def _sort_of(node):
    if isinstance(node, SList) and len(node) == 3 and node[0] == "Array":
        return "Array"
    if node == "Int":
        return "Int"
    _err(node, f"unknown sort {node!r}")


def parse_problem(text: str) -> Problem:
    prob = Problem()
    parts_a, parts_b = [], []
    for cmd in read_sexprs(text):
        if not isinstance(cmd, SList) or not cmd:
            _err(cmd, "expected a command")
        head = cmd[0]
        if head == "declare-const":
            if len(cmd) != 3:
                _err(cmd, "declare-const takes a name and a sort")
            prob.consts[str(cmd[1])] = _sort_of(cmd[2])
        elif head == "declare-pred":
            if len(cmd) != 3 or not isinstance(cmd[2], SList):
                _err(cmd, "declare-pred takes a name and an argument sort list")
            prob.preds[str(cmd[1])] = len(cmd[2])
        elif head == "declare-fun":
            if len(cmd) != 4 or not isinstance(cmd[2], SList):
                _err(cmd, "declare-fun takes a name, argument sorts and a result sort")
            prob.funs[str(cmd[1])] = len(cmd[2])
        elif head in ("assert-A", "assert-B"):
            if len(cmd) != 2:
                _err(cmd, f"{head} takes one formula")
            f = _Converter(prob).formula(cmd[1], set())
            (parts_a if head == "assert-A" else parts_b).append(f)
        else:
            _err(cmd, f"unknown command {head!r}")
    prob.part_a = conj(*parts_a)
    prob.part_b = conj(*parts_b)
    return prob


def parse_formula(text: str, prob: Problem):
    """Parse one formula against the declarations of ``prob``."""
    nodes = read_sexprs(text)
    if len(nodes) != 1:
        raise ParseError(1, 1, "expected exactly one formula")
    return _Converter(prob).formula(nodes[0], set())


class _Converter:
    def __init__(self, prob: Problem):
        self.prob = prob

    # -- terms ------------------------------------------------------------
    def term(self, x, bound) -> tuple:
        """Return (LinTerm, sort)."""
        if isinstance(x, Sym):
            if _is_int(x):
                return LinTerm.num(int(x)), "Int"
            if x in bound:
                return LinTerm.sym(str(x)), "Int"
            if x in self.prob.consts:
                return LinTerm.sym(str(x)), self.prob.consts[x]
            raise SortError(f"undeclared symbol {str(x)!r} at {x.line}:{x.col}")
        if not isinstance(x, SList) or not x:
            _err(x, "malformed term")
        head, args = x[0], x[1:]
        if head == "+":
            out = LinTerm()
            for a in args:
                out = out + self.int_term(a, bound)
            return out, "Int"
        if head == "-":
            if not args:
                _err(x, "'-' needs arguments")
            first = self.int_term(args[0], bound)
            if len(args) == 1:
                return -first, "Int"
            for a in args[1:]:
                first = first - self.int_term(a, bound)
            return first, "Int"
        if head == "*":
            out = LinTerm.num(1)
            var = None
            for a in args:
                t = self.int_term(a, bound)
                if t.is_const():
                    out = out * t.const
                elif var is None and out.is_const():
                    var = t
                else:
                    _err(x, "nonlinear multiplication")
            if var is not None:
                return var * out.const, "Int"
            return out, "Int"
        if head == "div":
            if len(args) != 2:
                _err(x, "div takes two arguments")
            num = self.int_term(args[0], bound)
            den = self.int_term(args[1], bound)
            if not den.is_const():
                _err(x, "div needs a literal divisor")
            if den.const == 0:
                raise SortError(f"division by zero at {x.line}:{x.col}")
            return LinTerm.app(DIV, [num, den]), "Int"
        if head == "select":
            if len(args) != 2:
                _err(x, "select takes two arguments")
            arr = self.array_term(args[0], bound)
            return LinTerm.app("select", [arr, self.int_term(args[1], bound)]), "Int"
        if head == "store":
            if len(args) != 3:
                _err(x, "store takes three arguments")
            arr = self.array_term(args[0], bound)
            return LinTerm.app("store", [arr, self.int_term(args[1], bound), self.int_term(args[2], bound)]), "Array"
        if head in self.prob.funs:
            if len(args) != self.prob.funs[head]:
                raise SortError(f"{head} expects {self.prob.funs[head]} arguments")
            return LinTerm.app(str(head), [self.int_term(a, bound) for a in args]), "Int"
        raise SortError(f"undeclared function {str(head)!r} at {x.line}:{x.col}")

    def int_term(self, x, bound) -> LinTerm:
        t, sort = self.term(x, bound)
        if sort != "Int":
            raise SortError(f"array term used as integer at {_pos(x)[0]}:{_pos(x)[1]}")
        return t

    def array_term(self, x, bound) -> LinTerm:
        t, sort = self.term(x, bound)
        if sort != "Array":
            raise SortError(f"integer term used as array at {_pos(x)[0]}:{_pos(x)[1]}")
        return t

    # -- formulas ---------------------------------------------------------
    def formula(self, x, bound):
        if isinstance(x, Sym):
            if x == "true":
                return TRUE
            if x == "false":
                return FALSE
            if self.prob.preds.get(x) == 0:
                return Pred(str(x), ())
            raise SortError(f"undeclared symbol {str(x)!r} at {x.line}:{x.col}")
        if not isinstance(x, SList) or not x:
            _err(x, "malformed formula")
        head, args = x[0], x[1:]
        if head == "and":
            return conj(*(self.formula(a, bound) for a in args))
        if head == "or":
            return disj(*(self.formula(a, bound) for a in args))
        if head == "not":
            if len(args) != 1:
                _err(x, "not takes one argument")
            return neg(self.formula(args[0], bound))
        if head == "=>":
            if len(args) != 2:
                _err(x, "=> takes two arguments")
            return implies(self.formula(args[0], bound), self.formula(args[1], bound))
        if head in ("forall", "exists"):
            if len(args) != 2 or not isinstance(args[0], SList):
                _err(x, f"{head} takes a binder list and a body")
            names = []
            for b in args[0]:
                if not isinstance(b, SList) or len(b) != 2 or b[1] != "Int":
                    _err(b, "binders are (name Int)")
                names.append(str(b[0]))
            body = self.formula(args[1], bound | set(names))
            for n in reversed(names):
                body = Forall(n, body) if head == "forall" else Exists(n, body)
            return body
        if head == "=":
            if len(args) != 2:
                _err(x, "= takes two arguments")
            (s, ss), (t, ts) = self.term(args[0], bound), self.term(args[1], bound)
            if ss != ts:
                raise SortError(f"sort mismatch in equality at {x.line}:{x.col}")
            return eq(s - t)
        if head in ("<=", "<", ">=", ">"):
            if len(args) != 2:
                _err(x, f"{head} takes two arguments")
            s, t = self.int_term(args[0], bound), self.int_term(args[1], bound)
            return {"<=": leq(s - t), "<": leq(s - t + 1), ">=": leq(t - s), ">": leq(t - s + 1)}[head]
        if head == "divides":
            if len(args) != 2 or not _is_int(args[0]) or int(args[0]) == 0:
                _err(x, "divides takes a nonzero literal and a term")
            return divides(int(args[0]), self.int_term(args[1], bound))
        if head in self.prob.preds:
            if len(args) != self.prob.preds[head]:
                raise SortError(f"{head} expects {self.prob.preds[head]} arguments")
            return Pred(str(head), tuple(self.int_term(a, bound) for a in args))
        # graph predicate of a function: one extra result argument
        arity = self.prob.funs.get(head, ARRAY_FUNS.get(head))
        if arity is not None and len(args) == arity + 1:
            terms = []
            for i, a in enumerate(args):
                t, _ = self.term(a, bound)
                terms.append(t)
            return Pred(str(head), tuple(terms), relational=True)
        raise SortError(f"undeclared predicate {str(head)!r} at {x.line}:{x.col}")


# ---------------------------------------------------------------------------
# printing


def _int(n: int) -> str:
    return str(n) if n >= 0 else f"(- {-n})"


def _atom_str(a) -> str:
    if isinstance(a, str):
        return a
    args = " ".join(print_term(t) for t in a.args)
    return f"({a.name} {args})"


def _mono(a, c) -> str:
    if c == 1:
        return _atom_str(a)
    return f"(* {_int(c)} {_atom_str(a)})"


def print_term(t: LinTerm) -> str:
    parts = [_mono(a, c) for a, c in t.monomials]
    if t.const or not parts:
        parts.append(_int(t.const))
    return parts[0] if len(parts) == 1 else f"(+ {' '.join(parts)})"


def _split_sides(t: LinTerm):
    pos = LinTerm(max(t.const, 0), tuple(m for m in t.monomials if m[1] > 0))
    negs = LinTerm(max(-t.const, 0), tuple((a, -c) for a, c in t.monomials if c < 0))
    return print_term(pos), print_term(negs)


def print_formula(f) -> str:
    if f == TRUE:
        return "true"
    if f == FALSE:
        return "false"
    if isinstance(f, Eq):
        p, n = _split_sides(f.term)
        return f"(= {p} {n})"
    if isinstance(f, Leq):
        p, n = _split_sides(f.term)
        return f"(<= {p} {n})"
    if isinstance(f, Divides):
        return f"(divides {f.modulus} {print_term(f.term)})"
    if isinstance(f, Pred):
        if not f.args:
            return f.name
        return f"({f.name} {' '.join(print_term(a) for a in f.args)})"
    if isinstance(f, Not):
        return f"(not {print_formula(f.arg)})"
    if isinstance(f, And):
        return f"(and {' '.join(print_formula(a) for a in f.args)})"
    if isinstance(f, Or):
        return f"(or {' '.join(print_formula(a) for a in f.args)})"
    kind = type(f)
    names = []
    while isinstance(f, kind):
        names.append(f.var)
        f = f.body
    binders = " ".join(f"({n} Int)" for n in names)
    word = "forall" if kind is Forall else "exists"
    return f"({word} ({binders}) {print_formula(f)})"


def print_problem(prob: Problem) -> str:
    lines = []
    for c, s in prob.consts.items():
        lines.append(f"(declare-const {c} {'Int' if s == 'Int' else '(Array Int Int)'})")
    for p, n in prob.preds.items():
        lines.append(f"(declare-pred {p} ({' '.join(['Int'] * n)}))")
    for fn, n in prob.funs.items():
        lines.append(f"(declare-fun {fn} ({' '.join(['Int'] * n)}) Int)")
    lines.append(f"(assert-A {print_formula(prob.part_a)})")
    lines.append(f"(assert-B {print_formula(prob.part_b)})")
    return "\n".join(lines) + "\n"
