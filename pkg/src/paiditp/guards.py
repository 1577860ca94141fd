"""Guard normalization, integer-division form and fragment classification."""

from __future__ import annotations

from .formulas import (
    ATOMS,
    And,
    Divides,
    Eq,
    Exists,
    Forall,
    Not,
    Or,
    Pred,
    all_symbols,
    conj,
    disj,
    divides,
    eq,
    exists,
    free_constants,
    fresh_name,
    guarded_exists,
    guarded_forall,
    is_quantifier_free,
    iter_atoms,
    map_atom_terms,
    ne,
    neg,
    nnf,
    relational_binding,
    substitute,
)
from .intmath import smith_decompose
from .terms import DIV, LinTerm


def _rebuild(f, fn):
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, Not):
        return neg(fn(f.arg))
    if isinstance(f, And):
        return conj(*(fn(a) for a in f.args))
    if isinstance(f, Or):
        return disj(*(fn(a) for a in f.args))
    return type(f)(f.var, fn(f.body))


def _block(f):
    kind = type(f)
    names = []
    while isinstance(f, kind):
        names.append(f.var)
        f = f.body
    return kind, names, f


def normalize_guards(phi):
    """Rewrite multi-guard quantifier blocks into nested single-guard quantifiers.

    A block ``forall xs.(u_1 != 0 \\/ ... \\/ u_k != 0 \\/ psi)`` (or the
    existential dual with ``=`` and conjunction) is diagonalized through the
    Smith decomposition of the guard coefficient matrix.  Blocks that cannot
    be brought into guarded shape are left as they are.
    """
    if isinstance(phi, ATOMS):
        return phi
    if not isinstance(phi, (Forall, Exists)):
        return _rebuild(phi, normalize_guards)
    kind, names, body = _block(phi)
    body = normalize_guards(body)
    rebuilt = body
    for v in reversed(names):
        rebuilt = kind(v, rebuilt)
    if len(names) == 1 and _guard_count(kind, names[0], body) <= 1:
        return rebuilt
    out = _normalize_block(kind, names, body)
    return rebuilt if out is None else out


def _guard_count(kind, var, body):
    universal = kind is Forall
    parts = body.args if isinstance(body, Or if universal else And) else (body,)
    n = 0
    for p in parts:
        atom = p.arg if universal and isinstance(p, Not) else (p if not universal else None)
        n += isinstance(atom, Eq) and atom.term.coeff(var) != 0
    return n


def _normalize_block(kind, names, body):
    universal = kind is Forall
    parts = list(body.args) if isinstance(body, Or if universal else And) else [body]
    guards, rest = [], []
    for p in parts:
        atom = p.arg if universal and isinstance(p, Not) else (p if not universal else None)
        if isinstance(atom, Eq) and any(atom.term.coeff(v) for v in names):
            guards.append(atom.term)
        else:
            rest.append(p)
    used = [v for v in names if any(g.coeff(v) for g in guards) or v in free_constants(disj(*rest) if universal else conj(*rest))]
    names = [v for v in names if v in used]
    if not names:
        return (disj if universal else conj)(*parts)
    if not guards:
        return None
    mat = [[g.coeff(v) for v in names] for g in guards]
    offsets = [LinTerm(g.const, tuple(m for m in g.monomials if m[0] not in names)) for g in guards]
    st = smith_decompose(mat, len(names))
    avoid = all_symbols(body) | set(names)
    new_names = []
    for i in range(len(names)):
        n = fresh_name(names[i] if i < len(names) else "x", avoid - set(names) | set(new_names))
        new_names.append(n)
    # x = R_inv * y
    xs = {
        v: LinTerm.build(0, {new_names[j]: st.R_inv[i][j] for j in range(len(names))})
        for i, v in enumerate(names)
    }
    psi = (disj if universal else conj)(*rest)
    psi = substitute(psi, xs) if any(v in free_constants(psi) for v in names) else psi
    free_after = free_constants(psi)
    for j in range(st.rank, len(names)):
        if new_names[j] in free_after:
            return None
    outer, inner = [], []
    for i in range(len(guards)):
        w = LinTerm()
        for k, coef in enumerate(st.L_inv[i]):
            if coef:
                w = w + offsets[k] * coef
        if i < st.rank:
            inner.append(LinTerm.build(w.const, list(w.monomials) + [(new_names[i], st.diag[i])]))
        else:
            outer.append(w)
    result = psi
    for i in reversed(range(st.rank)):
        if universal:
            result = Forall(new_names[i], disj(ne(inner[i]), result))
        else:
            result = Exists(new_names[i], conj(eq(inner[i]), result))
    if universal:
        return disj(*(ne(w) for w in outer), result)
    return conj(*(eq(w) for w in outer), result)


# ---------------------------------------------------------------------------
# integer division


def _div(s: LinTerm, alpha: int) -> LinTerm:
    if alpha == 1:
        return s
    return LinTerm.app(DIV, [s, LinTerm.num(alpha)])


def to_div_form(phi, expand_divides: bool = False):
    """Replace guarded quantifiers by integer division.

    ``forall x.(a*x + t != 0 \\/ psi)`` becomes ``not (a | -t) \\/ psi[x/(-t div a)]``
    with ``a`` made positive first; existentials dually.
    """
    if isinstance(phi, Divides) and expand_divides:
        return eq(_div(phi.term, phi.modulus) * phi.modulus - phi.term)
    if isinstance(phi, ATOMS):
        return phi
    if isinstance(phi, Forall):
        g = guarded_forall(phi)
        if g is not None:
            alpha, s = (g.alpha, -g.term) if g.alpha > 0 else (-g.alpha, g.term)
            body = substitute(g.rest, {g.var: _div(s, alpha)})
            return disj(neg(to_div_form(divides(alpha, s), expand_divides)), to_div_form(body, expand_divides))
    if isinstance(phi, Exists):
        g = guarded_exists(phi)
        if g is not None:
            alpha, s = (g.alpha, -g.term) if g.alpha > 0 else (-g.alpha, g.term)
            body = substitute(g.rest, {g.var: _div(s, alpha)})
            return conj(to_div_form(divides(alpha, s), expand_divides), to_div_form(body, expand_divides))
    return _rebuild(phi, lambda f: to_div_form(f, expand_divides))


def _div_apps(atom):
    terms = atom.args if isinstance(atom, Pred) else (atom.term,)
    for t in terms:
        for app in t.apps():
            if app.name == DIV:
                return app
    return None


def from_div_form(phi):
    """Name every ``s div a`` by a guarded existential; the result is in NNF."""
    avoid = all_symbols(phi)

    def expand_atom(atom):
        app = _div_apps(atom)
        if app is None:
            return atom
        s, den = app.args
        if not den.is_const() or den.const == 0:
            raise ZeroDivisionError(str(app))
        alpha = den.const
        if alpha < 0:
            # floor(s / -a) = floor(-s / a)
            repl = LinTerm.app(DIV, [-s, LinTerm.num(-alpha)])
            return expand_atom(map_atom_terms(atom, lambda t: t.replace_app(app, repl)))
        if alpha == 1:
            return expand_atom(map_atom_terms(atom, lambda t: t.replace_app(app, s)))
        x = fresh_name("x", avoid)
        avoid.add(x)
        inner = expand_atom(map_atom_terms(atom, lambda t: t.replace_app(app, LinTerm.sym(x))))
        cases = []
        for r in range(alpha):
            guard = eq(LinTerm.sym(x, alpha) + r - s)
            cases.append(exists(x, conj(guard, inner)))
        return disj(*cases)

    def walk(f):
        if isinstance(f, ATOMS):
            return expand_atom(f)
        return _rebuild(f, walk)

    return nnf(walk(phi))


# ---------------------------------------------------------------------------
# classification

FRAGMENTS = ("QF-PA", "PAID", "PAID+UP", "PAID+UF_p", "PAID+UF", "GENERAL")


def _quantifiers_ok(f) -> bool:
    if isinstance(f, ATOMS):
        return True
    if isinstance(f, Not):
        return _quantifiers_ok(f.arg)
    if isinstance(f, (And, Or)):
        return all(_quantifiers_ok(a) for a in f.args)
    if isinstance(f, Forall) and guarded_forall(f) is None:
        return False
    if isinstance(f, Exists) and guarded_exists(f) is None and relational_binding(f) is None:
        return False
    return _quantifiers_ok(f.body)


def classify_fragment(phi) -> str:
    phi = nnf(phi)
    atoms = list(iter_atoms(phi))
    has_rel = any(isinstance(a, Pred) and a.relational for a in atoms)
    has_pred = any(isinstance(a, Pred) and not a.relational for a in atoms)
    funs = set()
    has_div = False
    for a in atoms:
        for t in a.args if isinstance(a, Pred) else (a.term,):
            fs = t.functions()
            has_div |= DIV in fs
            funs |= fs - {DIV}
    if is_quantifier_free(phi) and not (has_rel or has_pred or funs or has_div):
        return "QF-PA"
    if not _quantifiers_ok(phi):
        return "GENERAL"
    if has_rel:
        return "PAID+UF_p"
    if funs:
        return "PAID+UF"
    if has_pred:
        return "PAID+UP"
    return "PAID"
