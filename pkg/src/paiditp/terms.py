"""Canonical integer-linear terms.

A :class:`LinTerm` is a constant plus a linear combination of *atoms*.  An
atom is either a constant/variable symbol (a plain ``str``) or a function
application :class:`FunApp`.  Terms are immutable, hashable and kept in a
canonical form, so structural equality coincides with equality of the
denoted polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterable, Mapping, Union

Atom = Union[str, "FunApp"]

# reserved name for floor division produced by the div-form translation
DIV = "div"


def _atom_key(atom):
    if isinstance(atom, str):
        return (0, atom)
    return (1, atom.name, tuple(a.sort_key() for a in atom.args))


@dataclass(frozen=True)
class FunApp:
    name: str
    args: tuple  # tuple[LinTerm, ...]

    def __str__(self):
        return f"{self.name}({', '.join(str(a) for a in self.args)})"

    def symbols(self) -> set:
        out = set()
        for a in self.args:
            out |= a.symbols()
        return out


@dataclass(frozen=True)
class LinTerm:
    const: int = 0
    monomials: tuple = ()  # sorted tuple of (atom, nonzero int)

    # -- construction -----------------------------------------------------
    @staticmethod
    def build(const: int = 0, coeffs: Mapping | Iterable = ()) -> "LinTerm":
        acc: dict = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for atom, c in items:
            if c:
                acc[atom] = acc.get(atom, 0) + c
        mons = tuple(sorted(((a, c) for a, c in acc.items() if c), key=lambda m: _atom_key(m[0])))
        return LinTerm(int(const), mons)

    @staticmethod
    def num(value: int) -> "LinTerm":
        return LinTerm(int(value), ())

    @staticmethod
    def sym(name: str, coeff: int = 1) -> "LinTerm":
        return LinTerm.build(0, {name: coeff})

    @staticmethod
    def app(name: str, args) -> "LinTerm":
        return LinTerm.build(0, {FunApp(name, tuple(args)): 1})

    # -- views ------------------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return {a: c for a, c in self.monomials if isinstance(a, str)}

    @property
    def fun_apps(self) -> dict:
        return {a: c for a, c in self.monomials if isinstance(a, FunApp)}

    def coeff(self, atom) -> int:
        for a, c in self.monomials:
            if a == atom:
                return c
        return 0

    def is_const(self) -> bool:
        return not self.monomials

    def symbols(self) -> set:
        """Constant and variable symbols, including those inside applications."""
        out = set()
        for a, _ in self.monomials:
            if isinstance(a, str):
                out.add(a)
            else:
                out |= a.symbols()
        return out

    def functions(self) -> set:
        out = set()
        for a, _ in self.monomials:
            if isinstance(a, FunApp):
                out.add(a.name)
                for t in a.args:
                    out |= t.functions()
        return out

    def apps(self) -> list:
        """All applications, innermost first, in canonical order."""
        out = []
        for a, _ in self.monomials:
            if isinstance(a, FunApp):
                for t in a.args:
                    for inner in t.apps():
                        if inner not in out:
                            out.append(inner)
                if a not in out:
                    out.append(a)
        return out

    def content(self) -> int:
        """gcd of the atom coefficients (0 for a constant term)."""
        g = 0
        for _, c in self.monomials:
            g = gcd(g, c)
        return g

    def sort_key(self):
        return (self.const, tuple((_atom_key(a), c) for a, c in self.monomials))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            return LinTerm(self.const + other, self.monomials)
        return LinTerm.build(self.const + other.const, list(self.monomials) + list(other.monomials))

    __radd__ = __add__

    def __neg__(self):
        return LinTerm(-self.const, tuple((a, -c) for a, c in self.monomials))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return LinTerm()
        return LinTerm(self.const * k, tuple((a, c * k) for a, c in self.monomials))

    __rmul__ = __mul__

    def without(self, atom) -> "LinTerm":
        return LinTerm(self.const, tuple(m for m in self.monomials if m[0] != atom))

    def exact_div(self, k: int) -> "LinTerm":
        assert k and self.const % k == 0 and all(c % k == 0 for _, c in self.monomials)
        return LinTerm(self.const // k, tuple((a, c // k) for a, c in self.monomials))

    # -- substitution -----------------------------------------------------
    def map_atoms(self, fn: Callable) -> "LinTerm":
        """Rebuild the term, replacing each atom by ``fn(atom)`` (a LinTerm or None to keep)."""
        result = LinTerm.num(self.const)
        for a, c in self.monomials:
            if isinstance(a, FunApp):
                a = FunApp(a.name, tuple(t.map_atoms(fn) for t in a.args))
            repl = fn(a)
            result = result + (LinTerm.build(0, {a: 1}) if repl is None else repl) * c
        return result

    def substitute(self, mapping: Mapping[str, "LinTerm"]) -> "LinTerm":
        if not mapping:
            return self
        return self.map_atoms(lambda a: mapping.get(a) if isinstance(a, str) else None)

    def replace_app(self, app: FunApp, repl: "LinTerm") -> "LinTerm":
        return self.map_atoms(lambda a: repl if a == app else None)

    # -- evaluation -------------------------------------------------------
    def evaluate(self, env: Mapping[str, int], funcs: Callable | None = None) -> int:
        total = self.const
        for a, c in self.monomials:
            if isinstance(a, str):
                total += c * env[a]
            else:
                args = tuple(t.evaluate(env, funcs) for t in a.args)
                if a.name == DIV:
                    total += c * (args[0] // args[1])
                else:
                    total += c * funcs(a.name, args)
        return total

    def __str__(self):
        parts = []
        for a, c in self.monomials:
            name = str(a)
            if c == 1:
                parts.append(f"+ {name}")
            elif c == -1:
                parts.append(f"- {name}")
            elif c > 0:
                parts.append(f"+ {c}{name}")
            else:
                parts.append(f"- {-c}{name}")
        if self.const or not parts:
            parts.append(f"+ {self.const}" if self.const >= 0 else f"- {-self.const}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def normalize_term(raw) -> LinTerm:
    """Canonicalize a raw term.

    ``raw`` is an int, a symbol name, a LinTerm, or a nested tuple
    ``("+", t, ...)``, ``("-", t, ...)``, ``("*", k, t)`` or
    ``("app", f, [args])``.
    """
    if isinstance(raw, LinTerm):
        return LinTerm.build(raw.const, raw.monomials)
    if isinstance(raw, bool):
        raise TypeError("booleans are not terms")
    if isinstance(raw, int):
        return LinTerm.num(raw)
    if isinstance(raw, str):
        return LinTerm.sym(raw)
    op, *rest = raw
    if op == "+":
        out = LinTerm()
        for r in rest:
            out = out + normalize_term(r)
        return out
    if op == "-":
        if len(rest) == 1:
            return -normalize_term(rest[0])
        out = normalize_term(rest[0])
        for r in rest[1:]:
            out = out - normalize_term(r)
        return out
    if op == "*":
        k, t = rest
        return normalize_term(t) * int(k)
    if op == "app":
        name, args = rest
        return LinTerm.app(name, [normalize_term(a) for a in args])
    raise ValueError(f"unknown term constructor {op!r}")
