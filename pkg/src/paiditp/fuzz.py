"""Random interpolation problems with known satisfiability, as problem-file text."""

from __future__ import annotations

import os
import random

KINDS = ("PA", "UP", "UF")


def seeded_rng(default: int = 0) -> random.Random:
    """RNG seeded from ``ITP_SEED`` when set."""
    return random.Random(int(os.environ.get("ITP_SEED", default)))


def _lin(coeffs, const=0):
    parts = [f"(* {k} {v})" if k != 1 else v for v, k in coeffs if k]
    if const:
        parts.append(str(const) if const > 0 else f"(- {-const})")
    if not parts:
        return "0"
    return parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"


def _decls(consts, preds=(), funs=()):
    out = [f"(declare-const {c} Int)" for c in consts]
    out += [f"(declare-pred {p} (Int))" for p in preds]
    out += [f"(declare-fun {f} (Int) Int)" for f in funs]
    return "\n".join(out)


def _slack(rng, names):
    """A satisfiable side constraint over ``names`` (a loose bound)."""
    v = rng.choice(names)
    return f"(<= {v} {rng.randint(20, 40)})"


def gen_pa(rng, sat):
    m = rng.randint(2, 5)
    if rng.random() < 0.5:
        r1 = rng.randrange(m)
        r2 = r1 if sat else (r1 + rng.randint(1, m - 1)) % m
        a = f"(and (= x {_lin([('c', m)], r1)}) {_slack(rng, ['c', 'x'])})"
        b = f"(and (= x {_lin([('d', m)], r2)}) {_slack(rng, ['d'])})"
    else:
        k = rng.randint(-5, 5)
        gap = 0 if sat else rng.randint(1, 3)
        a = f"(and (<= (+ x c) {k}) (>= c 0))"
        b = f"(and (>= x {k + gap}) (<= d (- x 1)))"
    return _decls(["x", "c", "d"]) + f"\n(assert-A {a})\n(assert-B {b})\n"


def gen_up(rng, sat):
    m = rng.randint(2, 4)
    r = rng.randrange(m)
    # with a different modulus on the B side, c and d may differ
    m2 = m + 1 if sat else m
    a = f"(and (= y {_lin([('c', m)], r)}) (p c))"
    b = f"(and (= y {_lin([('d', m2)], r)}) (not (p d)))"
    if rng.random() < 0.5:
        a = f"(and {a} {_slack(rng, ['c'])})"
    return _decls(["y", "c", "d"], preds=["p"]) + f"\n(assert-A {a})\n(assert-B {b})\n"


def gen_uf(rng, sat):
    k = rng.randint(-4, 4)
    bump = 0 if sat else 1
    off = rng.randint(0, 2)
    a = f"(and (= (f (+ y {off})) c) (<= c {k}))" if off else f"(and (= (f y) c) (<= c {k}))"
    b = f"(and (= z (+ y {off})) (>= (f z) {k + bump}))"
    return _decls(["y", "z", "c"], funs=["f"]) + f"\n(assert-A {a})\n(assert-B {b})\n"


GENERATORS = {"PA": gen_pa, "UP": gen_up, "UF": gen_uf}


def corpus(n: int, rng: random.Random | None = None, sat: bool = False):
    """``n`` problem texts cycling over the three kinds."""
    rng = rng or seeded_rng()
    return [(KINDS[i % 3], GENERATORS[KINDS[i % 3]](rng, sat)) for i in range(n)]
