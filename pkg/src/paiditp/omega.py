"""Integer feasibility of conjunctions of linear constraints (Omega test).

Constraints are pairs ``(coeffs, const)`` with ``coeffs`` a dict from
variable to integer, read as ``sum coeffs[v]*v + const`` compared with 0.
Variables may be any hashable value.  :func:`int_model` returns a
satisfying integer assignment or ``None``.
"""

from __future__ import annotations

import itertools
from math import gcd

from .intmath import solve_integer


def _vkey(v):
    return (not isinstance(v, str), str(v))


def _clean(coeffs):
    return {v: c for v, c in coeffs.items() if c}


def _content(coeffs):
    g = 0
    for c in coeffs.values():
        g = gcd(g, c)
    return g


def _eval(coeffs, const, env):
    return const + sum(c * env.get(v, 0) for v, c in coeffs.items())


class _Fresh:
    def __init__(self):
        self.counter = itertools.count()

    def __call__(self):
        return ("#omega", next(self.counter))


def _normalize_leqs(leqs):
    """Tighten, drop trivial and detect constant contradictions; None on conflict."""
    out = {}
    for coeffs, const in leqs:
        coeffs = _clean(coeffs)
        if not coeffs:
            if const > 0:
                return None
            continue
        g = _content(coeffs)
        coeffs = {v: c // g for v, c in coeffs.items()}
        const = -((-const) // g)
        key = tuple(sorted(coeffs.items(), key=lambda m: _vkey(m[0])))
        # keep only the tightest constant per coefficient vector
        if key not in out or out[key] < const:
            out[key] = const
    # opposite pairs may pin an equality or conflict
    for key, const in out.items():
        negkey = tuple((v, -c) for v, c in key)
        if negkey in out and const + out[negkey] > 0:
            return None
    return [(dict(k), c) for k, c in sorted(out.items(), key=lambda kv: [(_vkey(v), c) for v, c in kv[0]])]


def _solve(eqs, leqs, fresh, depth=0):
    # equalities: eliminate through the integer solution lattice
    eqs = [(_clean(c), k) for c, k in eqs]
    for coeffs, const in eqs:
        if not coeffs and const:
            return None
    eqs = [(c, k) for c, k in eqs if c]
    if eqs:
        vars_ = sorted({v for c, _ in eqs for v in c}, key=_vkey)
        mat = [[c.get(v, 0) for v in vars_] for c, _ in eqs]
        rhs = [-k for _, k in eqs]
        sol = solve_integer(mat, rhs, len(vars_))
        if sol is None:
            return None
        x0, kernel = sol
        params = [fresh() for _ in kernel]
        # v = x0[i] + sum_j kernel[j][i] * param_j
        defs = {}
        for i, v in enumerate(vars_):
            defs[v] = ({params[j]: kernel[j][i] for j in range(len(kernel)) if kernel[j][i]}, x0[i])
        new_leqs = []
        for coeffs, const in leqs:
            nc, nk = {}, const
            for v, c in coeffs.items():
                if v in defs:
                    dc, dk = defs[v]
                    nk += c * dk
                    for p, pc in dc.items():
                        nc[p] = nc.get(p, 0) + c * pc
                else:
                    nc[v] = nc.get(v, 0) + c
            new_leqs.append((nc, nk))
        model = _solve([], new_leqs, fresh, depth + 1)
        if model is None:
            return None
        for v, (dc, dk) in defs.items():
            model[v] = _eval(dc, dk, model)
        return model

    leqs = _normalize_leqs(leqs)
    if leqs is None:
        return None
    if not leqs:
        return {}
    vars_ = sorted({v for c, _ in leqs for v in c}, key=_vkey)

    # a variable bounded on one side only can always be satisfied
    for v in vars_:
        signs = {c[v] > 0 for c, _ in leqs if v in c}
        if len(signs) == 1:
            rest = [(c, k) for c, k in leqs if v not in c]
            model = _solve([], rest, fresh, depth + 1)
            if model is None:
                return None
            _assign(v, [(c, k) for c, k in leqs if v in c], model)
            return model

    # pick the variable whose elimination is exact if possible, else the cheapest
    def cost(v):
        ups = [c[v] for c, _ in leqs if c.get(v, 0) > 0]
        lows = [-c[v] for c, _ in leqs if c.get(v, 0) < 0]
        exact = all(a == 1 for a in ups) or all(b == 1 for b in lows)
        return (not exact, len(ups) * len(lows), _vkey(v))

    x = min(vars_, key=cost)
    uppers = [(c, k) for c, k in leqs if c.get(x, 0) > 0]
    lowers = [(c, k) for c, k in leqs if c.get(x, 0) < 0]
    others = [(c, k) for c, k in leqs if x not in c]
    exact = all(c[x] == 1 for c, _ in uppers) or all(c[x] == -1 for c, _ in lowers)

    def shadow(dark):
        out = list(others)
        for uc, uk in uppers:
            a = uc[x]
            for lc, lk in lowers:
                b = -lc[x]
                nc = {}
                for v, c in uc.items():
                    if v != x:
                        nc[v] = nc.get(v, 0) + b * c
                for v, c in lc.items():
                    if v != x:
                        nc[v] = nc.get(v, 0) + a * c
                nk = b * uk + a * lk + ((a - 1) * (b - 1) if dark else 0)
                out.append((nc, nk))
        return out

    bounds = uppers + lowers
    model = _solve([], shadow(dark=not exact), fresh, depth + 1)
    if model is not None:
        _assign(x, bounds, model)
        return model
    if exact:
        return None
    if _solve([], shadow(dark=False), fresh, depth + 1) is None:
        return None
    # splinters: x sits close to one of its lower bounds
    a_max = max(c[x] for c, _ in uppers)
    for lc, lk in lowers:
        b = -lc[x]
        limit = (a_max * b - a_max - b) // a_max
        for i in range(limit + 1):
            eq = (dict(lc), lk + i)  # -b x + q + i = 0
            model = _solve([eq], leqs, fresh, depth + 1)
            if model is not None:
                return model
    return None


def _assign(x, bounds, model):
    lo, hi = None, None
    for c, k in bounds:
        a = c[x]
        rest = k + sum(cv * model.get(v, 0) for v, cv in c.items() if v != x)
        if a > 0:  # a x <= -rest
            val = (-rest) // a
            hi = val if hi is None else min(hi, val)
        else:  # -a x >= rest
            b = -a
            val = -((-rest) // b)
            lo = val if lo is None else max(lo, val)
    if lo is not None:
        model[x] = lo
    elif hi is not None:
        model[x] = min(hi, 0)
    else:
        model[x] = 0


def int_model(eqs=(), leqs=(), neqs=(), divs=(), ndivs=()):
    """Integer model of ``eqs = 0``, ``leqs <= 0``, ``neqs != 0``, ``k | t``, ``k !| t``.

    ``divs`` and ``ndivs`` hold ``(k, coeffs, const)``.  Returns a dict over
    the input variables or ``None`` when unsatisfiable.
    """
    fresh = _Fresh()
    eqs = [(dict(c), k) for c, k in eqs]
    leqs = [(dict(c), k) for c, k in leqs]
    for m, c, k in divs:
        q = fresh()
        eqs.append(({**{v: -a for v, a in c.items()}, q: m}, -k))
    for m, c, k in ndivs:
        q, r = fresh(), fresh()
        # t = m q + r, 1 <= r <= m-1
        eqs.append(({**c, q: -m, r: -1}, k))
        leqs.append(({r: -1}, 1))
        leqs.append(({r: 1}, -(m - 1)))
    user_vars = set()
    for group in (eqs, leqs):
        for c, _ in group:
            user_vars |= {v for v in c if not (isinstance(v, tuple) and v and v[0] == "#omega")}
    for c, _ in neqs:
        user_vars |= set(c)
    model = _split_neqs(eqs, leqs, [(dict(c), k) for c, k in neqs], fresh)
    if model is None:
        return None
    return {v: model.get(v, 0) for v in user_vars}


def _split_neqs(eqs, leqs, neqs, fresh):
    model = _solve(eqs, leqs, fresh)
    if model is None:
        return None
    for i, (c, k) in enumerate(neqs):
        if _eval(c, k, model) == 0:
            rest = neqs[:i] + neqs[i + 1:]
            below = (c, k + 1)  # t + 1 <= 0
            above = ({v: -a for v, a in c.items()}, -k + 1)  # -t + 1 <= 0
            for extra in (below, above):
                m = _split_neqs(eqs, leqs + [extra], rest, fresh)
                if m is not None:
                    return m
            return None
    return model
