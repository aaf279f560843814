"""Independent reference computations.

Nothing here calls the simplex solver or the double description code: LPs are
solved by enumerating basic solutions, multiplicities by bisection on ``t``
with a separate feasibility test.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def gauss_solve(rows, rhs):
    """Unique solution of a square system, or None when singular."""
    n = len(rows)
    a = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return None
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _feasible(x, ge, eq):
    return all(sum(c * v for c, v in zip(a, x)) >= b for a, b in ge) and all(
        sum(c * v for c, v in zip(a, x)) == b for a, b in eq
    )


def vertices(n, ge, eq):
    """Basic feasible solutions of {x >= 0, a.x >= b (ge), a.x = b (eq)}."""
    bounds = [(tuple(Fraction(int(i == j)) for j in range(n)), Fraction(0)) for i in range(n)]
    ge_all = list(ge) + bounds
    cands = [(tuple(map(Fraction, a)), Fraction(b)) for a, b in list(ge_all) + list(eq)]
    out = set()
    for combo in itertools.combinations(cands, n):
        x = gauss_solve([a for a, _ in combo], [b for _, b in combo])
        if x is not None and _feasible(x, ge_all, eq):
            out.add(tuple(x))
    return sorted(out)


def enumerate_lp(objective, ge, eq=()):
    """Reference answer for ``min c.x`` over nonnegative ``x``.

    Returns ``("infeasible", None)``, ``("unbounded", None)`` or
    ``("optimal", value)``.  Unboundedness is detected by adding the box
    ``sum(x) <= M`` with ``M`` beyond every vertex: the boxed minimum drops
    strictly below the best vertex exactly when an improving ray exists.
    """
    n = len(objective)
    c = [Fraction(v) for v in objective]
    verts = vertices(n, ge, eq)
    if not verts:
        return "infeasible", None
    best = min(sum(a * b for a, b in zip(c, v)) for v in verts)
    big = max(sum(v) for v in verts) + 1
    boxed = vertices(n, list(ge) + [(tuple([-1] * n), -big)], eq)
    boxed_best = min(sum(a * b for a, b in zip(c, v)) for v in boxed)
    if boxed_best < best:
        return "unbounded", None
    return "optimal", best


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in ``[lo, hi]`` (``0 <= lo <= hi``)."""
    c = math.ceil(lo)
    if c <= hi:
        return Fraction(c)
    n = math.floor(lo)
    return n + 1 / simplest_between(1 / (hi - n), 1 / (lo - n))


def curve_feasible(beta, lam, fibers, I, t):
    """Curve base with nef cone {x >= 0}: a linear function of the simplex
    weights is maximised at a vertex, so only the largest degrees matter."""
    J = [j for j in range(len(fibers)) if j not in I]
    top_i = max(fibers[i] for i in I) if I else 0
    top_j = max(fibers[j] for j in J)
    if not I and t != 0:
        return False
    return beta + t * top_i + (lam - t) * top_j >= 0


def general_feasible(beta, lam, fibers, facets, I, t):
    """Feasibility at fixed ``t`` via basic-solution enumeration."""
    r1 = len(fibers)
    J = [j for j in range(r1) if j not in I]
    if not I and t != 0:
        return False
    if t < 0 or t > lam:
        return False
    order = list(I) + J
    eq = []
    if I:
        eq.append(([1 if k < len(I) else 0 for k in range(r1)], t))
    eq.append(([0 if k < len(I) else 1 for k in range(r1)], lam - t))
    ge = []
    for f in facets:
        fb = sum(a * b for a, b in zip(f, beta))
        ge.append(([sum(a * b for a, b in zip(f, fibers[i])) for i in order], -fb))
    return bool(vertices(r1, ge, eq))


def bisect_nu(feasible, lam, steps=80, hi=None):
    """Minimal feasible ``t`` in ``[0, lam]`` by bisection plus exact snapping.

    ``feasible(t)`` must describe an interval.  Returns None when no ``t`` in
    ``[0, lam]`` is feasible.
    """
    lam = Fraction(lam)
    if feasible(Fraction(0)):
        return Fraction(0)
    # the feasible set is an interval [nu, t_max]; find some feasible point
    if hi is None:
        probe = [lam] + [lam * Fraction(k, 64) for k in range(1, 64)]
        hi = next((t for t in probe if feasible(t)), None)
    if hi is None:
        return None
    lo = Fraction(0)
    for _ in range(steps):
        mid = (lo + hi) / 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    cand = simplest_between(lo + Fraction(1, 2 ** (steps + 40)), hi)
    assert feasible(cand), "snapped value not feasible"
    assert not feasible(cand - Fraction(1, 2 ** (steps + 40))), "snapped value not minimal"
    return cand


def curve_psef_by_vertices(beta, lam, fibers):
    """psef on a curve base: some simplex vertex lands in {x >= 0}."""
    return lam >= 0 and any(beta + lam * l >= 0 for l in fibers)


def general_max_t(beta, lam, fibers, facets, I):
    """Largest feasible ``t`` (vertex enumeration over the weights)."""
    r1 = len(fibers)
    order = list(I) + [j for j in range(r1) if j not in I]
    ge = []
    for f in facets:
        fb = sum(a * b for a, b in zip(f, beta))
        ge.append(([sum(a * b for a, b in zip(f, fibers[i])) for i in order], -fb))
    verts = vertices(r1, ge, [([1] * r1, lam)])
    if not verts:
        return None
    return max(sum(v[: len(I)]) for v in verts)
