"""Rational polyhedral cones with generator and facet descriptions.

A :class:`Cone` stores generators (rays, with a lineality space given as
``+l, -l`` pairs) and/or facet normals ``f`` meaning ``f . x >= 0``.
Conversion between the two uses the incremental double description method:
start from the whole space and cut by one halfspace at a time, keeping only
adjacent ray pairs (algebraic rank test).

All stored vectors are scaled to primitive integer vectors and sorted, so two
runs on the same input produce identical output.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .ratlp import LinearProgram, Status, dot, solve_lp, vec

__all__ = [
    "Cone",
    "ConeError",
    "primitive",
    "rank",
    "dual_description",
    "cone_sum",
    "intersection",
    "contains",
    "contains_by_facets",
    "contains_by_generators",
    "contains_interior",
    "equals",
    "is_full_dimensional",
    "is_salient",
]


class ConeError(ValueError):
    pass


def primitive(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Positive rescaling of ``v`` to a primitive integer vector."""
    v = vec(v)
    if not any(v):
        return v
    den = math.lcm(*(e.denominator for e in v))
    ints = [int(e * den) for e in v]
    g = math.gcd(*ints)
    return tuple(Fraction(i // g) for i in ints)


def _canon(vectors: Iterable[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    out = {primitive(v) for v in vectors}
    out.discard(tuple(Fraction(0) for _ in next(iter(out), ())))
    return tuple(sorted(out))


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    return len(_row_reduce([list(v) for v in vectors]))


def _row_reduce(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Reduced row echelon form; returns the nonzero rows."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    pivot_row = 0
    for c in range(ncols):
        p = next((i for i in range(pivot_row, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[pivot_row], rows[p] = rows[p], rows[pivot_row]
        pr = rows[pivot_row]
        inv = 1 / pr[c]
        pr[:] = [e * inv for e in pr]
        for i in range(len(rows)):
            if i != pivot_row and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return rows[:pivot_row]


@dataclass(frozen=True, eq=False)
class Cone:
    """Polyhedral cone in ``QQ^dim``.

    Build with :meth:`from_generators` or :meth:`from_facets`; the other
    representation is computed eagerly so instances are immutable and can be
    shared freely.
    """

    dim: int
    generators: tuple[tuple[Fraction, ...], ...]
    facets: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_generators(cls, dim: int, generators) -> "Cone":
        gens = _checked(dim, generators)
        facets = _h_from_v(dim, gens)
        return cls(dim, _v_from_h(dim, facets), facets)

    @classmethod
    def from_facets(cls, dim: int, facets) -> "Cone":
        fs = _checked(dim, facets)
        gens = _v_from_h(dim, fs)
        return cls(dim, gens, _h_from_v(dim, gens))

    @classmethod
    def zero(cls, dim: int) -> "Cone":
        return cls.from_generators(dim, [])

    def __repr__(self):
        def fmt(vs):
            return "[" + ", ".join("(" + ",".join(str(e) for e in v) + ")" for v in vs) + "]"

        return f"Cone(dim={self.dim}, generators={fmt(self.generators)}, facets={fmt(self.facets)})"


def _checked(dim, vectors):
    out = []
    for v in vectors:
        v = vec(v)
        if len(v) != dim:
            raise ConeError(f"vector {v} has rank {len(v)}, expected {dim}")
        out.append(v)
    return out


def _h_to_v_raw(dim, inequalities):
    """Double description: rays and lineality basis of {x : a.x >= 0 for a}."""
    lineality = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    rays: list[tuple[Fraction, ...]] = []
    seen: list[tuple[Fraction, ...]] = []
    for a in inequalities:
        if not any(a):
            continue
        hit = next((l for l in lineality if dot(a, l) != 0), None)
        if hit is not None:
            p = hit if dot(a, hit) > 0 else tuple(-e for e in hit)
            ap = dot(a, p)
            new_lin = []
            for l in lineality:
                if l is hit:
                    continue
                al = dot(a, l)
                new_lin.append(tuple(x - (al / ap) * y for x, y in zip(l, p)) if al else l)
            rays = [
                tuple(x - (dot(a, r) / ap) * y for x, y in zip(r, p)) if dot(a, r) else r
                for r in rays
            ]
            rays.append(p)
            lineality = new_lin
            seen.append(a)
            continue
        vals = [dot(a, r) for r in rays]
        pos = [r for r, s in zip(rays, vals) if s > 0]
        zer = [r for r, s in zip(rays, vals) if s == 0]
        neg = [(r, s) for r, s in zip(rays, vals) if s < 0]
        if not neg:
            seen.append(a)
            continue
        target = dim - len(lineality) - 2
        new = []
        for (p, sp), (q, sq) in itertools.product(
            [(r, s) for r, s in zip(rays, vals) if s > 0], neg
        ):
            tight = [b for b in seen if dot(b, p) == 0 and dot(b, q) == 0]
            if rank(tight) == target:
                new.append(tuple(sp * y - sq * x for x, y in zip(p, q)))
        rays = pos + zer + new
        rays = list({primitive(r): None for r in rays})
        seen.append(a)
    return rays, lineality


def _lineality_canon(dim, lineality):
    basis = _row_reduce([list(l) for l in lineality])
    out = []
    for l in basis:
        p = primitive(l)
        out.append(p)
        out.append(tuple(-e for e in p))
    return out


def _v_from_h(dim, facets):
    rays, lin = _h_to_v_raw(dim, facets)
    if lin:
        # rays modulo lineality: project onto the orthogonal complement
        basis = _row_reduce([list(l) for l in lin])
        proj = []
        for r in rays:
            r = list(r)
            for b in _orthonormalish(basis):
                coef = dot(r, b) / dot(b, b)
                r = [x - coef * y for x, y in zip(r, b)]
            if any(r):
                proj.append(tuple(r))
        rays = proj
    return _canon(list(rays) + _lineality_canon(dim, lin))


def _orthonormalish(basis):
    """Gram-Schmidt without normalisation (exact)."""
    out = []
    for b in basis:
        b = list(b)
        for o in out:
            coef = dot(b, o) / dot(o, o)
            b = [x - coef * y for x, y in zip(b, o)]
        if any(b):
            out.append(b)
    return out


def _h_from_v(dim, generators):
    return _v_from_h(dim, generators)


def dual_description(c: Cone) -> Cone:
    """Return ``c`` with both descriptions populated.

    Cones are built complete, so this only re-derives the pair from whichever
    side is canonical; it is idempotent.
    """
    return Cone(c.dim, _v_from_h(c.dim, c.facets), _h_from_v(c.dim, c.generators))


def cone_sum(a: Cone, b: Cone) -> Cone:
    if a.dim != b.dim:
        raise ConeError(f"rank mismatch: {a.dim} vs {b.dim}")
    return Cone.from_generators(a.dim, a.generators + b.generators)


def intersection(cones: Sequence[Cone]) -> Cone:
    dims = {c.dim for c in cones}
    if len(dims) != 1:
        raise ConeError(f"rank mismatch among {sorted(dims)}")
    return Cone.from_facets(dims.pop(), [f for c in cones for f in c.facets])


def _check_point(c: Cone, x):
    x = vec(x)
    if len(x) != c.dim:
        raise ConeError(f"point has rank {len(x)}, cone has rank {c.dim}")
    return x


def contains_by_facets(c: Cone, x) -> bool:
    x = _check_point(c, x)
    return all(dot(f, x) >= 0 for f in c.facets)


def contains_by_generators(c: Cone, x) -> bool:
    """LP route: is ``x`` a nonnegative combination of the generators?"""
    x = _check_point(c, x)
    if not c.generators:
        return not any(x)
    k = len(c.generators)
    rows = [([g[i] for g in c.generators], "=", x[i]) for i in range(c.dim)]
    out = solve_lp(LinearProgram.build([0] * k, rows))
    return out.status is Status.OPTIMAL


def contains(c: Cone, x) -> bool:
    return contains_by_facets(c, x)


def is_full_dimensional(c: Cone) -> bool:
    return rank(c.generators) == c.dim


def is_salient(c: Cone) -> bool:
    return rank(c.facets) == c.dim


def contains_interior(c: Cone, x) -> bool:
    """Strict interior relative to the whole ambient space."""
    x = _check_point(c, x)
    if not is_full_dimensional(c):
        return False
    return all(dot(f, x) > 0 for f in c.facets)


def equals(a: Cone, b: Cone) -> bool:
    if a.dim != b.dim:
        return False
    return all(contains_by_facets(b, g) for g in a.generators) and all(
        contains_by_facets(a, g) for g in b.generators
    )


def is_subset(a: Cone, b: Cone) -> bool:
    return all(contains_by_facets(b, g) for g in a.generators)
