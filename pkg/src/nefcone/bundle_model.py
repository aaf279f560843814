"""Positivity of classes on a split projective bundle X = P(L_0 + ... + L_r).

The base Y has a polyhedral nef cone equal to its psef cone.  Classes on X
are written ``alpha = pi^* beta + lam * h`` with ``h`` the tautological
class; the divisor ``D_i`` cut out by dropping ``L_i`` has class
``d_i = h - l_i``, i.e. ``(-l_i, 1)`` in ``(beta, lam)`` coordinates.

For an index set ``I`` (a proper subset of ``{0..r}``) with complement ``J``
the stratum ``V_I`` is the intersection of the ``D_i``, ``i in I``.  Its
generic minimal multiplicity is

    min { t >= 0 : (beta + t*conv(l_I) + (lam - t)*conv(l_J)) meets Nef(Y) }

which is bilinear in ``t`` and the simplex weights.  Writing ``u_i = t*a_i``
and ``v_j = (lam - t)*b_j`` turns it into the linear program

    minimize sum(u)  s.t.  u, v >= 0,  sum(u) + sum(v) = lam,
                           beta + sum(u_i l_i) + sum(v_j l_j) in Nef(Y)

solved exactly by :mod:`nefcone.ratlp`.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import polycone
from .polycone import Cone
from .ratlp import (
    LinearProgram,
    LPOutcome,
    Status,
    as_rational,
    dot,
    solve_lp,
    vadd,
    vec,
    vscale,
    vsub,
)

__all__ = [
    "ModelError",
    "NotPsefError",
    "BaseGeometry",
    "BundleModel",
    "BundleClass",
    "Stratum",
    "MultStatus",
    "NOT_PSEF",
    "MultiplicityResult",
    "PsefResult",
    "ZariskiDecomposition",
    "is_psef",
    "is_nef",
    "is_big",
    "min_multiplicity",
    "nef_codim",
    "zariski",
    "non_nef_table",
    "non_nef_locus",
    "positivity_cone",
    "anticanonical",
    "top_degree",
    "multiplicity_lp",
]

ZERO = Fraction(0)


class ModelError(ValueError):
    """A model or query violates a structural precondition."""


class NotPsefError(ValueError):
    """Raised by queries that require a pseudo-effective class."""


@dataclass(frozen=True, eq=False)
class BaseGeometry:
    rank: int
    dim: int
    nef_cone: Cone
    nef_equals_psef: bool = True
    canonical: tuple | None = None

    def __post_init__(self):
        if self.rank < 1 or self.dim < 1:
            raise ModelError("base rank and dimension must be positive")
        if self.nef_cone.dim != self.rank:
            raise ModelError(f"nef cone has rank {self.nef_cone.dim}, base rank is {self.rank}")
        if not self.nef_equals_psef:
            raise ModelError("nef_equals_psef: the base nef cone must equal its psef cone")
        if not polycone.is_salient(self.nef_cone):
            raise ModelError("nef cone not salient: it contains a line")
        if not polycone.is_full_dimensional(self.nef_cone):
            raise ModelError("nef cone not full-dimensional")
        if self.canonical is not None:
            object.__setattr__(self, "canonical", vec(self.canonical))
            if len(self.canonical) != self.rank:
                raise ModelError("canonical class has the wrong rank")

    @property
    def is_curve(self) -> bool:
        """Rank one curve base: classes are identified with their degree."""
        return self.rank == 1 and self.dim == 1

    @classmethod
    def curve(cls, genus: int | None = None) -> "BaseGeometry":
        canonical = None if genus is None else (2 * genus - 2,)
        return cls(1, 1, Cone.from_generators(1, [(1,)]), True, canonical)


@dataclass(frozen=True)
class BundleClass:
    beta: tuple
    lam: Fraction

    def __post_init__(self):
        object.__setattr__(self, "beta", vec(self.beta))
        object.__setattr__(self, "lam", as_rational(self.lam))

    @property
    def coords(self) -> tuple:
        return self.beta + (self.lam,)

    @classmethod
    def from_coords(cls, coords) -> "BundleClass":
        coords = vec(coords)
        return cls(coords[:-1], coords[-1])

    def __add__(self, other: "BundleClass") -> "BundleClass":
        return BundleClass(vadd(self.beta, other.beta), self.lam + other.lam)

    def __sub__(self, other: "BundleClass") -> "BundleClass":
        return BundleClass(vsub(self.beta, other.beta), self.lam - other.lam)

    def scale(self, c) -> "BundleClass":
        c = as_rational(c)
        return BundleClass(vscale(c, self.beta), c * self.lam)

    def __str__(self):
        return "(" + ", ".join(str(e) for e in self.coords) + ")"


@dataclass(frozen=True, order=True)
class Stratum:
    """Index set ``I``; ``V_I`` is the intersection of ``D_i`` for ``i in I``."""

    indices: tuple[int, ...] = ()

    def __post_init__(self):
        idx = tuple(self.indices)
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ModelError(f"stratum indices must be strictly increasing: {idx}")
        object.__setattr__(self, "indices", idx)

    @property
    def codim(self) -> int:
        return len(self.indices)

    def complement(self, r: int) -> tuple[int, ...]:
        return tuple(j for j in range(r + 1) if j not in self.indices)

    def sort_key(self):
        return (len(self.indices), self.indices)

    def label(self) -> str:
        return ",".join(str(i) for i in self.indices) or "-"

    @classmethod
    def parse(cls, text: str) -> "Stratum":
        text = text.strip()
        if text in ("", "-"):
            return cls(())
        return cls(tuple(sorted(int(t) for t in text.split(","))))


@dataclass(frozen=True, eq=False)
class BundleModel:
    base: BaseGeometry
    fibers: tuple

    def __post_init__(self):
        fibers = tuple(vec(l) for l in self.fibers)
        if not fibers:
            raise ModelError("need at least one fiber line bundle (r >= 0)")
        for l in fibers:
            if len(l) != self.base.rank:
                raise ModelError(f"fiber class {l} has rank {len(l)}, base rank is {self.base.rank}")
        object.__setattr__(self, "fibers", fibers)

    @property
    def r(self) -> int:
        return len(self.fibers) - 1

    @property
    def n(self) -> int:
        """Dimension of X."""
        return self.base.dim + self.r

    @property
    def class_rank(self) -> int:
        return self.base.rank + 1

    def divisor(self, i: int) -> BundleClass:
        """Class of ``D_i``: ``h - l_i``."""
        return BundleClass(tuple(-e for e in self.fibers[i]), 1)

    def check_class(self, alpha: BundleClass) -> None:
        if len(alpha.beta) != self.base.rank:
            raise ModelError(f"class has base rank {len(alpha.beta)}, model has {self.base.rank}")

    def check_stratum(self, s: Stratum) -> None:
        if any(i < 0 or i > self.r for i in s.indices):
            raise ModelError(f"stratum {s.indices} has indices outside 0..{self.r}")
        if len(s.indices) == self.r + 1:
            raise ModelError("stratum index set must be a proper subset (all D_i have empty intersection)")

    def strata(self, min_codim: int = 1, max_codim: int | None = None) -> list[Stratum]:
        """Proper index sets by increasing size, lexicographic within a size."""
        top = self.r if max_codim is None else min(max_codim, self.r)
        return [
            Stratum(c)
            for k in range(min_codim, top + 1)
            for c in itertools.combinations(range(self.r + 1), k)
        ]

    def _lifted(self, indices) -> Cone:
        """``(Nef(Y) x 0) + cone{(-l_j, 1) : j in indices}``."""
        gens = [g + (ZERO,) for g in self.base.nef_cone.generators]
        gens += [self.divisor(j).coords for j in indices]
        return Cone.from_generators(self.class_rank, gens)

    @cached_property
    def psef_cone(self) -> Cone:
        return self._lifted(range(self.r + 1))

    @cached_property
    def nef_cone(self) -> Cone:
        rows = [(0,) * self.base.rank + (1,)]
        for l in self.fibers:
            for f in self.base.nef_cone.facets:
                rows.append(tuple(f) + (dot(f, l),))
        return Cone.from_facets(self.class_rank, rows)


class MultStatus(str, enum.Enum):
    VALUE = "value"
    NOT_PSEF = "not_psef"


NOT_PSEF = MultStatus.NOT_PSEF


@dataclass(frozen=True)
class MultiplicityResult:
    status: MultStatus
    stratum: Stratum
    lp: LinearProgram
    outcome: LPOutcome
    nu: Fraction | None = None
    u: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)
    nef_point: tuple | None = None

    @property
    def is_value(self) -> bool:
        return self.status is MultStatus.VALUE


@dataclass(frozen=True)
class PsefResult:
    psef: bool
    lp: LinearProgram
    outcome: LPOutcome
    weights: tuple | None = None
    nef_point: tuple | None = None

    def __bool__(self):
        return self.psef


@dataclass(frozen=True)
class ZariskiDecomposition:
    coefficients: tuple
    negative: BundleClass
    projection: BundleClass


def multiplicity_lp(m: BundleModel, alpha: BundleClass, s: Stratum) -> tuple[LinearProgram, list[int]]:
    """LP for the minimal multiplicity along ``V_I``.

    Variables follow the returned order: ``I`` first, then ``J``.
    """
    m.check_class(alpha)
    m.check_stratum(s)
    order = list(s.indices) + list(s.complement(m.r))
    k = len(s.indices)
    objective = [1] * k + [0] * (len(order) - k)
    rows = [([1] * len(order), "=", alpha.lam)]
    for f in m.base.nef_cone.facets:
        rows.append(([dot(f, m.fibers[i]) for i in order], ">=", -dot(f, alpha.beta)))
    return LinearProgram.build(objective, rows), order


def min_multiplicity(m: BundleModel, alpha: BundleClass, s: Stratum | Sequence[int]) -> MultiplicityResult:
    if not isinstance(s, Stratum):
        s = Stratum(tuple(s))
    lp, order = multiplicity_lp(m, alpha, s)
    out = solve_lp(lp)
    if out.status is Status.INFEASIBLE:
        return MultiplicityResult(MultStatus.NOT_PSEF, s, lp, out)
    # objective is bounded below by 0, so the LP is never unbounded
    assert out.status is Status.OPTIMAL
    k = len(s.indices)
    weights = dict(zip(order, out.x))
    point = alpha.beta
    for i, w in weights.items():
        if w:
            point = vadd(point, vscale(w, m.fibers[i]))
    return MultiplicityResult(
        MultStatus.VALUE,
        s,
        lp,
        out,
        nu=out.value,
        u={i: weights[i] for i in order[:k]},
        v={j: weights[j] for j in order[k:]},
        nef_point=point,
    )


def is_psef(m: BundleModel, alpha: BundleClass) -> PsefResult:
    """Does ``beta + lam*conv(l_0..l_r)`` meet the base nef cone (with lam >= 0)?"""
    res = min_multiplicity(m, alpha, Stratum(()))
    if not res.is_value:
        return PsefResult(False, res.lp, res.outcome)
    # prefer a single vertex of the weight simplex when one works
    for i, l in enumerate(m.fibers):
        point = vadd(alpha.beta, vscale(alpha.lam, l))
        if polycone.contains_by_facets(m.base.nef_cone, point):
            weights = tuple(Fraction(int(j == i)) for j in range(m.r + 1))
            return PsefResult(True, res.lp, res.outcome, weights, point)
    weights = tuple(res.v[j] / alpha.lam for j in range(m.r + 1))
    return PsefResult(True, res.lp, res.outcome, weights, res.nef_point)


def nef_violation(m: BundleModel, alpha: BundleClass):
    """First ``(i, facet)`` with ``facet . (beta + lam*l_i) < 0``, or None."""
    for i, l in enumerate(m.fibers):
        point = vadd(alpha.beta, vscale(alpha.lam, l))
        for f in m.base.nef_cone.facets:
            if dot(f, point) < 0:
                return i, f
    return None


def is_nef(m: BundleModel, alpha: BundleClass) -> bool:
    m.check_class(alpha)
    return alpha.lam >= 0 and nef_violation(m, alpha) is None


def is_big(m: BundleModel, alpha: BundleClass) -> bool:
    m.check_class(alpha)
    return polycone.contains_interior(m.psef_cone, alpha.coords)


def nef_codim(m: BundleModel, alpha: BundleClass) -> int | MultStatus:
    """Largest ``k`` with ``alpha`` nef in codimension ``k``; ``n`` when nef."""
    if not is_psef(m, alpha):
        return NOT_PSEF
    for s in m.strata():
        if min_multiplicity(m, alpha, s).nu > 0:
            return s.codim - 1
    return m.n


def non_nef_table(m: BundleModel, alpha: BundleClass) -> dict[Stratum, Fraction]:
    if not is_psef(m, alpha):
        raise NotPsefError(f"class {alpha} is not pseudo-effective")
    return {s: min_multiplicity(m, alpha, s).nu for s in m.strata()}


def non_nef_locus(m: BundleModel, alpha: BundleClass) -> list[Stratum]:
    return [s for s, nu in non_nef_table(m, alpha).items() if nu > 0]


def zariski(m: BundleModel, alpha: BundleClass) -> ZariskiDecomposition:
    coeffs = []
    for i in range(m.r + 1):
        res = min_multiplicity(m, alpha, Stratum((i,)))
        if not res.is_value:
            raise NotPsefError(f"class {alpha} is not pseudo-effective")
        coeffs.append(res.nu)
    negative = BundleClass((ZERO,) * m.base.rank, ZERO)
    for i, nu in enumerate(coeffs):
        if nu:
            negative = negative + m.divisor(i).scale(nu)
    return ZariskiDecomposition(tuple(coeffs), negative, alpha - negative)


def positivity_cone(m: BundleModel, k: int) -> Cone:
    """Cone of classes nef in codimension ``k`` (``k=0`` psef, ``k=n`` nef)."""
    if not 0 <= k <= m.n:
        raise ModelError(f"codimension {k} outside 0..{m.n}")
    pieces = [m.psef_cone]
    for s in m.strata(1, k):
        pieces.append(m._lifted(s.complement(m.r)))
    if len(pieces) == 1:
        return m.psef_cone
    return polycone.intersection(pieces)


def anticanonical(m: BundleModel) -> BundleClass:
    if m.base.canonical is None:
        raise ModelError("base canonical class not given")
    beta = tuple(-e for e in m.base.canonical)
    for l in m.fibers:
        beta = vsub(beta, l)
    return BundleClass(beta, m.r + 1)


def top_degree(m: BundleModel, alpha: BundleClass) -> Fraction:
    """Self-intersection ``alpha^n`` over a curve base."""
    if not m.base.is_curve:
        raise ModelError("top_degree needs a curve base (rank 1, dimension 1)")
    m.check_class(alpha)
    lam, b = alpha.lam, alpha.beta[0]
    r = m.r
    return lam ** (r + 1) * sum(l[0] for l in m.fibers) + (r + 1) * lam**r * b
