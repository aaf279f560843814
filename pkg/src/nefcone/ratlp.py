"""Exact rational linear programming.

Every scalar is a :class:`fractions.Fraction`.  The solver is a dense
two-phase tableau simplex with Bland's least-index pivoting, so it always
terminates and always returns the same answer for the same input.  Each
outcome carries a certificate that :func:`verify_certificate` can check by
substitution alone:

* ``OPTIMAL``: a primal point ``x`` and a dual vector ``y`` with equal
  objective values.
* ``INFEASIBLE``: a Farkas vector ``y``.
* ``UNBOUNDED``: a feasible point ``x`` and an improving ray.

The problem form is::

    minimize  c . x
    s.t.      a_i . x >= b_i   or   a_i . x = b_i
              x_j >= 0 for j in the nonneg mask, free otherwise

and its dual::

    maximize  b . y
    s.t.      y_i >= 0 on ">=" rows, y_i free on "=" rows
              (A^T y)_j <= c_j for nonneg x_j, (A^T y)_j = c_j for free x_j
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "RatVector",
    "Relation",
    "Constraint",
    "LinearProgram",
    "Status",
    "LPOutcome",
    "LPStructureError",
    "as_rational",
    "vec",
    "dot",
    "vadd",
    "vsub",
    "vscale",
    "solve_lp",
    "verify_certificate",
]

RatVector = tuple  # tuple[Fraction, ...]; length fixed at construction

ZERO = Fraction(0)
ONE = Fraction(1)


class LPStructureError(ValueError):
    """Malformed problem data (dimension mismatch, bad relation, ...)."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would silently bring binary rounding into an
    exact computation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def vec(values: Iterable) -> RatVector:
    return tuple(as_rational(v) for v in values)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise LPStructureError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), ZERO)


def vadd(a, b) -> RatVector:
    if len(a) != len(b):
        raise LPStructureError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b) -> RatVector:
    if len(a) != len(b):
        raise LPStructureError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a) -> RatVector:
    c = as_rational(c)
    return tuple(c * x for x in a)


class Relation(str, enum.Enum):
    GE = ">="
    EQ = "="


@dataclass(frozen=True)
class Constraint:
    coeffs: RatVector
    relation: Relation
    rhs: Fraction


@dataclass(frozen=True)
class LinearProgram:
    objective: RatVector
    constraints: tuple[Constraint, ...]
    nonneg: tuple[bool, ...]

    @classmethod
    def build(cls, objective, constraints=(), nonneg=None) -> "LinearProgram":
        """Convenience constructor.

        ``constraints`` holds ``(coeffs, relation, rhs)`` triples where the
        relation is ``">="`` or ``"="``.  ``nonneg`` defaults to all True.
        """
        obj = vec(objective)
        rows = []
        for item in constraints:
            if isinstance(item, Constraint):
                rows.append(item)
                continue
            try:
                coeffs, rel, rhs = item
                relation = Relation(rel)
            except ValueError as exc:
                raise LPStructureError(f"bad constraint {item!r}") from exc
            rows.append(Constraint(vec(coeffs), relation, as_rational(rhs)))
        mask = tuple(True for _ in obj) if nonneg is None else tuple(bool(b) for b in nonneg)
        lp = cls(obj, tuple(rows), mask)
        lp.check()
        return lp

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def check(self) -> None:
        n = self.num_vars
        if len(self.nonneg) != n:
            raise LPStructureError(f"nonneg mask has {len(self.nonneg)} entries, expected {n}")
        for i, row in enumerate(self.constraints):
            if len(row.coeffs) != n:
                raise LPStructureError(f"row {i} has {len(row.coeffs)} coefficients, expected {n}")
            if not isinstance(row.relation, Relation):
                raise LPStructureError(f"row {i} has unknown relation {row.relation!r}")

    def to_dict(self) -> dict:
        return {
            "objective": [str(v) for v in self.objective],
            "constraints": [
                {"coeffs": [str(v) for v in r.coeffs], "relation": r.relation.value, "rhs": str(r.rhs)}
                for r in self.constraints
            ],
            "nonneg": list(self.nonneg),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LinearProgram":
        return cls.build(
            data["objective"],
            [(r["coeffs"], r["relation"], r["rhs"]) for r in data["constraints"]],
            data["nonneg"],
        )


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPOutcome:
    status: Status
    value: Fraction | None = None
    x: RatVector | None = None
    y: RatVector | None = None
    ray: RatVector | None = None

    def to_dict(self) -> dict:
        out: dict = {"status": self.status.value}
        if self.value is not None:
            out["value"] = str(self.value)
        for name in ("x", "y", "ray"):
            v = getattr(self, name)
            if v is not None:
                out[name] = [str(e) for e in v]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "LPOutcome":
        def opt(name):
            return vec(data[name]) if name in data else None

        value = as_rational(data["value"]) if "value" in data else None
        return cls(Status(data["status"]), value, opt("x"), opt("y"), opt("ray"))


# --------------------------------------------------------------------------
# tableau simplex


class _Tableau:
    """Dense tableau ``[B^-1 A | B^-1 b]`` with artificial columns kept."""

    def __init__(self, rows, rhs, n_real):
        m = len(rows)
        self.m = m
        self.n_real = n_real
        self.rows = [list(r) + [ONE if k == i else ZERO for k in range(m)] for i, r in enumerate(rows)]
        self.rhs = list(rhs)
        self.basis = [n_real + i for i in range(m)]

    def pivot(self, r, j):
        prow = self.rows[r]
        p = prow[j]
        if p != ONE:
            inv = ONE / p
            self.rows[r] = prow = [v * inv for v in prow]
            self.rhs[r] *= inv
        for k in range(self.m):
            if k == r:
                continue
            f = self.rows[k][j]
            if f:
                row = self.rows[k]
                self.rows[k] = [a - f * b for a, b in zip(row, prow)]
                self.rhs[k] -= f * self.rhs[r]
        self.basis[r] = j

    def reduced_cost(self, cost, j):
        return cost[j] - sum((cost[b] * self.rows[k][j] for k, b in enumerate(self.basis)), ZERO)

    def run(self, cost, allowed):
        """Bland's rule; returns None at optimum or the unbounded column."""
        while True:
            basic = set(self.basis)
            entering = None
            for j in allowed:
                if j not in basic and self.reduced_cost(cost, j) < 0:
                    entering = j
                    break
            if entering is None:
                return None
            leave = None
            best = None
            for k in range(self.m):
                a = self.rows[k][entering]
                if a > 0:
                    ratio = self.rhs[k] / a
                    if best is None or ratio < best or (ratio == best and self.basis[k] < self.basis[leave]):
                        best, leave = ratio, k
            if leave is None:
                return entering
            self.pivot(leave, entering)

    def objective(self, cost):
        return sum((cost[b] * self.rhs[k] for k, b in enumerate(self.basis)), ZERO)

    def duals(self, cost):
        # B^-1 sits in the artificial block
        n = self.n_real
        return [
            sum((cost[b] * self.rows[k][n + i] for k, b in enumerate(self.basis)), ZERO)
            for i in range(self.m)
        ]

    def point(self):
        x = [ZERO] * (self.n_real + self.m)
        for k, b in enumerate(self.basis):
            x[b] = self.rhs[k]
        return x


def solve_lp(lp: LinearProgram) -> LPOutcome:
    """Solve ``lp`` exactly; the outcome always carries a certificate."""
    lp.check()
    n = lp.num_vars
    m = len(lp.constraints)

    # standard-form columns: split free variables, add surplus for ">=" rows
    colmap: list[tuple[int, int] | None] = []
    cost: list[Fraction] = []
    for j in range(n):
        colmap.append((j, 1))
        cost.append(lp.objective[j])
        if not lp.nonneg[j]:
            colmap.append((j, -1))
            cost.append(-lp.objective[j])
    n_struct = len(colmap)
    surplus_of = {}
    for i, row in enumerate(lp.constraints):
        if row.relation is Relation.GE:
            surplus_of[i] = len(colmap)
            colmap.append(None)
            cost.append(ZERO)
    n_real = len(colmap)

    rows, rhs, sign = [], [], []
    for i, row in enumerate(lp.constraints):
        full = []
        for col in colmap[:n_struct]:
            j, s = col
            full.append(row.coeffs[j] if s > 0 else -row.coeffs[j])
        full.extend(ZERO for _ in range(n_real - n_struct))
        if i in surplus_of:
            full[surplus_of[i]] = -ONE
        sg = -1 if row.rhs < 0 else 1
        if sg < 0:
            full = [-v for v in full]
        rows.append(full)
        rhs.append(row.rhs * sg)
        sign.append(sg)

    def to_original(xs):
        x = [ZERO] * n
        for c, col in enumerate(colmap):
            if col is not None and xs[c]:
                j, s = col
                x[j] += xs[c] if s > 0 else -xs[c]
        return tuple(x)

    tab = _Tableau(rows, rhs, n_real)
    phase1 = [ZERO] * n_real + [ONE] * m
    tab.run(phase1, range(n_real + m))
    if tab.objective(phase1) > 0:
        w = tab.duals(phase1)
        y = [sign[i] * w[i] for i in range(m)]
        # scale so the contradiction reads exactly 0 >= 1
        gap = sum((yi * row.rhs for yi, row in zip(y, lp.constraints)), ZERO)
        return LPOutcome(Status.INFEASIBLE, y=tuple(yi / gap for yi in y))

    # drive zero-level artificials out; rows with no real entry are redundant
    for k in range(m):
        if tab.basis[k] >= n_real:
            for j in range(n_real):
                if tab.rows[k][j] != 0:
                    tab.pivot(k, j)
                    break

    phase2 = cost + [ZERO] * m
    col = tab.run(phase2, range(n_real))
    point = tab.point()
    if col is not None:
        direction = [ZERO] * (n_real + m)
        direction[col] = ONE
        for k, b in enumerate(tab.basis):
            direction[b] = -tab.rows[k][col]
        return LPOutcome(Status.UNBOUNDED, x=to_original(point), ray=to_original(direction))

    w = tab.duals(phase2)
    return LPOutcome(
        Status.OPTIMAL,
        value=tab.objective(phase2),
        x=to_original(point),
        y=tuple(sign[i] * w[i] for i in range(m)),
    )


# --------------------------------------------------------------------------
# certificate checking (substitution only)


def _primal_feasible(lp: LinearProgram, x) -> bool:
    for j, nn in enumerate(lp.nonneg):
        if nn and x[j] < 0:
            return False
    for row in lp.constraints:
        lhs = dot(row.coeffs, x)
        if row.relation is Relation.GE and lhs < row.rhs:
            return False
        if row.relation is Relation.EQ and lhs != row.rhs:
            return False
    return True


def _dual_signs_ok(lp: LinearProgram, y) -> bool:
    return all(
        y[i] >= 0 for i, row in enumerate(lp.constraints) if row.relation is Relation.GE
    )


def _transpose_apply(lp: LinearProgram, y) -> list[Fraction]:
    aty = [ZERO] * lp.num_vars
    for yi, row in zip(y, lp.constraints):
        if yi:
            for j, a in enumerate(row.coeffs):
                aty[j] += yi * a
    return aty


def verify_certificate(lp: LinearProgram, out: LPOutcome) -> bool:
    """Check the certificate in ``out`` against ``lp`` without re-solving."""
    try:
        lp.check()
    except LPStructureError:
        return False
    n, m = lp.num_vars, len(lp.constraints)

    def ok_len(v, k):
        return v is not None and len(v) == k and all(isinstance(e, Fraction) for e in v)

    if out.status is Status.OPTIMAL:
        if out.value is None or not ok_len(out.x, n) or not ok_len(out.y, m):
            return False
        if not _primal_feasible(lp, out.x) or dot(lp.objective, out.x) != out.value:
            return False
        if not _dual_signs_ok(lp, out.y):
            return False
        aty = _transpose_apply(lp, out.y)
        for j in range(n):
            if lp.nonneg[j] and aty[j] > lp.objective[j]:
                return False
            if not lp.nonneg[j] and aty[j] != lp.objective[j]:
                return False
        return sum((yi * r.rhs for yi, r in zip(out.y, lp.constraints)), ZERO) == out.value

    if out.status is Status.INFEASIBLE:
        if not ok_len(out.y, m) or not _dual_signs_ok(lp, out.y):
            return False
        aty = _transpose_apply(lp, out.y)
        for j in range(n):
            if lp.nonneg[j] and aty[j] > 0:
                return False
            if not lp.nonneg[j] and aty[j] != 0:
                return False
        return sum((yi * r.rhs for yi, r in zip(out.y, lp.constraints)), ZERO) > 0

    if out.status is Status.UNBOUNDED:
        if not ok_len(out.x, n) or not ok_len(out.ray, n):
            return False
        if not _primal_feasible(lp, out.x):
            return False
        d = out.ray
        for j, nn in enumerate(lp.nonneg):
            if nn and d[j] < 0:
                return False
        for row in lp.constraints:
            ad = dot(row.coeffs, d)
            if row.relation is Relation.GE and ad < 0:
                return False
            if row.relation is Relation.EQ and ad != 0:
                return False
        return dot(lp.objective, d) < 0

    return False
