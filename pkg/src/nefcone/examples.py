"""Worked split-bundle examples with machine-checkable expectations.

Each constructor returns an :class:`ExampleInstance` whose expectations can be
re-evaluated with :func:`verify_expectations`.  Expected numbers are closed
forms in the constructor parameters; the test-suite checks them against
independent oracles (vertex enumeration, bisection over ``t``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import bundle_model as bm
from . import polycone
from .bundle_model import BaseGeometry, BundleClass, BundleModel, Stratum
from .polycone import Cone
from .ratlp import as_rational

__all__ = [
    "Expectation",
    "ExampleInstance",
    "CheckResult",
    "model_m1",
    "model_m2",
    "build_hierarchy",
    "build_remark8",
    "build_albanese",
    "build_no_zariski_3fold",
    "verify_expectations",
    "REGISTRY",
    "build_named",
]


@dataclass(frozen=True)
class Expectation:
    """One assertion about an instance.

    ``kind`` is one of ``psef``, ``nef``, ``big``, ``nef_codim``, ``nu``,
    ``zariski``, ``in_cone``, ``cone_relation``, ``difference_psef``.
    """

    kind: str
    target: str = ""
    args: tuple = ()
    expected: Any = None
    source: str = "derived"

    def describe(self) -> str:
        bits = [self.kind]
        if self.target:
            bits.append(self.target)
        if self.args:
            bits.append(",".join(str(a) for a in self.args))
        return " ".join(bits)


@dataclass
class ExampleInstance:
    name: str
    model: BundleModel
    classes: dict[str, BundleClass]
    expectations: list[Expectation] = field(default_factory=list)
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CheckResult:
    expectation: Expectation
    passed: bool
    computed: Any

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (
            f"[{mark}] {self.expectation.describe()}: "
            f"computed={_fmt(self.computed)} expected={_fmt(self.expectation.expected)}"
        )


def _fmt(value) -> str:
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(_fmt(v) for v in value) + ")"
    if isinstance(value, bm.MultStatus):
        return value.value
    return str(value)


def model_m1() -> BundleModel:
    """Curve base, fibers of degree 0, 2, 2 (a threefold)."""
    return BundleModel(BaseGeometry.curve(), [(0,), (2,), (2,)])


def model_m2() -> BundleModel:
    """Curve base, fibers of degree 0, 2 (a surface)."""
    return BundleModel(BaseGeometry.curve(), [(0,), (2,)])


def build_hierarchy(k: int, a=2, b=-1) -> ExampleInstance:
    """P(O + O(A) + ... + O(A)) with k+1 copies of an ample A of degree ``a``
    over a curve, and the class ``pi^* b + h``.

    For ``-a <= b < 0`` the class is nef in codimension ``k`` but not in
    codimension ``k+1``; ``b = 0`` gives a nef class.
    """
    a, b = as_rational(a), as_rational(b)
    if k < 1:
        raise ValueError("k must be at least 1")
    if a <= 0:
        raise ValueError("ample degree a must be positive")
    if b > 0 or b + a < 0:
        raise ValueError("need -a <= b <= 0")
    model = BundleModel(BaseGeometry.curve(), [(0,)] + [(a,)] * (k + 1))
    alpha = BundleClass((b,), 1)
    deepest = Stratum(tuple(range(1, k + 2)))
    nef = b == 0
    ex = [
        Expectation("psef", "alpha", expected=True),
        Expectation("nef", "alpha", expected=nef),
        Expectation("big", "alpha", expected=b + a > 0),
        Expectation("nef_codim", "alpha", expected=model.n if nef else k),
        Expectation("nu", "alpha", deepest.indices, -b / a),
    ]
    ex += [Expectation("nu", "alpha", s.indices, Fraction(0)) for s in model.strata(1, k)]
    if not nef:
        ex += [
            Expectation("in_cone", "alpha", (k,), True),
            Expectation("in_cone", "alpha", (k + 1,), False),
            Expectation("cone_relation", "", (k, k + 1), "strict_superset"),
        ]
    return ExampleInstance(
        f"hierarchy-{k}", model, {"alpha": alpha}, ex, {"k": k, "a": a, "b": b}
    )


REMARK8_T0 = Fraction(2)


def build_remark8(t=Fraction(3, 2)) -> ExampleInstance:
    """Rank-2 base with first-quadrant nef cone, X = P(A_1 + A_2).

    ``A_1 = (1, 1)``, ``A_2 = (2, 1)``, ``beta = (-2, 0)``; the threshold
    ``t0 = min{t : beta + t*A_1 nef}`` equals 2.  For ``1 < t < 2`` the class
    ``pi^* beta + t h`` is big and not nef in codimension 1, while
    ``pi^* beta + t0 h`` is nef.
    """
    t = as_rational(t)
    t0 = REMARK8_T0
    if not 0 < t <= t0:
        raise ValueError(f"t must lie in (0, {t0}]")
    base = BaseGeometry(2, 2, Cone.from_generators(2, [(1, 0), (0, 1)]))
    model = BundleModel(base, [(1, 1), (2, 1)])
    beta = (-2, 0)
    alpha = BundleClass(beta, t)
    alpha0 = BundleClass(beta, t0)
    h = BundleClass((0, 0), 1)
    classes = {"alpha": alpha, "alpha_t0": alpha0, "h": h}
    ex = [
        Expectation("nef", "alpha_t0", expected=True),
        Expectation("nu", "alpha_t0", (0,), Fraction(0)),
        Expectation("nu", "alpha_t0", (1,), Fraction(0)),
        Expectation("psef", "h", expected=True),
        Expectation("difference_psef", "alpha_t0", ("alpha", "h"), t0 - t),
    ]
    if t < t0:
        ex.append(Expectation("nef", "alpha", expected=False))
        ex.append(Expectation("psef", "alpha", expected=t >= 1))
        ex.append(Expectation("big", "alpha", expected=t > 1))
        if t >= 1:
            # beta + u*A_2 + (t-u)*A_1 has first coordinate t - 2 + u
            ex += [
                Expectation("nu", "alpha", (0,), Fraction(0)),
                Expectation("nu", "alpha", (1,), t0 - t),
                Expectation("nef_codim", "alpha", expected=0),
            ]
    return ExampleInstance("remark8", model, classes, ex, {"t": t})


def build_albanese(g: int = 2, p: int = 1, q: int = 5) -> ExampleInstance:
    """P(A^p + A^-q) over a genus ``g`` curve, ``A`` of degree 1.

    The anticanonical class is big and its multiplicity along the section
    paired with ``A^p`` is ``1 + (2g-2)/(p+q)``.
    """
    if g < 2 or p < 1 or q <= p:
        raise ValueError("need g >= 2, p >= 1 and q > p")
    if p + q <= 2 * g - 2:
        raise ValueError("need p + q > 2g - 2 for a big anticanonical class")
    model = BundleModel(BaseGeometry.curve(genus=g), [(p,), (-q,)])
    minus_k = bm.anticanonical(model)
    nu = 1 + Fraction(2 * g - 2, p + q)
    ex = [
        Expectation("psef", "anticanonical", expected=True),
        Expectation("big", "anticanonical", expected=True),
        Expectation("nu", "anticanonical", (0,), nu),
        Expectation("nu", "anticanonical", (1,), Fraction(0)),
        Expectation("nef_codim", "anticanonical", expected=0),
    ]
    return ExampleInstance(
        f"albanese-{g}-{p}-{q}", model, {"anticanonical": minus_k}, ex, {"g": g, "p": p, "q": q}
    )


def build_no_zariski_3fold() -> ExampleInstance:
    """Threefold where the divisorial decomposition has zero negative part
    but the class is not nef."""
    inst = build_hierarchy(1, 2, -1)
    inst.name = "no-zariski-3fold"
    inst.expectations += [
        Expectation("zariski", "alpha", ("coefficients",), (Fraction(0),) * 3),
        Expectation("zariski", "alpha", ("projection_is_alpha",), True),
        Expectation("zariski", "alpha", ("projection_nef",), False),
    ]
    return inst


def _check(inst: ExampleInstance, e: Expectation) -> CheckResult:
    m = inst.model
    alpha = inst.classes.get(e.target)
    if e.kind == "psef":
        got = bool(bm.is_psef(m, alpha))
    elif e.kind == "nef":
        got = bm.is_nef(m, alpha)
    elif e.kind == "big":
        got = bm.is_big(m, alpha)
    elif e.kind == "nef_codim":
        got = bm.nef_codim(m, alpha)
    elif e.kind == "nu":
        res = bm.min_multiplicity(m, alpha, Stratum(tuple(e.args)))
        got = res.nu if res.is_value else res.status
    elif e.kind == "zariski":
        z = bm.zariski(m, alpha)
        what = e.args[0]
        if what == "coefficients":
            got = z.coefficients
        elif what == "projection_is_alpha":
            got = z.projection == alpha
        elif what == "projection_nef":
            got = bm.is_nef(m, z.projection)
        else:
            raise ValueError(f"unknown zariski check {what!r}")
    elif e.kind == "in_cone":
        got = polycone.contains(bm.positivity_cone(m, e.args[0]), alpha.coords)
    elif e.kind == "cone_relation":
        hi, lo = (bm.positivity_cone(m, k) for k in e.args)
        if polycone.equals(hi, lo):
            got = "equal"
        elif polycone.is_subset(lo, hi):
            got = "strict_superset"
        else:
            got = "other"
    elif e.kind == "difference_psef":
        # target - args[0] == expected * args[1], with args[1] psef
        lhs = alpha - inst.classes[e.args[0]]
        other = inst.classes[e.args[1]]
        if lhs == other.scale(e.expected) and bm.is_psef(m, other):
            got = e.expected
        else:
            got = None
    else:
        raise ValueError(f"unknown expectation kind {e.kind!r}")
    return CheckResult(e, got == e.expected, got)


def verify_expectations(inst: ExampleInstance) -> list[CheckResult]:
    return [_check(inst, e) for e in inst.expectations]


REGISTRY = {
    "hierarchy": build_hierarchy,
    "remark8": build_remark8,
    "albanese": build_albanese,
    "no-zariski-3fold": build_no_zariski_3fold,
    "m1": lambda: build_hierarchy(1, 2, -1),
}


def build_named(name: str, **params) -> ExampleInstance:
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {sorted(REGISTRY)}") from None
    if name == "hierarchy" and "k" not in params:
        params["k"] = 1
    return factory(**params)
