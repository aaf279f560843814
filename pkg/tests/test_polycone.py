import random
from fractions import Fraction

import pytest

from nefcone.examples import model_m1
from nefcone.polycone import (
    Cone,
    ConeError,
    cone_sum,
    contains,
    contains_by_facets,
    contains_by_generators,
    contains_interior,
    dual_description,
    equals,
    is_full_dimensional,
    is_salient,
    rank,
)

F = Fraction
QUAD = Cone.from_generators(2, [(1, 0), (0, 1)])
WEDGE = Cone.from_facets(2, [(0, 1), (1, 2)])  # lam >= 0, beta + 2 lam >= 0


def test_orthant_is_self_dual():
    assert QUAD.facets == ((0, 1), (1, 0))


def test_two_rays_facets():
    c = Cone.from_generators(2, [(1, 0), (-2, 1)])
    # cross products of adjacent rays: (1,0) -> (0,1); (-2,1) -> (1,2)
    assert set(c.facets) == {(0, 1), (1, 2)}
    assert equals(c, WEDGE)


def test_whole_plane():
    c = Cone.from_facets(2, [])
    assert set(c.generators) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert not is_salient(c)


def test_dual_description_idempotent():
    c = Cone.from_generators(3, [(1, 0, 0), (0, 1, 0), (-1, -1, 1), (-2, -1, 1)])
    d = dual_description(c)
    assert d.generators == c.generators and d.facets == c.facets
    assert dual_description(d).facets == d.facets


def test_sum():
    a = Cone.from_generators(2, [(1, 0)])
    b = Cone.from_generators(2, [(0, 1), (-2, 1)])
    s = cone_sum(a, b)
    assert equals(s, Cone.from_generators(2, [(1, 0), (-2, 1)]))
    assert equals(cone_sum(s, Cone.zero(2)), s)
    assert equals(cone_sum(s, s), s)
    assert equals(cone_sum(a, b), cone_sum(b, a))


def test_contains_examples():
    assert contains(QUAD, (1, 1))
    assert contains(WEDGE, (-1, 1))
    assert not contains(WEDGE, (-3, 1))
    for c in (QUAD, WEDGE, Cone.from_facets(2, [])):
        assert contains(c, (0, 0))
        assert contains_by_generators(c, (0, 0))


def test_contains_interior_examples():
    assert contains_interior(WEDGE, (-1, 1))
    assert not contains_interior(WEDGE, (-2, 1))
    assert not contains_interior(WEDGE, (1, 0))
    ray = Cone.from_generators(2, [(1, 0)])
    assert not contains_interior(ray, (1, 0))


def test_equals_examples():
    assert equals(QUAD, Cone.from_facets(2, [(1, 0), (0, 1)]))
    m = model_m1()
    assert not equals(m.psef_cone, m.nef_cone)
    assert contains(m.psef_cone, (-2, 1)) and not contains(m.nef_cone, (-2, 1))


def test_rank_errors():
    with pytest.raises(ConeError):
        Cone.from_generators(2, [(1, 0, 0)])
    with pytest.raises(ConeError):
        cone_sum(QUAD, Cone.zero(3))
    with pytest.raises(ConeError):
        contains(QUAD, (1, 2, 3))


def test_lower_dimensional_cone():
    c = Cone.from_generators(3, [(1, 0, 0), (0, 1, 0)])
    assert not is_full_dimensional(c)
    assert contains(c, (2, 3, 0)) and not contains(c, (2, 3, 1))
    assert not contains_interior(c, (1, 1, 0))


def _random_cone(rng):
    d = rng.randint(1, 5)
    k = rng.randint(1, 6)
    gens = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(k)]
    if rng.random() < 0.5:
        return Cone.from_generators(d, gens), gens, "v"
    return Cone.from_facets(d, gens), gens, "h"


def _is_facet_of(f, gens, d):
    """Independent facet test: valid inequality, tight on d-1 independent rays."""
    if any(sum(a * b for a, b in zip(f, g)) < 0 for g in gens):
        return False
    tight = [g for g in gens if sum(a * b for a, b in zip(f, g)) == 0]
    return rank(tight) == rank(gens) - 1


def test_random_roundtrip_and_membership():
    rng = random.Random(7)
    for _ in range(60):
        c, raw, kind = _random_cone(rng)
        again = Cone.from_facets(c.dim, c.facets)
        assert equals(c, again)
        if kind == "v":
            assert all(contains(c, g) for g in raw)
            if is_salient(c) and is_full_dimensional(c):
                assert all(_is_facet_of(f, raw, c.dim) for f in c.facets)
        else:
            assert all(sum(a * b for a, b in zip(f, g)) >= 0 for f in raw for g in c.generators)
        for _ in range(8):
            x = tuple(F(rng.randint(-4, 4)) for _ in range(c.dim))
            assert contains_by_facets(c, x) == contains_by_generators(c, x)
            if contains_interior(c, x):
                assert contains(c, x)


def test_extreme_rays_not_interior():
    c = Cone.from_generators(3, [(1, 0, 0), (0, 1, 0), (-1, -1, 1), (-2, -1, 1)])
    for g in c.generators:
        assert not contains_interior(c, g)
