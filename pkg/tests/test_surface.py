import random

import pytest
from hypothesis import given, strategies as st

from symstab import surface as sf
from symstab.errors import DegreeNotZero
from symstab.surface import FIBER, SECTION, NumClass, SurfaceContext

ints = st.integers(-40, 40)
classes = st.builds(NumClass, ints, ints)


def test_basic_numbers():
    ctx = SurfaceContext(2, 0)
    assert sf.intersect(ctx, FIBER, FIBER) == 0
    assert sf.intersect(ctx, SECTION, FIBER) == 1
    assert sf.selfint(SurfaceContext(2, 3), NumClass(2, 1)) == 4 * 3 + 4


@given(ints, classes, classes, classes, st.integers(-5, 5))
def test_symmetric_bilinear(e, d1, d2, d3, t):
    ctx = SurfaceContext(3, e)
    assert sf.intersect(ctx, d1, d2) == sf.intersect(ctx, d2, d1)
    assert sf.intersect(ctx, d1 + d2 * t, d3) == sf.intersect(ctx, d1, d3) + t * sf.intersect(ctx, d2, d3)


def test_selfint_formula_random():
    rng = random.Random(11)
    for _ in range(200):
        k, b, e = rng.randrange(-20, 21), rng.randrange(-20, 21), rng.randrange(-20, 21)
        assert sf.selfint(SurfaceContext(2, e), NumClass(k, b)) == k * k * e + 2 * k * b


@pytest.mark.parametrize("k, b, expected", [(2, 0, True), (3, 1, False), (6, 0, True)])
def test_zero_selfint_condition(k, b, expected):
    assert sf.ksection_zero_selfint_condition(SurfaceContext(2, 0), k, b) is expected


def test_zero_selfint_needs_degree_zero():
    with pytest.raises(DegreeNotZero):
        sf.ksection_zero_selfint_condition(SurfaceContext(2, 1), 2, 0)
    with pytest.raises(DegreeNotZero):
        sf.relative_canonical_triviality(SurfaceContext(2, 1), 2, 0)


@pytest.mark.parametrize("g, k, expected", [(2, 2, 3), (5, 1, 5), (2, 6, 7)])
def test_ksection_genus(g, k, expected):
    assert sf.ksection_genus(g, k) == expected


def test_genus_matches_adjunction():
    for g in range(2, 7):
        ctx = SurfaceContext(g, 0)
        for k in range(1, 13):
            assert sf.adjunction_genus(ctx, NumClass(k, 0)) == sf.ksection_genus(g, k)


def test_canonical_class_square():
    for g in range(2, 6):
        for e in range(-4, 5):
            ctx = SurfaceContext(g, e)
            assert sf.intersect(ctx, ctx.canonical(), ctx.canonical()) == 8 * (1 - g)


@pytest.mark.parametrize("k, b, expected", [(3, 0, True), (2, 0, True), (3, 2, False)])
def test_relative_canonical(k, b, expected):
    assert sf.relative_canonical_triviality(SurfaceContext(2, 0), k, b) is expected


def test_boundary_equivalences():
    ctx = SurfaceContext(2, 0)
    for k in range(2, 10):
        for b in range(-6, 7):
            zero = sf.ksection_zero_selfint_condition(ctx, k, b)
            assert zero == (b == 0) == sf.relative_canonical_triviality(ctx, k, b)


def test_line_subbundle_correspondence():
    assert sf.line_subbundle_correspondence(SurfaceContext(2, 0), 4, 0)["selfint"] == 0
    assert sf.line_subbundle_correspondence(SurfaceContext(2, 0), 1, 3)["selfint"] == 6
    rec = sf.line_subbundle_correspondence(SurfaceContext(2, 2), 1, -1)
    assert rec == {"class": {"s": 1, "b": -1}, "selfint": 0}
