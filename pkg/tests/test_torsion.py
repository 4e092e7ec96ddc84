import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from symstab.errors import BudgetExceeded, ValidationError
from symstab.torsion import (
    RatMod1,
    TorsionVector,
    budget,
    enumerate_torsion,
    get_budget,
    order,
    subgroup_closure,
    subgroup_membership,
    torsion_count,
    transform,
)

rats = st.builds(RatMod1, st.integers(-50, 50), st.integers(1, 24))


def vectors(rank):
    return st.lists(rats, min_size=rank, max_size=rank).map(lambda xs: TorsionVector(tuple(xs)))


class TestRatMod1:
    def test_canonical_form(self):
        x = RatMod1(7, -4)
        assert (x.num, x.den) == (1, 4)
        assert str(RatMod1(0)) == "0/1"
        assert RatMod1("3/2") == RatMod1(1, 2)

    @given(rats, rats)
    def test_sum_stays_reduced(self, a, b):
        c = a + b
        assert 0 <= c.num < c.den
        assert Fraction(c.num, c.den) == (a.value + b.value) % 1

    @given(rats, st.integers(-30, 30))
    def test_scaling(self, a, k):
        assert (a * k).value == (a.value * k) % 1

    def test_immutable(self):
        with pytest.raises(AttributeError):
            RatMod1(1, 2).num = 3


class TestOrder:
    @pytest.mark.parametrize(
        "coords, expected",
        [((0, 0, 0, 0), 1), (("1/2", 0, 0, 0), 2), (("1/3", "1/2", 0, 0), 6)],
    )
    def test_examples(self, coords, expected):
        assert order(TorsionVector.of(*coords)) == expected

    def test_brute_force(self):
        v = TorsionVector.of("1/3", "1/2", 0, 0)
        least = next(n for n in range(1, 7) if (v * n).is_zero())
        assert least == order(v) == 6

    @given(vectors(3))
    def test_order_is_least_annihilator(self, v):
        n = order(v)
        assert (v * n).is_zero()
        assert all(not (v * m).is_zero() for m in range(1, n))


class TestEnumeration:
    def test_counts(self):
        assert torsion_count(4, 2) == 16
        assert torsion_count(4, 1) == 1
        assert torsion_count(6, 6) == 46656

    def test_rank6_n6_enumerated(self):
        assert sum(1 for _ in enumerate_torsion(6, 6)) == 46656

    def test_small_lists(self):
        assert [v.to_json() for v in enumerate_torsion(2, 2)] == [
            ["0/1", "0/1"], ["0/1", "1/2"], ["1/2", "0/1"], ["1/2", "1/2"]
        ]
        assert [str(v) for v in enumerate_torsion(1, 3)] == ["(0/1)", "(1/3)", "(2/3)"]

    def test_sorted_distinct_and_closed(self):
        items = list(enumerate_torsion(4, 2))
        assert len(items) == 16 and items[0].is_zero()
        assert items == sorted(items)
        s = set(items)
        assert len(s) == 16
        assert all(a + b in s for a in items for b in items)

    def test_group_axioms_on_J3(self):
        items = list(enumerate_torsion(2, 3))
        zero = TorsionVector.zero(2)
        for a, b, c in itertools.product(items, repeat=3):
            assert (a + b) + c == a + (b + c)
        for a in items:
            assert a + zero == a and a + (-a) == zero

    def test_budget(self):
        with budget(100):
            assert get_budget() == 100
            with pytest.raises(BudgetExceeded):
                next(enumerate_torsion(4, 4))
        with pytest.raises(BudgetExceeded):
            next(enumerate_torsion(12, 10))

    def test_budget_env(self, monkeypatch):
        monkeypatch.setenv("SYMSTAB_BUDGET", "5")
        with pytest.raises(BudgetExceeded):
            next(enumerate_torsion(3, 2))
        monkeypatch.setenv("SYMSTAB_BUDGET", "lots")
        with pytest.raises(ValidationError):
            get_budget()


class TestSubgroups:
    def test_membership_examples(self):
        h = TorsionVector.of("1/2", 0)
        assert subgroup_membership(TorsionVector.of("1/2", 0), [h])
        assert not subgroup_membership(TorsionVector.of(0, "1/2"), [h])
        assert subgroup_membership(TorsionVector.of("1/2", "1/2"), [h, TorsionVector.of(0, "1/2")])

    def test_closure_size(self):
        gens = [TorsionVector.of("1/4", 0), TorsionVector.of("1/2", "1/3")]
        # brute force: all integer combinations
        combos = {gens[0] * i + gens[1] * j for i in range(4) for j in range(6)}
        assert subgroup_closure(gens) == combos

    def test_rank_mismatch(self):
        with pytest.raises(ValidationError):
            subgroup_membership(TorsionVector.of(0), [TorsionVector.of(0, 0)])


def test_transform_is_homomorphism():
    M = [[1, 2], [0, -1]]
    for a in enumerate_torsion(2, 4):
        for b in enumerate_torsion(2, 3):
            assert transform(M, a + b) == transform(M, a) + transform(M, b)


def test_json_round_trip():
    v = TorsionVector.of("1/3", 0, "5/6")
    assert v.to_json() == ["1/3", "0/1", "5/6"]
    assert TorsionVector.from_json(v.to_json()) == v
    assert TorsionVector.from_json("1/3,0,5/6") == v
    with pytest.raises(ValidationError):
        TorsionVector.from_json(["1/0"])
    with pytest.raises(ValidationError):
        TorsionVector.from_json([])
