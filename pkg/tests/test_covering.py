import itertools
import random

import pytest

import oracles
from conftest import random_vector
from symstab import covering as cv
from symstab.covering import PrymLocation
from symstab.errors import BudgetExceeded, NotDoubleCover, NotTwoTorsion, TrivialClass, UnsupportedDegree
from symstab.torsion import TorsionVector, budget, enumerate_torsion, subgroup_membership, transform


def random_class(cov, rng, n=12):
    return cov.make_class(random_vector(rng, cov.base_rank, n), random_vector(rng, cov.prym_rank, n))


class TestConstruction:
    def test_genus_two(self, cov2):
        assert (cov2.cover_genus, cov2.prym_rank) == (3, 2)

    def test_genus_three(self, cov3):
        assert (cov3.cover_genus, cov3.prym_rank) == (5, 4)

    def test_errors(self):
        with pytest.raises(TrivialClass):
            cv.make_double_cover(2, TorsionVector.zero(4))
        with pytest.raises(NotTwoTorsion):
            cv.make_double_cover(2, TorsionVector.of("1/4", 0, 0, 0))
        with pytest.raises(UnsupportedDegree):
            cv.make_cyclic_cover(2, TorsionVector.of("1/5", 0, 0, 0), 5)

    def test_cyclic_degree_two_agrees(self, cov2):
        assert cv.make_cyclic_cover(2, cv.standard_ell(2), 2) == cov2

    def test_triple_cover_numbers(self, tri2):
        assert (tri2.cover_genus, tri2.prym_rank) == (4, 4)
        kernel = [a for a in enumerate_torsion(4, 3) if cv.pullback(tri2, a).is_zero()]
        assert len(kernel) == 3
        assert set(kernel) == {tri2.ell * i for i in range(3)}

    @pytest.mark.parametrize(
        "ell",
        [("1/2", "1/2", 0, "1/2"), (0, 0, 0, "1/2"), ("1/2", 0, "1/2", 0), (0, "1/2", "1/2", "1/2")],
    )
    def test_alignment(self, ell):
        ell = TorsionVector.of(*ell)
        cov = cv.make_double_cover(2, ell)
        assert cov.align(ell) == cv.standard_ell(2)
        U, Uinv = cov._U, cov._Uinv
        for a in enumerate_torsion(4, 4):
            assert transform(Uinv, transform(U, a)) == a

    def test_alignment_order_three(self):
        c = [2, 4, 0, 0]  # entries share the factor 2, coprime to 3
        U, Uinv = cv.aligning_matrix(c, 3)
        v = TorsionVector.from_ints(c, 3)
        assert transform(U, v) == TorsionVector.basis(4, 0, 3)

    def test_structural_invariants(self, cov2, cov3):
        for cov in (cov2, cov3):
            H = cov.H
            assert len(H) == 2 ** (2 * cov.base_genus - 1)
            assert cov.ell in H
            assert cov.psi(cov.ell).is_zero()
            kernel = [d for d in H if cov.psi(d).is_zero()]
            assert set(kernel) == {TorsionVector.zero(cov.base_rank), cov.ell}
            images = {cov.psi(d) for d in H}
            assert images == set(enumerate_torsion(cov.prym_rank, 2))
            for d, e in itertools.product(H[:8], repeat=2):
                assert cov.psi(d + e) == cov.psi(d) + cov.psi(e)

    def test_H_is_subgroup_of_J2(self, cov2):
        gens = list(cov2.H)
        for v in enumerate_torsion(4, 2):
            assert subgroup_membership(v, gens) == (v in set(cov2.H))


class TestCanonicalForm:
    def test_idempotent_and_orbit_constant(self, cov2, rng):
        for _ in range(100):
            x = random_class(cov2, rng)
            assert cov2.make_class(x.base, x.prym) == x
            for d, p in cov2.gluing():
                assert cov2.make_class(x.base + d, x.prym + p) == x

    def test_matches_orbit_minimum(self, cov2, rng):
        for _ in range(50):
            a, p = random_vector(rng, 4, 6), random_vector(rng, 2, 6)
            orbit = [(a + d, p + q) for d, q in cov2.gluing()]
            best = min(orbit, key=lambda t: t[0].key() + t[1].key())
            x = cov2.make_class(a, p)
            assert (x.base, x.prym) == best


class TestMaps:
    def test_pullback_examples(self, cov2):
        assert cv.pullback(cov2, cov2.ell).is_zero()
        assert cv.pullback(cov2, TorsionVector.zero(4)).is_zero()

    def test_pullback_kernel_exhaustive(self, cov2):
        J2 = list(enumerate_torsion(4, 2))
        for a, b in itertools.product(J2, repeat=2):
            same = cv.pullback(cov2, a) == cv.pullback(cov2, b)
            assert same == ((a - b) in (TorsionVector.zero(4), cov2.ell))

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_norm_of_pullback(self, cov2, n):
        for a in enumerate_torsion(4, n):
            assert cv.norm(cov2, cv.pullback(cov2, a)) == a * 2

    def test_norm_example(self, cov2):
        x = cov2.make_class(TorsionVector.of("1/2", 0, 0, 0), TorsionVector.of("1/3", 0))
        assert cv.norm(cov2, x).is_zero()
        assert cv.norm(cov2, cov2.zero()).is_zero()

    def test_involution_basics(self, cov2, rng):
        for a in enumerate_torsion(4, 4):
            x = cv.pullback(cov2, a)
            assert cv.involution(cov2, x) == x
        for _ in range(100):
            x = random_class(cov2, rng)
            assert cv.involution(cov2, cv.involution(cov2, x)) == x

    def test_involution_needs_double_cover(self, tri2):
        with pytest.raises(NotDoubleCover):
            cv.involution(tri2, tri2.zero())

    def test_one_plus_involution_exhaustive_J6(self, cov2):
        classes = list(cv.enumerate_classes(cov2, 6))
        assert len(classes) == 6 ** (2 * cov2.cover_genus)
        assert len(set(classes)) == len(classes)
        for x in classes:
            assert cv.pullback(cov2, cv.norm(cov2, x)) == x + cv.involution(cov2, x)

    def test_enumerated_classes_oracle(self, cov2):
        # the J_2 of a genus-3 curve has 64 elements
        classes = set(cv.enumerate_classes(cov2, 2))
        assert len(classes) == 64
        assert all((x * 2).is_zero() for x in classes)

    def test_triple_cover_norm(self, tri2):
        for a in enumerate_torsion(4, 3):
            assert cv.norm(tri2, cv.pullback(tri2, a)) == a * 3


class TestPrym:
    def test_counts(self, cov2, cov3):
        assert cv.prym_torsion_count(cov2, 1) == 1
        assert cv.prym_torsion_count(cov2, 2) == 8
        assert cv.prym_torsion_count(cov3, 2) == 32

    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    def test_counts_match_oracle(self, cov2, n):
        assert cv.prym_torsion_count(cov2, n) == oracles.prym_torsion_count(2, n)

    def test_count_independent_of_ell(self, cov2_skew):
        assert cv.prym_torsion_count(cov2_skew, 6) == 72

    def test_locations(self, cov2):
        twos = cv.prym_torsion_classes(cov2, 2)
        locs = [cv.prym_location(cov2, x) for x in twos]
        assert locs.count(PrymLocation.PRYM0) == 4
        assert locs.count(PrymLocation.PRYM1) == 4
        for p in enumerate_torsion(2, 6):
            assert cv.prym_location(cov2, cov2.make_class(TorsionVector.zero(4), p)) is PrymLocation.PRYM0

    def test_prym1_from_pullback_outside_H(self, cov2):
        H = set(cov2.H)
        outside = [a for a in enumerate_torsion(4, 2) if a not in H]
        assert outside
        for a in outside:
            assert cv.prym_location(cov2, cv.pullback(cov2, a)) is PrymLocation.PRYM1

    def test_not_in_prym(self, cov2):
        x = cv.pullback(cov2, TorsionVector.of("1/4", 0, 0, 0))
        assert cv.prym_location(cov2, x) is PrymLocation.NOT_IN_PRYM

    def test_components_are_cosets(self, cov2):
        classes = cv.prym_torsion_classes(cov2, 6)
        prym0 = {x for x in classes if cv.prym_location(cov2, x) is PrymLocation.PRYM0}
        prym1 = set(classes) - prym0
        assert all(x + y in prym0 for x in prym0 for y in prym0)
        a0 = next(a for a in enumerate_torsion(4, 2) if a not in set(cov2.H))
        shift = cv.pullback(cov2, a0)
        assert {x + shift for x in prym0} == prym1

    def test_intersection_with_pullbacks(self, cov2, cov3):
        for cov in (cov2, cov3):
            inter = cv.prym_pullback_intersection(cov)
            assert cov.zero() in inter
            assert inter == {cv.pullback(cov, a) for a in enumerate_torsion(cov.base_rank, 2)}
            assert len(inter) == 2 ** (2 * cov.base_genus - 1)
        assert cv.prym_pullback_intersection(cov2) == set(cv.prym_torsion_classes(cov2, 2))

    def test_budget_enforced(self, cov2):
        with budget(50):
            with pytest.raises(BudgetExceeded):
                cv.prym_torsion_count(cov2, 6)


class TestPullbackImage:
    def test_pullbacks_are_in_image(self, cov2):
        for a in enumerate_torsion(4, 4):
            assert cv.in_pullback_image(cov2, cv.pullback(cov2, a))

    def test_order_three_prym_part_oracle(self, cov2):
        images = {cv.pullback(cov2, a) for a in enumerate_torsion(4, 6)}
        for p in enumerate_torsion(2, 3):
            if p.is_zero():
                continue
            x = cov2.make_class(TorsionVector.zero(4), p)
            assert not cv.in_pullback_image(cov2, x)
            assert x not in images

    def test_order_two_prym_part(self, cov2):
        for a in enumerate_torsion(4, 2):
            for p in enumerate_torsion(2, 2):
                x = cov2.make_class(a, p)
                assert cv.in_pullback_image(cov2, x)
                pre = cv.pullback_preimage(cov2, x)
                assert cv.pullback(cov2, pre) == x

    def test_triple_cover_image(self, tri2):
        images = {cv.pullback(tri2, a) for a in enumerate_torsion(4, 6)}
        for p in enumerate_torsion(4, 2):
            x = tri2.make_class(TorsionVector.zero(4), p)
            assert cv.in_pullback_image(tri2, x) == (x in images)


class TestDeterminant:
    def test_examples(self, cov2):
        assert cv.pushforward_determinant(cov2, cov2.zero()) == cov2.ell
        for x in cv.prym_torsion_classes(cov2, 6):
            assert cv.pushforward_determinant(cov2, x) == cov2.ell
        for a in enumerate_torsion(4, 4):
            assert cv.pushforward_determinant(cov2, cv.pullback(cov2, a)) == cov2.ell + a * 2


def test_json_round_trip(cov2, rng):
    assert cv.CoveringModel.from_json(cov2.to_json()) == cov2
    for _ in range(20):
        x = random_class(cov2, rng)
        assert cv.TorsionClass.from_json(cov2, x.to_json()) == x


def test_genus_three_random_identities(cov3):
    rng = random.Random(7)
    for _ in range(50):
        x = random_class(cov3, rng, 6)
        assert cv.pullback(cov3, cv.norm(cov3, x)) == x + cv.involution(cov3, x)
