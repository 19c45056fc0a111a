"""Permutation engine tests: orbits, orders, stabilizers, normal subgroup
machinery, subgroup search and induced actions."""

import json
from itertools import combinations
from random import Random

import pytest

from geomforge.perm import (
    CapacityError,
    ClosureError,
    DomainError,
    Permutation,
    PermutationGroup,
    SubgroupPredicate,
    group_from_json,
    group_to_json,
    induced_action,
    load_group,
    minimal_normal_subgroups,
    natural_action,
    orbit,
    stabilizer,
    subgroup_search,
)
from oracles import exhaustive_orbit, naive_group_elements, naive_minimal_normal_orders


def pair_rule(g, pair):
    return tuple(sorted(g.images[x] for x in pair))


class TestPermutation:
    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation([0, 0, 1])

    def test_compose_inverse_is_identity(self):
        rng = Random(7)
        for _ in range(25):
            images = list(range(8))
            rng.shuffle(images)
            p = Permutation(images)
            assert (p * p.inverse()).is_identity()
            assert (p.inverse() * p).is_identity()

    def test_composition_order(self):
        # apply p first, then q
        p = Permutation.from_cycles(3, [(0, 1)])
        q = Permutation.from_cycles(3, [(1, 2)])
        assert (p * q)(0) == q(p(0)) == 2

    def test_order_and_power(self):
        p = Permutation.from_cycles(6, [(0, 1, 2), (3, 4)])
        assert p.order() == 6
        assert (p ** 6).is_identity()
        assert p ** -1 == p.inverse()

    def test_cycles_roundtrip(self):
        p = Permutation.from_cycles(5, [(0, 3, 1)])
        assert p.cycles() == [(0, 3, 1)]


class TestGroupOrder:
    def test_s5(self):
        assert PermutationGroup.symmetric(5).order() == 120

    def test_identity_only(self):
        assert PermutationGroup.trivial(4).order() == 1

    def test_sp6_transvections(self):
        from geomforge.build import symplectic_transvections

        group = PermutationGroup(symplectic_transvections(3))
        assert group.order() == 2**9 * 3 * 15 * 63 == 1451520

    def test_order_invariant_under_generator_shuffle(self):
        rng = Random(3)
        base = PermutationGroup.symmetric(6)
        gens = list(base.generators)
        for _ in range(5):
            rng.shuffle(gens)
            assert PermutationGroup(gens).order() == 720

    def test_order_invariant_under_random_words(self):
        rng = Random(11)
        base = PermutationGroup.alternating(5)
        for _ in range(3):
            words = [base.random_element(rng) for _ in range(3)]
            regenerated = PermutationGroup(words)
            if regenerated.order() == 60:
                assert regenerated.is_subgroup_of(base)
                assert base.is_subgroup_of(regenerated)

    def test_membership_agrees_with_closure(self):
        group = PermutationGroup.symmetric(4)
        elements = naive_group_elements([g.images for g in group.generators])
        assert group.order() == len(elements)
        for images in sorted(elements):
            assert group.contains(Permutation(images))
        outside = Permutation([1, 0, 2, 3, 4])
        assert not PermutationGroup.alternating(5).contains(
            Permutation([1, 0, 2, 3, 4])
        )


class TestOrbit:
    def test_s5_on_pairs(self):
        s5 = PermutationGroup.symmetric(5)
        pairs = [tuple(sorted(c)) for c in combinations(range(5), 2)]
        action = induced_action(s5, pairs, pair_rule)
        assert len(orbit(action, (0, 1))) == 10

    def test_transvections_on_vectors(self):
        from geomforge.build import symplectic_transvections

        group = PermutationGroup(symplectic_transvections(2))
        action = natural_action(group)
        got = orbit(action, 0)
        maps = [lambda x, g=g: g.images[x] for g in group.generators]
        assert set(got) == exhaustive_orbit(0, maps)
        assert len(got) == 15

    def test_trivial_group(self):
        group = PermutationGroup.trivial(6)
        action = natural_action(group)
        assert orbit(action, 4) == [4]

    def test_seed_outside_domain(self):
        action = natural_action(PermutationGroup.symmetric(3))
        with pytest.raises(DomainError):
            orbit(action, 9)


class TestStabilizer:
    def test_point_stabilizer_s5(self):
        s5 = PermutationGroup.symmetric(5)
        assert stabilizer(s5, [0], "pointwise").order() == 24

    def test_petersen_vertex_stabilizer(self, p0):
        vertices = p0.geometry.elements_of_type(2)
        action = p0.action
        image = action.image_group()
        idx = action.index[vertices[0]]
        sub = image.stabilizer([idx], mode="pointwise")
        assert sub.order() == 12  # 120 / 10 by orbit-stabilizer

    def test_full_pointwise_stabilizer_trivial(self):
        s4 = PermutationGroup.symmetric(4)
        assert stabilizer(s4, list(range(4)), "pointwise").order() == 1

    def test_empty_points_returns_group(self):
        s4 = PermutationGroup.symmetric(4)
        assert stabilizer(s4, [], "pointwise") is s4

    def test_orbit_stabilizer_identity(self):
        group = PermutationGroup.alternating(6)
        for x in (0, 3):
            orb = group.point_orbit(x)
            stab = group.stabilizer([x], mode="pointwise")
            assert len(orb) * stab.order() == group.order()

    def test_setwise_stabilizer(self):
        s5 = PermutationGroup.symmetric(5)
        sw = s5.stabilizer([0, 1], mode="setwise")
        assert sw.order() == 12
        for g in sw.generators:
            assert {g.images[0], g.images[1]} == {0, 1}


class TestMinimalNormalSubgroups:
    @pytest.mark.parametrize(
        "group,expected",
        [
            (PermutationGroup.symmetric(4), [4]),
            (PermutationGroup.symmetric(3), [3]),
            (PermutationGroup.alternating(5), [60]),
        ],
    )
    def test_against_bruteforce(self, group, expected):
        got = [g.order() for g in minimal_normal_subgroups(group)]
        assert got == expected
        assert got == naive_minimal_normal_orders(
            [g.images for g in group.generators]
        )

    def test_members_are_normal_and_incomparable(self):
        group = PermutationGroup.symmetric(4)
        subs = minimal_normal_subgroups(group)
        for sub in subs:
            assert sub.is_normal_in(group)
        for a in subs:
            for b in subs:
                if a is not b:
                    assert not a.is_subgroup_of(b)

    def test_capacity_bound(self):
        group = PermutationGroup.symmetric(5)
        with pytest.raises(CapacityError):
            minimal_normal_subgroups(group, bound=100)


class TestSubgroupSearch:
    def test_a4_inside_s4(self):
        s4 = PermutationGroup.symmetric(4)
        found = subgroup_search(s4, SubgroupPredicate(order=12), seed=1)
        assert found is not None and found.order() == 12
        assert found.is_subgroup_of(s4)
        assert found.equals(PermutationGroup.alternating(4))

    def test_whole_group_target(self):
        s4 = PermutationGroup.symmetric(4)
        assert subgroup_search(s4, SubgroupPredicate(order=24), seed=1) is s4

    def test_non_dividing_order_rejected(self):
        with pytest.raises(ValueError):
            subgroup_search(
                PermutationGroup.symmetric(4), SubgroupPredicate(order=7), seed=1
            )

    def test_deterministic_given_seed(self):
        s4 = PermutationGroup.symmetric(4)
        a = subgroup_search(s4, SubgroupPredicate(order=8), seed=5)
        b = subgroup_search(s4, SubgroupPredicate(order=8), seed=5)
        assert [g.images for g in a.generators] == [g.images for g in b.generators]


class TestRandomElements:
    def test_sampling_covers_group_uniformly(self):
        # every element reachable with near-uniform frequency
        group = PermutationGroup.symmetric(4)
        chain = group.chain()
        rng = Random(123)
        counts = {}
        for _ in range(12000):
            g = chain.sample(rng)
            counts[g.images] = counts.get(g.images, 0) + 1
        assert len(counts) == 24
        assert min(counts.values()) > 350 and max(counts.values()) < 650

    def test_samples_are_members(self):
        group = PermutationGroup.alternating(5)
        rng = Random(5)
        for _ in range(50):
            assert group.contains(group.random_element(rng))


class TestInducedAction:
    def test_identity_rule_is_natural_action(self):
        group = PermutationGroup.symmetric(4)
        action = induced_action(group, range(4), lambda g, x: g.images[x])
        assert action.domain == (0, 1, 2, 3)
        assert action.orbit(0) == [0, 1, 2, 3]

    def test_subspace_domain_count(self):
        from geomforge.build import _general_linear_group

        gl4 = _general_linear_group(4)
        # 2-dimensional subspaces of GF(2)^4 as sorted triples of vectors
        subs = set()
        for v1 in range(1, 16):
            for v2 in range(v1 + 1, 16):
                subs.add(tuple(sorted((v1, v2, v1 ^ v2))))
        assert len(subs) == 35

        def rule(g, sub):
            return tuple(sorted(g.images[v - 1] + 1 for v in sub))

        action = induced_action(gl4, sorted(subs), rule)
        assert len(action.orbit(sorted(subs)[0])) == 35

    def test_closure_error(self):
        group = PermutationGroup.symmetric(4)
        with pytest.raises(ClosureError):
            induced_action(group, [0, 1], lambda g, x: g.images[x])

    def test_homomorphism_spot_check(self):
        group = PermutationGroup.symmetric(5)
        pairs = [tuple(sorted(c)) for c in combinations(range(5), 2)]
        action = induced_action(group, pairs, pair_rule)
        assert action.spot_check_homomorphism(Random(2), samples=30)


class TestGroupFiles:
    def test_roundtrip(self, tmp_path):
        group = PermutationGroup.symmetric(4)
        payload = group_to_json(group)
        again = group_from_json(payload)
        assert again.order() == 24

    def test_expected_order_mismatch(self, tmp_path):
        payload = {
            "degree": 3,
            "generators": [[1, 2, 0]],
            "expected_order": 7,
        }
        path = tmp_path / "g.json"
        path.write_text(json.dumps(payload))
        with pytest.raises(ValueError):
            load_group(path)
