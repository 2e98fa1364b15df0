import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import endo
from nielsenkit.boundary import (
    DegenerateRay,
    MorphicRay,
    agree_length,
    attraction_check,
    equivalent_under,
    ev_periodic,
    ev_periodic_image,
    in_boundary_of_subgroup,
    left_multiply,
)
from nielsenkit.words import IDENTITY, default_basis, fold_words, identity_endo, word

b1 = default_basis(1)
b2 = default_basis(2)

jiang = endo(2, "A", "Abb")          # a -> a^-1, b -> a^-1 b^2
conj2 = endo(2, "a", "Bab")          # a1 -> a1, a2 -> a2^-1 a1 a2
square1 = endo(1, "aa")


class TestPrefix:
    def test_periodic(self):
        w = ev_periodic(IDENTITY, b1.parse("a"))
        assert w.prefix(3) == b1.parse("aaa")

    def test_jiang_ray(self):
        ray = MorphicRay(b2.parse("B"), jiang)
        assert ray.prefix(9) == b2.parse("BBaBBBBaB")
        assert ray.prefix(11) == b2.parse("BBaBBBBaBBa")

    def test_conjugating_ray(self):
        ray = MorphicRay(b2.parse("B"), conj2)
        assert ray.prefix(7) == b2.parse("BAbABab")

    def test_prefix_coherence(self):
        ray = MorphicRay(b2.parse("B"), jiang)
        for m in range(1, 30):
            assert ray.prefix(m).letters == ray.prefix(m + 7).letters[:m]

    def test_stationary_seed_rejected(self):
        with pytest.raises(DegenerateRay):
            MorphicRay(b2.parse("a"), conj2)  # phi(a) = a

    def test_wrong_seed_rejected(self):
        with pytest.raises(DegenerateRay):
            MorphicRay(b2.parse("b"), jiang)  # phi(b) does not start with b


class TestEvPeriodicNormalForm:
    def test_rotation_equality(self):
        # b (ab)^inf == (ba)^inf
        w = ev_periodic(b2.parse("b"), b2.parse("ab"))
        v = ev_periodic(IDENTITY, b2.parse("ba"))
        assert w == v

    def test_junction_cancellation(self):
        # A (ab)^inf = (ba)^inf shifted: A a b a b ... = b a b ...
        w = ev_periodic(b2.parse("A"), b2.parse("ab"))
        assert w.prefix(4) == b2.parse("baba")

    def test_primitive_period(self):
        assert ev_periodic(IDENTITY, b2.parse("abab")) == ev_periodic(IDENTITY, b2.parse("ab"))

    def test_conjugate_period(self):
        # (a b A)^inf = a b b b ...
        w = ev_periodic(IDENTITY, b2.parse("abA"))
        assert w.prefix(4) == b2.parse("abbb")

    def test_empty_period_rejected(self):
        with pytest.raises(ValueError):
            ev_periodic(b2.parse("a"), IDENTITY)
        with pytest.raises(ValueError):
            ev_periodic(IDENTITY, b2.parse("aA"))


class TestAgreeLength:
    def test_same(self):
        w = ev_periodic(IDENTITY, b1.parse("a"))
        assert agree_length(w, w, 10) is math.inf

    def test_opposite_rays(self):
        w = ev_periodic(IDENTITY, b1.parse("a"))
        v = ev_periodic(IDENTITY, b1.parse("A"))
        assert agree_length(w, v, 10) == 0

    def test_exact_decision_beats_cap(self):
        # two distinct periodic words agreeing far beyond any small cap
        w = ev_periodic(b2.parse("a" * 50), b2.parse("b"))
        v = ev_periodic(b2.parse("a" * 50), b2.parse("B"))
        got = agree_length(w, v, 3)
        assert got == 50  # exact, not the cap

    def test_morphic_structural(self):
        r1 = MorphicRay(b2.parse("B"), jiang)
        r2 = MorphicRay(b2.parse("B"), jiang)
        assert agree_length(r1, r2, 5) is math.inf

    def test_symmetry(self):
        r = MorphicRay(b2.parse("B"), jiang)
        v = ev_periodic(IDENTITY, b2.parse("B"))
        assert agree_length(r, v, 40) == agree_length(v, r, 40)


class TestLeftMultiply:
    def test_identity(self):
        w = ev_periodic(IDENTITY, b1.parse("a"))
        assert left_multiply(IDENTITY, w) == w

    def test_cancellation(self):
        w = ev_periodic(IDENTITY, b1.parse("a"))
        assert left_multiply(b1.parse("A"), w) == w

    def test_ray_prefix(self):
        ray = MorphicRay(b2.parse("B"), conj2)
        shifted = left_multiply(b2.parse("a"), ray)
        assert shifted.prefix(8) == b2.parse("a") * ray.prefix(7)

    def test_ray_deep_cancellation(self):
        ray = MorphicRay(b2.parse("B"), conj2)   # starts B A b ...
        # ab . BAb... : the b cancels B, then a cancels A
        shifted = left_multiply(b2.parse("ab"), ray)
        assert shifted.prefix(5) == word(ray.prefix(7).letters[2:])


class TestMembership:
    def test_stays(self):
        graph = fold_words(2, [b2.parse("a")])
        w = ev_periodic(IDENTITY, b2.parse("a"))
        assert in_boundary_of_subgroup(w, graph, 32).stays_to_depth

    def test_escapes(self):
        graph = fold_words(2, [b2.parse("a")])
        w = ev_periodic(IDENTITY, b2.parse("ab"))
        assert in_boundary_of_subgroup(w, graph, 32).escapes_at == 2

    def test_ray_escapes_immediately(self):
        graph = fold_words(2, [b2.parse("a")])
        ray = MorphicRay(b2.parse("B"), conj2)
        assert in_boundary_of_subgroup(ray, graph, 32).escapes_at == 1


class TestAttraction:
    def test_square_attracting(self):
        w = ev_periodic(IDENTITY, b1.parse("a"))
        assert attraction_check(w, square1).status == "attracting"

    def test_identity_fixed_not_attracting(self):
        w = ev_periodic(IDENTITY, b1.parse("a"))
        assert attraction_check(w, identity_endo(b1)).status == "fixed-not-attracting"

    def test_jiang_ray_attracting(self):
        ray = MorphicRay(b2.parse("B"), jiang)
        assert attraction_check(ray, jiang).status == "attracting"

    def test_conjugating_ray_attracting(self):
        ray = MorphicRay(b2.parse("B"), conj2)
        assert attraction_check(ray, conj2).status == "attracting"

    def test_reversed_power_not_fixed(self):
        w = ev_periodic(IDENTITY, b1.parse("a"))
        assert attraction_check(w, endo(1, "AA")).status == "not-fixed"

    def test_fixed_subgroup_boundary_point(self):
        # a^inf is in the boundary of fix(a -> a, b -> b a b) and not attracting
        phi = endo(2, "a", "bab")
        w = ev_periodic(IDENTITY, b2.parse("a"))
        v = attraction_check(w, phi, fix_gens=[b2.parse("a")])
        assert v.status == "fixed-not-attracting"

    def test_window_stability(self):
        # doubling the window does not flip periodic verdicts
        for phi, w in [(square1, ev_periodic(IDENTITY, b1.parse("a"))),
                       (identity_endo(b1), ev_periodic(IDENTITY, b1.parse("a"))),
                       (endo(1, "AA"), ev_periodic(IDENTITY, b1.parse("a")))]:
            v1 = attraction_check(w, phi)
            v2 = attraction_check(w, phi, window=2 * v1.window)
            assert v1.status == v2.status

    def test_evidence_monotone_in_i(self):
        ray = MorphicRay(b2.parse("B"), jiang)
        v = attraction_check(ray, jiang)
        assert [i for i, _ in v.evidence] == list(range(1, len(v.evidence) + 1))

    def test_non_injective_rejected(self):
        with pytest.raises(ValueError):
            attraction_check(ev_periodic(IDENTITY, b1.parse("a")), endo(1, ""))


class TestEquivalence:
    def test_reflexive(self):
        ray = MorphicRay(b2.parse("B"), conj2)
        res = equivalent_under(ray, ray, [], conj2, 3)
        assert res.found and res.witness == IDENTITY and res.exact

    def test_shifted_ray(self):
        ray = MorphicRay(b2.parse("B"), conj2)
        shifted = left_multiply(b2.parse("a"), ray)
        res = equivalent_under(shifted, ray, [b2.parse("a")], conj2, 4)
        assert res.found and res.witness == b2.parse("a")

    def test_rank_one_poles_distinct(self):
        plus = ev_periodic(IDENTITY, b1.parse("a"))
        minus = ev_periodic(IDENTITY, b1.parse("A"))
        res = equivalent_under(plus, minus, [], square1, 6)
        assert not res.found

    def test_bad_certificate(self):
        ray = MorphicRay(b2.parse("B"), conj2)
        with pytest.raises(ValueError):
            equivalent_under(ray, ray, [b2.parse("b")], conj2, 2)


class TestPushForward:
    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=5),
           st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=4))
    def test_image_matches_prefixes(self, pre_raw, per_raw):
        try:
            w = ev_periodic(word(pre_raw), word(per_raw))
        except ValueError:
            return
        img = ev_periodic_image(w, conj2)
        # the pushed-forward word agrees with the image of long prefixes
        long = conj2.apply(w.prefix(64))
        assert img.prefix(len(long) - conj2.cancellation_bound()).letters == \
            long.letters[:len(long) - conj2.cancellation_bound()]

    def test_morphic_fixedness_up_to_bound(self):
        ray = MorphicRay(b2.parse("B"), jiang)
        bound = jiang.cancellation_bound()
        for m in range(4, 40, 7):
            p = ray.prefix(m)
            img = jiang.apply(p)
            agree = 0
            for x, y in zip(p.letters, img.letters):
                if x != y:
                    break
                agree += 1
            assert agree >= m - bound
