"""Braid words, rewrites, and the free-group equality oracle."""

import random

import pytest

from platkit.braid import (
    BraidWord,
    Letter,
    Permutation,
    artin_action,
    braids_equal,
    compose_actions,
    free_reduce,
    full_twist,
    parse_word,
    permutation_of,
)
from platkit.errors import ParseError, ResourceLimitError


def W(m, ints):
    return BraidWord.from_ints(m, ints)


def random_word(rng, m, max_len):
    length = rng.randint(0, max_len)
    return W(m, [rng.choice([1, -1]) * rng.randint(1, m - 1) for _ in range(length)])


class TestFreeReduce:
    def test_cancellation(self):
        assert free_reduce(W(2, [1, -1])).to_ints() == ()

    def test_identity(self):
        assert free_reduce(W(2, [])).to_ints() == ()

    def test_single_cancellation(self):
        assert free_reduce(W(3, [1, 2, -2, 1])).to_ints() == (1, 1)

    def test_cascading(self):
        assert free_reduce(W(3, [1, 2, -2, -1, 2])).to_ints() == (2,)


class TestPermutation:
    def test_swap(self):
        assert permutation_of(W(2, [1])).images == (2, 1)

    def test_identity(self):
        assert permutation_of(W(4, [])).images == (1, 2, 3, 4)

    def test_three_cycle(self):
        # composing the transpositions (1 2) then (2 3), first letter first
        assert permutation_of(W(3, [1, 2])).images == (3, 1, 2)

    def test_sign_irrelevant(self):
        assert permutation_of(W(3, [1, -2])) == permutation_of(W(3, [1, 2]))

    def test_homomorphism(self):
        rng = random.Random(11)
        for _ in range(50):
            m = rng.randint(2, 6)
            w1, w2 = random_word(rng, m, 8), random_word(rng, m, 8)
            assert permutation_of(w1 * w2) == permutation_of(w1).then(permutation_of(w2))

    def test_inverse(self):
        perm = permutation_of(W(4, [1, 3, 2]))
        assert perm.then(perm.inverse()).is_identity()

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation((1, 1, 3))


class TestArtinAction:
    def test_identity(self):
        assert artin_action(W(4, [])) == ((1,), (2,), (3,), (4,))

    def test_single_generator(self):
        assert artin_action(W(2, [1])) == ((1, 2, -1), (1,))

    def test_inverse_pair(self):
        assert artin_action(W(2, [1, -1])) == ((1,), (2,))

    def test_composite_is_composition(self):
        rng = random.Random(23)
        for _ in range(50):
            m = rng.randint(2, 8)
            w1, w2 = random_word(rng, m, 12), random_word(rng, m, 12)
            combined = artin_action(w1 * w2)
            assert combined == compose_actions(artin_action(w2), artin_action(w1))

    def test_growth_cap(self):
        # (s1 s2')^k image lengths grow exponentially and must hit the cap
        word = W(3, [1, -2] * 40)
        with pytest.raises(ResourceLimitError):
            artin_action(word)


class TestBraidsEqual:
    def test_braid_relation(self):
        assert braids_equal(W(3, [1, 2, 1]), W(3, [2, 1, 2]))

    def test_far_commutation(self):
        assert braids_equal(W(4, [1, 3]), W(4, [3, 1]))

    def test_distinct(self):
        assert not braids_equal(W(2, [1]), W(2, [-1]))

    def test_strand_mismatch(self):
        with pytest.raises(ValueError):
            braids_equal(W(2, [1]), W(3, [1]))

    def test_free_reduce_consistency(self):
        rng = random.Random(37)
        for _ in range(50):
            m = rng.randint(2, 8)
            w = random_word(rng, m, 12)
            assert braids_equal(w, free_reduce(w))


class TestFullTwist:
    def test_smallest(self):
        assert full_twist(2).to_ints() == (1, 1)

    def test_form(self):
        assert full_twist(3).to_ints() == (1, 2) * 3
        assert full_twist(4).to_ints() == (1, 2, 3) * 4

    def test_central(self):
        for m in range(2, 7):
            delta = full_twist(m)
            for i in range(1, m):
                g = W(m, [i])
                assert braids_equal(delta * g, g * delta)

    def test_rejects_small(self):
        with pytest.raises(ValueError):
            full_twist(1)


class TestTextFormat:
    def test_round_trip(self):
        rng = random.Random(5)
        for _ in range(30):
            m = rng.randint(2, 6)
            w = random_word(rng, m, 10)
            assert parse_word(w.to_text(), m) == w

    def test_parse(self):
        w = parse_word("s1 s2' s3", 4)
        assert w.to_ints() == (1, -2, 3)

    def test_bad_token_position(self):
        with pytest.raises(ParseError) as exc:
            parse_word("s1 x2", 4)
        assert exc.value.position == 2

    def test_index_zero(self):
        with pytest.raises(ParseError) as exc:
            parse_word("s0", 4)
        assert exc.value.position == 1

    def test_index_too_large(self):
        with pytest.raises(ParseError):
            parse_word("s4", 4)


class TestValidation:
    def test_letter_out_of_range(self):
        with pytest.raises(ValueError):
            BraidWord(3, (Letter(3, 1),))

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            BraidWord(3, (Letter(1, 2),))

    def test_too_few_strands(self):
        with pytest.raises(ValueError):
            BraidWord(1, ())

    def test_inverse_word(self):
        w = W(4, [1, -2, 3])
        assert w.inverse().to_ints() == (-3, 2, -1)
        assert free_reduce(w * w.inverse()).to_ints() == ()
