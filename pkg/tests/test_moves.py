"""Double coset moves, flips, pockets, and move-record replay."""

import random

import pytest

from platkit.braid import BraidWord, braids_equal, free_reduce
from platkit.errors import ReplayError
from platkit.invariants import invariant, invariants_equal
from platkit.moves import (
    HildenWord,
    MoveLog,
    MoveRecord,
    apply_double_coset,
    apply_flip,
    apply_isotopy,
    apply_record,
    cap_twist,
    flip_insertion,
    garside_slide,
    hilden_generators,
    isotopy_moves,
    micro_flip,
    micro_flip_insertion,
    pocket_move,
)
from platkit.plat import PlatPresentation, component_count


def P(n, ints):
    return PlatPresentation.from_ints(n, ints)


def W(m, ints):
    return BraidWord.from_ints(m, ints)


def random_plat(rng, max_n=3, max_len=8):
    n = rng.randint(1, max_n)
    length = rng.randint(0, max_len)
    return P(n, [rng.choice([1, -1]) * rng.randint(1, 2 * n - 1) for _ in range(length)])


def random_hilden(rng, n, max_factors=3):
    count = len(hilden_generators(n))
    return HildenWord(
        n,
        tuple(
            (rng.randrange(count), rng.choice((1, -1)))
            for _ in range(rng.randint(0, max_factors))
        ),
    )


class TestHildenGenerators:
    def test_two_bridges(self):
        assert [g.to_ints() for g in hilden_generators(2)] == [
            (1,),
            (2, 1, 1, 2),
            (2, 1, 3, 2),
        ]

    def test_one_bridge_degenerates(self):
        assert [g.to_ints() for g in hilden_generators(1)] == [(1,)]

    def test_three_bridges_band_family(self):
        words = [g.to_ints() for g in hilden_generators(3)]
        assert (2, 1, 3, 2) in words and (4, 3, 5, 4) in words

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            hilden_generators(0)

    def test_expand_inverse(self):
        h = HildenWord(2, ((2, 1), (0, -1)))
        assert free_reduce(h.expand() * h.inverse().expand()).to_ints() == ()

    def test_cap_twist_equals_odd_generator(self):
        for n in (1, 2, 3):
            for k in range(1, n + 1):
                assert braids_equal(cap_twist(n, k).expand(), W(2 * n, [2 * k - 1]))


class TestDoubleCoset:
    def test_identity(self):
        p = P(2, [2])
        assert apply_double_coset(p, "top", HildenWord.identity(2)) == p

    def test_bottom_append(self):
        q = apply_double_coset(P(2, [2]), "bottom", HildenWord.single(2, 0))
        assert q.word.to_ints() == (2, 1)

    def test_top_prepend(self):
        q = apply_double_coset(P(2, [2]), "top", HildenWord.single(2, 2))
        assert q.word.to_ints() == (2, 1, 3, 2, 2)

    def test_strand_mismatch(self):
        with pytest.raises(ValueError):
            apply_double_coset(P(2, [2]), "top", HildenWord.identity(3))

    def test_preserves_invariant(self):
        rng = random.Random(55)
        for _ in range(25):
            p = random_plat(rng, max_len=6)
            h = random_hilden(rng, p.bridge_index, max_factors=1)
            for side in ("top", "bottom"):
                q = apply_double_coset(p, side, h)
                assert invariants_equal(invariant(p), invariant(q))

    def test_preserves_component_count(self):
        rng = random.Random(56)
        for _ in range(40):
            p = random_plat(rng)
            h = random_hilden(rng, p.bridge_index)
            for side in ("top", "bottom"):
                assert component_count(apply_double_coset(p, side, h)) == component_count(p)


class TestFlipInsertion:
    def test_case_iv_small(self):
        assert flip_insertion("iv", 2).to_ints() == (2, 3) * 3

    def test_case_iii_small(self):
        assert flip_insertion("iii", 2).to_ints() == (-3, -2) * 3

    def test_case_v_small(self):
        assert flip_insertion("v", 2).to_ints() == (1, 2) * 3

    def test_case_vi_small(self):
        assert flip_insertion("vi", 2).to_ints() == (-2, -1) * 3

    def test_letter_counts(self):
        for n in (2, 3):
            m = 2 * n
            for k in range(1, m):
                expected = k * (k - 1) + (m - k) * (m - k - 1)
                assert len(flip_insertion("i", n, k)) == expected
                assert len(flip_insertion("ii", n, k)) == expected
            for case in ("iii", "iv", "v", "vi"):
                assert len(flip_insertion(case, n)) == (m - 1) * (m - 2)

    def test_boundary_cases_coincide(self):
        for n in (2, 3):
            m = 2 * n
            assert flip_insertion("i", n, 1) == flip_insertion("iii", n)
            assert flip_insertion("i", n, m - 1) == flip_insertion("v", n)
            assert flip_insertion("ii", n, 1) == flip_insertion("iv", n)
            assert flip_insertion("ii", n, m - 1) == flip_insertion("vi", n)

    def test_inverse_pairs(self):
        for n in (2, 3):
            assert flip_insertion("iii", n) == flip_insertion("iv", n).inverse()
            assert flip_insertion("v", n) == flip_insertion("vi", n).inverse()

    def test_k_validation(self):
        with pytest.raises(ValueError):
            flip_insertion("i", 2, None)
        with pytest.raises(ValueError):
            flip_insertion("i", 2, 4)
        with pytest.raises(ValueError):
            flip_insertion("iv", 2, 2)
        with pytest.raises(ValueError):
            flip_insertion("vii", 2)


class TestApplyFlip:
    def test_append_at_end(self):
        q = apply_flip(P(2, [2]), 1, "iv")
        assert q.word.to_ints() == (2, 2, 3, 2, 3, 2, 3)

    def test_prefix_insertion(self):
        q = apply_flip(P(2, [2]), 0, "v")
        assert q.word.to_ints() == (1, 2, 1, 2, 1, 2, 2)

    def test_invalid_split(self):
        with pytest.raises(ValueError):
            apply_flip(P(2, [2]), 5, "iv")

    def test_flip_then_inverse_case_restores(self):
        p = P(2, [2, -1, 3])
        q = apply_flip(p, 2, "iv")
        r = apply_flip(q, 2, "iii")
        assert r == p

    def test_preserves_invariant_both_ends(self):
        rng = random.Random(60)
        for case in ("iii", "iv", "v", "vi"):
            for end in ("top", "bottom"):
                p = random_plat(rng, max_n=2, max_len=5)
                split = rng.randint(0, len(p.word))
                q = apply_flip(p, split, case, end=end)
                assert invariants_equal(invariant(p), invariant(q))


class TestMicroFlip:
    def test_full_band_is_case_iv(self):
        for n in (2, 3):
            p = P(n, [])
            assert micro_flip(p, 0, 2 * n, 1) == apply_flip(p, 0, "iv")

    def test_band_restriction(self):
        for n in (2, 3):
            for k in range(2, 2 * n + 1, 2):
                for pos in range(1, 2 * n - k + 2):
                    ins = micro_flip_insertion(n, k, pos)
                    assert {l.index for l in ins.letters} <= set(
                        range(pos + 1, pos + k - 1)
                    )

    def test_leftmost_two_strand_band(self):
        assert micro_flip_insertion(2, 2, 1).to_ints() == ()

    def test_odd_band_rejected(self):
        with pytest.raises(ValueError):
            micro_flip(P(2, []), 0, 3, 1)

    def test_band_out_of_range(self):
        with pytest.raises(ValueError):
            micro_flip(P(2, []), 0, 4, 2)

    def test_preserves_invariant(self):
        rng = random.Random(61)
        for _ in range(10):
            p = random_plat(rng, max_n=3, max_len=4)
            n = p.bridge_index
            k = rng.choice(range(2, 2 * n + 1, 2))
            pos = rng.randint(1, 2 * n - k + 1)
            q = micro_flip(p, rng.randint(0, len(p.word)), k, pos)
            assert invariants_equal(invariant(p), invariant(q))


class TestPocket:
    def test_identity(self):
        p = P(2, [2])
        out, log = pocket_move(p, "bottom", HildenWord.identity(2))
        assert out == p and log.records == []

    def test_matches_double_coset_and_replays(self):
        rng = random.Random(62)
        for _ in range(20):
            p = random_plat(rng, max_len=5)
            h = random_hilden(rng, p.bridge_index)
            for side in ("top", "bottom"):
                out, log = pocket_move(p, side, h)
                assert out == apply_double_coset(p, side, h)
                assert log.replay() == out
                assert all(r.kind == "double_coset" for r in log.records)

    def test_preserves_invariant(self):
        p = P(2, [2])
        out, _log = pocket_move(p, "bottom", HildenWord.single(2, 2))
        assert invariants_equal(invariant(p), invariant(out))


class TestGarsideSlide:
    def test_empty_words(self):
        p1, p2 = garside_slide(W(4, []), W(4, []), 2)
        assert p1 == p2
        assert p1.word.to_ints() == (1, 2, 3) * 4

    def test_braid_equality(self):
        p1, p2 = garside_slide(W(4, [1]), W(4, [2]), 2)
        assert braids_equal(p1.word, p2.word)

    def test_invariant_equality(self):
        rng = random.Random(63)
        for _ in range(5):
            A = W(4, [rng.choice([1, -1]) * rng.randint(1, 3) for _ in range(3)])
            B = W(4, [rng.choice([1, -1]) * rng.randint(1, 3) for _ in range(3)])
            p1, p2 = garside_slide(A, B, 2)
            assert invariants_equal(invariant(p1), invariant(p2))

    def test_strand_mismatch(self):
        with pytest.raises(ValueError):
            garside_slide(W(4, []), W(6, []), 2)


class TestIsotopy:
    def test_commute(self):
        w = apply_isotopy(W(4, [1, 3]), "commute", 0)
        assert w.to_ints() == (3, 1)

    def test_braid_rule(self):
        w = apply_isotopy(W(3, [1, 2, 1]), "braid", 0)
        assert w.to_ints() == (2, 1, 2)
        w = apply_isotopy(W(3, [-2, -1, -2]), "braid", 0)
        assert w.to_ints() == (-1, -2, -1)

    def test_conjugation_rules(self):
        w = apply_isotopy(W(3, [1, 2, -1]), "conj_fwd", 0)
        assert w.to_ints() == (-2, 1, 2)
        w = apply_isotopy(W(3, [-1, 2, 1]), "conj_rev", 0)
        assert w.to_ints() == (2, 1, -2)

    def test_rules_preserve_braid(self):
        rng = random.Random(64)
        for _ in range(40):
            m = rng.randint(2, 6)
            length = rng.randint(0, 8)
            w = W(m, [rng.choice([1, -1]) * rng.randint(1, m - 1) for _ in range(length)])
            for rule, pos in isotopy_moves(w):
                assert braids_equal(w, apply_isotopy(w, rule, pos))

    def test_replace_checks_equality(self):
        w = W(3, [1, 2, 1])
        assert apply_isotopy(w, "replace", replacement=(2, 1, 2)).to_ints() == (2, 1, 2)
        with pytest.raises(ValueError):
            apply_isotopy(w, "replace", replacement=(1,))

    def test_pattern_mismatch(self):
        with pytest.raises(ValueError):
            apply_isotopy(W(3, [1, 2]), "commute", 0)


class TestMoveRecords:
    def test_json_round_trip_all_kinds(self):
        records = [
            MoveRecord.make("double_coset", side="top", hilden=HildenWord.single(2, 1)),
            MoveRecord.make("pocket", side="bottom", hilden=cap_twist(2, 2)),
            MoveRecord.make("flip", case="iv", k=None, end="bottom", split_at=1),
            MoveRecord.make("micro_flip", k=2, position=1, split_at=0),
            MoveRecord.make("stabilize"),
            MoveRecord.make("destabilize"),
            MoveRecord.make("isotopy", rule="commute", pos=3),
            MoveRecord.make("isotopy", rule="replace", word=(1, -2)),
        ]
        for record in records:
            assert MoveRecord.from_json_dict(record.to_json_dict()) == record

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            MoveRecord.make("teleport")

    def test_stabilize_destabilize_records(self):
        p = P(1, [])
        up = apply_record(p, MoveRecord.make("stabilize"))
        assert up.bridge_index == 2
        down = apply_record(up, MoveRecord.make("destabilize"))
        assert down == p

    def test_destabilize_replay_failure(self):
        with pytest.raises(ReplayError):
            apply_record(P(2, [1]), MoveRecord.make("destabilize"))

    def test_bad_parameters_fail_replay(self):
        with pytest.raises(ReplayError):
            apply_record(P(2, [2]), MoveRecord.make("flip", case="iv", k=None,
                                                    end="bottom", split_at=9))

    def test_every_kind_preserves_invariant(self):
        rng = random.Random(70)
        p = P(2, [2, -1])
        base = invariant(p)
        moves = [
            MoveRecord.make("double_coset", side="top", hilden=HildenWord.single(2, 1)),
            MoveRecord.make("pocket", side="bottom", hilden=cap_twist(2, 2)),
            MoveRecord.make("flip", case="v", k=None, end="top", split_at=1),
            MoveRecord.make("micro_flip", k=4, position=1, split_at=2),
            MoveRecord.make("isotopy", rule="replace", word=(2, -1)),
        ]
        for record in moves:
            q = apply_record(p, record)
            assert q.bridge_index == p.bridge_index
            assert invariants_equal(base, invariant(q))
        up = apply_record(p, MoveRecord.make("stabilize"))
        assert up.bridge_index == p.bridge_index + 1
        assert invariants_equal(base, invariant(up))

    def test_log_json_round_trip(self):
        p = P(2, [2])
        _out, log = pocket_move(p, "bottom", HildenWord(2, ((0, 1), (2, -1))))
        restored = MoveLog.from_json(log.to_json())
        assert restored.replay() == log.replay()
        assert restored.to_json() == log.to_json()
