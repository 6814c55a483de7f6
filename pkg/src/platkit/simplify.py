"""Bounded search that drives plat words to split/composite form.

The searcher is a deterministic beam search over constant-bridge-index moves:
free reduction (applied to every candidate), positional braid-isotopy
rewrites, multiplication by the plat-preserving generators and their
inverses on either side, and (for the composite goal) flip insertions at
split points where an existing flip word is detected and can be cancelled.

Scores are lexicographic (band occurrence count, word length, word); states
are deduplicated by their freely reduced word, which never merges distinct
words.  Budgets bound beam width, depth, word length and wall time; running
out is reported as an exhausted result, not an error, since no word-level
bound on the required move sequence is known.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .braid import BraidWord, Letter, free_reduce
from .errors import BudgetError, OracleMismatchError, ReplayError, ResourceLimitError
from .invariants import invariant, invariants_equal
from .moves import (
    FLIP_CASES,
    HildenWord,
    MoveLog,
    MoveRecord,
    apply_isotopy,
    apply_record,
    flip_insertion,
    hilden_generators,
    cap_twist,
    isotopy_moves,
)
from .plat import PlatPresentation, is_composite_word, is_split_word

_UNREACHABLE = 1 << 30


@dataclass(frozen=True)
class SearchBudget:
    beam_width: int = 64
    max_depth: int = 24
    max_word_length: int = 64
    time_cap: float = 60.0

    def __post_init__(self) -> None:
        if min(self.beam_width, self.max_depth, self.max_word_length) < 1 or self.time_cap <= 0:
            raise ValueError("budget fields must all be positive")


@dataclass(frozen=True)
class SimplifyResult:
    outcome: str  # "solved" | "exhausted"
    plat: PlatPresentation
    log: Optional[MoveLog]
    score: int

    @property
    def solved(self) -> bool:
        return self.outcome == "solved"

    def to_json_dict(self) -> dict:
        import json

        from .plat import plat_to_json

        obj: dict = {
            "outcome": self.outcome,
            "plat": json.loads(plat_to_json(self.plat)),
            "score": self.score,
        }
        if self.log is not None:
            obj["log"] = json.loads(self.log.to_json())
        return obj


def score_split(p: PlatPresentation) -> int:
    """Fewest occurrences of sigma_{2i} over the bands i in [1, n-1].

    Zero exactly when the word is split.  A 2-strand plat has no band to
    clear, so it scores one above its word length (never zero).
    """
    n = p.bridge_index
    if n < 2:
        return len(p.word) + 1
    counts = {2 * i: 0 for i in range(1, n)}
    for letter in p.word.letters:
        if letter.index in counts:
            counts[letter.index] += 1
    return min(counts.values())


def score_composite(p: PlatPresentation) -> int:
    """Fewest occurrences of sigma_{2i+1} over interior i in [1, n-2]."""
    n = p.bridge_index
    if n < 3:
        return len(p.word) + 1
    counts = {2 * i + 1: 0 for i in range(1, n - 1)}
    for letter in p.word.letters:
        if letter.index in counts:
            counts[letter.index] += 1
    return min(counts.values())


# A search move: records to append and the resulting reduced word.
_Child = tuple[tuple[MoveRecord, ...], BraidWord]
_MoveGen = Callable[[BraidWord], Iterable[_Child]]


def _isotopy_children(word: BraidWord) -> Iterable[_Child]:
    for rule, pos in isotopy_moves(word):
        yield (
            (MoveRecord.make("isotopy", rule=rule, pos=pos),),
            apply_isotopy(word, rule, pos),
        )


def _double_coset_children(word: BraidWord, n: int) -> Iterable[_Child]:
    gens = hilden_generators(n)
    for gid in range(len(gens)):
        for sign in (1, -1):
            h = HildenWord.single(n, gid, sign)
            expanded = h.expand()
            for side in ("top", "bottom"):
                record = MoveRecord.make("double_coset", side=side, hilden=h)
                new = expanded * word if side == "top" else word * expanded
                yield (record,), free_reduce(new)


# Flip cases that are literal word inverses of each other, used to cancel a
# detected flip insertion in one move.
_INVERSE_CASE = {"iii": "iv", "iv": "iii", "v": "vi", "vi": "v"}


def _flip_children(word: BraidWord, n: int) -> Iterable[_Child]:
    letters = word.letters
    for case in ("iii", "iv", "v", "vi"):
        target = flip_insertion(case, n).letters
        span = len(target)
        if span == 0 or span > len(letters):
            continue
        for split in range(len(letters) - span + 1):
            if letters[split : split + span] == target:
                inverse_case = _INVERSE_CASE[case]
                record = MoveRecord.make(
                    "flip", case=inverse_case, k=None, end="bottom", split_at=split
                )
                new = (
                    letters[:split]
                    + flip_insertion(inverse_case, n).letters
                    + letters[split:]
                )
                yield (record,), free_reduce(BraidWord(word.strands, new))


def _beam_search(
    p0: PlatPresentation,
    scorer: Callable[[BraidWord], int],
    movegen: _MoveGen,
    budget: SearchBudget,
) -> tuple[Optional[list[MoveRecord]], PlatPresentation, int]:
    """Core loop; returns (records or None, best plat, best score)."""
    n = p0.bridge_index

    def plat_of(word: BraidWord) -> PlatPresentation:
        return PlatPresentation(n, word)

    start = p0.word
    start_score = scorer(start)
    if start_score == 0:
        return [], p0, 0

    t0 = time.monotonic()
    arena: list[tuple[int, tuple[MoveRecord, ...]]] = [(-1, ())]

    def path(idx: int) -> list[MoveRecord]:
        records: list[MoveRecord] = []
        while idx >= 0:
            parent, recs = arena[idx]
            records[:0] = recs
            idx = parent
        return records

    key0 = start.to_ints()
    visited = {key0}
    frontier: list[tuple[int, int, tuple[int, ...], BraidWord, int]] = [
        (start_score, len(start), key0, start, 0)
    ]
    best = (start_score, len(start), key0, start, 0)

    for _depth in range(budget.max_depth):
        if time.monotonic() - t0 > budget.time_cap:
            break
        children: list[tuple[int, int, tuple[int, ...], BraidWord, int]] = []
        for _score, _len, _key, word, idx in frontier:
            for records, new_word in movegen(word):
                if len(new_word) > budget.max_word_length:
                    continue
                key = new_word.to_ints()
                if key in visited:
                    continue
                visited.add(key)
                arena.append((idx, tuple(records)))
                child_idx = len(arena) - 1
                score = scorer(new_word)
                if score == 0:
                    return path(child_idx), plat_of(new_word), 0
                entry = (score, len(new_word), key, new_word, child_idx)
                children.append(entry)
                if entry[:3] < best[:3]:
                    best = entry
        if not children:
            break
        children.sort(key=lambda e: e[:3])
        frontier = children[: budget.beam_width]
    return None, plat_of(best[3]), best[0]


def _checked_oracle_equal(a: PlatPresentation, b: PlatPresentation) -> bool:
    """Oracle comparison; diagrams beyond the state-sum cap are not comparable."""
    try:
        return invariants_equal(invariant(a), invariant(b))
    except ResourceLimitError:
        return True


def _finish(
    p0: PlatPresentation,
    records: Optional[list[MoveRecord]],
    plat: PlatPresentation,
    score: int,
) -> SimplifyResult:
    if records is None:
        return SimplifyResult("exhausted", plat, None, score)
    if not _checked_oracle_equal(p0, plat):
        raise OracleMismatchError(
            "solved plat disagrees with the input under the link invariant"
        )
    return SimplifyResult("solved", plat, MoveLog(p0, records), 0)


def simplify_split(p: PlatPresentation, budget: SearchBudget | None = None) -> SimplifyResult:
    """Drive the word to split form with braid isotopies and double coset moves.

    A solved result's log therefore stays inside the double coset of the
    input.  The solved plat is re-checked against the link invariant.
    """
    budget = budget or SearchBudget()
    n = p.bridge_index

    def movegen(word: BraidWord) -> Iterable[_Child]:
        yield from _isotopy_children(word)
        yield from _double_coset_children(word, n)

    def scorer(word: BraidWord) -> int:
        return score_split(PlatPresentation(n, word))

    records, plat, score = _beam_search(p, scorer, movegen, budget)
    return _finish(p, records, plat, score)


def simplify_composite(p: PlatPresentation, budget: SearchBudget | None = None) -> SimplifyResult:
    """As `simplify_split` with an interior odd generator as the target and
    flip insertions added to the move set."""
    if p.bridge_index < 3:
        raise ValueError(
            f"composite detection needs bridge index >= 3, got {p.bridge_index}"
        )
    budget = budget or SearchBudget()
    n = p.bridge_index

    def movegen(word: BraidWord) -> Iterable[_Child]:
        yield from _isotopy_children(word)
        yield from _double_coset_children(word, n)
        yield from _flip_children(word, n)

    def scorer(word: BraidWord) -> int:
        return score_composite(PlatPresentation(n, word))

    records, plat, score = _beam_search(p, scorer, movegen, budget)
    return _finish(p, records, plat, score)


def obscure(
    p: PlatPresentation, k: int, seed: int, move_set: str = "double_coset"
) -> tuple[PlatPresentation, MoveLog]:
    """Apply k seeded random link-preserving moves; the harness inverse of the
    simplifiers.

    move_set "double_coset" draws generator multiplications only; "with_flips"
    mixes in flip insertions (the mutually inverse cases).
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if move_set not in ("double_coset", "with_flips"):
        raise ValueError(f"unknown move set {move_set!r}")
    rng = random.Random(seed)
    n = p.bridge_index
    gen_count = len(hilden_generators(n))
    state = p
    records: list[MoveRecord] = []
    for _ in range(k):
        if move_set == "with_flips" and rng.random() < 1 / 3:
            case = rng.choice(("iii", "iv", "v", "vi"))
            split = rng.randint(0, len(state.word))
            record = MoveRecord.make("flip", case=case, k=None, end="bottom", split_at=split)
        else:
            record = MoveRecord.make(
                "double_coset",
                side=rng.choice(("top", "bottom")),
                hilden=HildenWord.single(n, rng.randrange(gen_count), rng.choice((1, -1))),
            )
        state = apply_record(state, record)
        records.append(record)
    return state, MoveLog(p, records)


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of a log replay; falsy when any step fails or drifts."""

    ok: bool
    failed_step: Optional[int] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_log(log: MoveLog, cap: int | None = None) -> VerifyResult:
    """Replay a log and require the link invariant to be constant throughout."""
    try:
        states = list(log.replay_states())
    except ReplayError as exc:
        return VerifyResult(False, exc.step, str(exc))
    try:
        reference = invariant(states[0], cap)
        for step, state in enumerate(states[1:]):
            if not invariants_equal(reference, invariant(state, cap)):
                return VerifyResult(False, step, "invariant changed")
    except ResourceLimitError as exc:
        return VerifyResult(False, None, str(exc))
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# Special configuration: clear the outermost strand
# ---------------------------------------------------------------------------


def _outer_index(p: PlatPresentation, side: str) -> int:
    if side == "left":
        return 1
    if side == "right":
        return p.strands - 1
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def _end_clear_children(word: BraidWord, n: int, t: int) -> Iterable[_Child]:
    # A word boundary letter on the outer cap is a cap twist: undo it with a
    # double coset move, then substitute the braid-equal shorter word.
    cap = cap_twist(n, 1 if t == 1 else n)
    letters = word.letters
    if letters and letters[0].index == t:
        h = cap if letters[0].sign < 0 else cap.inverse()
        rest = free_reduce(BraidWord(word.strands, letters[1:]))
        yield (
            MoveRecord.make("double_coset", side="top", hilden=h),
            MoveRecord.make("isotopy", rule="replace", word=rest.to_ints()),
        ), rest
    if letters and letters[-1].index == t:
        h = cap if letters[-1].sign < 0 else cap.inverse()
        rest = free_reduce(BraidWord(word.strands, letters[:-1]))
        yield (
            MoveRecord.make("double_coset", side="bottom", hilden=h),
            MoveRecord.make("isotopy", rule="replace", word=rest.to_ints()),
        ), rest


def _pair_clear_children(word: BraidWord, n: int, t: int) -> Iterable[_Child]:
    # Two occurrences of sigma_t with only far-commuting letters between them
    # either cancel outright or are absorbed by a flip insertion.
    m = word.strands
    letters = word.letters
    positions = [i for i, l in enumerate(letters) if l.index == t]
    for a_pos, b_pos in zip(positions, positions[1:]):
        between = letters[a_pos + 1 : b_pos]
        if any(abs(l.index - t) < 2 for l in between):
            continue
        first, second = letters[a_pos], letters[b_pos]
        if first.sign == -second.sign:
            # slide together and cancel
            new = letters[:a_pos] + between + letters[b_pos + 1 :]
            reduced = free_reduce(BraidWord(m, new))
            yield (
                MoveRecord.make("isotopy", rule="replace", word=reduced.to_ints()),
            ), reduced
            continue
        # equal signs: a flip word ending (or starting) with sigma_t^-2s eats the pair
        if t == m - 1:
            case = "i" if first.sign > 0 else "ii"
            slid = letters[:a_pos] + between + (first, second) + letters[b_pos + 1 :]
            slid_word = free_reduce(BraidWord(m, slid))
            split = a_pos + len(between)
            insertion = flip_insertion(case, n, m - 2)
        else:
            case = "ii" if first.sign > 0 else "i"
            slid = letters[:a_pos] + (first, second) + between + letters[b_pos + 1 :]
            slid_word = free_reduce(BraidWord(m, slid))
            split = a_pos + 2
            insertion = flip_insertion(case, n, 2)
        if slid_word.letters != tuple(slid):
            continue  # sliding interfered with neighbours; skip this pair
        new_letters = slid[:split] + insertion.letters + slid[split:]
        reduced = free_reduce(BraidWord(m, new_letters))
        yield (
            MoveRecord.make("isotopy", rule="replace", word=tuple(
                l.index * l.sign for l in slid
            )),
            MoveRecord.make("flip", case=case, k=m - 2 if t == m - 1 else 2,
                            end="bottom", split_at=split),
        ), reduced


def clear_outer_strand(
    p: PlatPresentation, side: str, max_steps: int = 200
) -> tuple[PlatPresentation, MoveLog]:
    """Produce an equal plat whose outermost strand carries no crossings.

    side "right" removes every sigma_{2n-1}; side "left" every sigma_1.  The
    letters are cleared with cap twists at the word ends, cancelling pairs,
    and flip insertions that absorb same-sign pairs; a budget error is raised
    if the configured number of search steps is not enough.
    """
    t = _outer_index(p, side)
    n = p.bridge_index

    def scorer(word: BraidWord) -> int:
        return sum(1 for l in word.letters if l.index == t)

    def movegen(word: BraidWord) -> Iterable[_Child]:
        yield from _end_clear_children(word, n, t)
        yield from _pair_clear_children(word, n, t)
        yield from _isotopy_children(word)

    budget = SearchBudget(
        beam_width=32,
        max_depth=max_steps,
        max_word_length=max(len(p.word) + 64, 64),
        time_cap=60.0,
    )
    records, plat, score = _beam_search(p, scorer, movegen, budget)
    if records is None:
        raise BudgetError(
            f"could not clear strand within {max_steps} steps (best residue {score})"
        )
    return plat, MoveLog(p, records)
