"""The move calculus on plats.

Move kinds:

* double coset moves: multiply the word on the top (prepend) or bottom
  (append) by an element of the plat-preserving subgroup of B_2n, given as a
  word in its generating set sigma_1, sigma_2 sigma_1^2 sigma_2, and
  sigma_2i sigma_{2i-1} sigma_{2i+1} sigma_2i for 1 <= i <= n-1;
* flip moves: insert one of six explicit words at a split point A|B of the
  braid word (the top-bridge variants insert the mirrored word, i.e. the
  letters reversed with signs flipped);
* micro flips: the flip word computed in the sub braid group on an even-size
  contiguous band of strands, embedded by shifting indices;
* pocket moves: compiled to a sequence of single-generator double coset
  moves (their factorization is what the returned log records);
* stabilization / destabilization (delegated to the plat module);
* braid isotopies: positional rewrites (far commutation, the braid relation
  and its mixed-sign conjugate forms) plus verified whole-word replacement.

Every application returns a freely reduced word; free reduction never
changes the braid, so records replay deterministically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterator, Optional

from .braid import BraidWord, Letter, braids_equal, free_reduce, full_twist
from .errors import ParseError, ReplayError
from .plat import PlatPresentation, destabilize, stabilize

FLIP_CASES = ("i", "ii", "iii", "iv", "v", "vi")


def hilden_generators(n: int) -> list[BraidWord]:
    """Generating set of the plat-preserving subgroup of B_2n.

    Returns sigma_1, sigma_2 sigma_1^2 sigma_2 (for n >= 2), and the cap-band
    generators sigma_2i sigma_{2i-1} sigma_{2i+1} sigma_2i for 1 <= i <= n-1,
    all as words on 2n strands.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    gens = [BraidWord.from_ints(2 * n, [1])]
    if n >= 2:
        gens.append(BraidWord.from_ints(2 * n, [2, 1, 1, 2]))
    for i in range(1, n):
        gens.append(BraidWord.from_ints(2 * n, [2 * i, 2 * i - 1, 2 * i + 1, 2 * i]))
    return gens


@dataclass(frozen=True)
class HildenWord:
    """A word in the generating set above; factors are (generator id, sign).

    Generator ids index `hilden_generators(n)`: 0 is sigma_1, 1 the cuff
    twist word (n >= 2), and 1 + i the i-th band generator.
    """

    n: int
    factors: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        count = len(hilden_generators(self.n))
        for gid, sign in self.factors:
            if not 0 <= gid < count:
                raise ValueError(f"generator id {gid} out of range for n={self.n}")
            if sign not in (-1, 1):
                raise ValueError(f"factor sign must be -1 or +1, got {sign}")

    @property
    def strands(self) -> int:
        return 2 * self.n

    @classmethod
    def identity(cls, n: int) -> "HildenWord":
        return cls(n, ())

    @classmethod
    def single(cls, n: int, gid: int, sign: int = 1) -> "HildenWord":
        return cls(n, ((gid, sign),))

    def inverse(self) -> "HildenWord":
        return HildenWord(self.n, tuple((g, -s) for g, s in reversed(self.factors)))

    def __mul__(self, other: "HildenWord") -> "HildenWord":
        if self.n != other.n:
            raise ValueError("cannot multiply words for different n")
        return HildenWord(self.n, self.factors + other.factors)

    def expand(self) -> BraidWord:
        """Spell the word out in Artin letters."""
        gens = hilden_generators(self.n)
        letters: list[Letter] = []
        for gid, sign in self.factors:
            word = gens[gid] if sign > 0 else gens[gid].inverse()
            letters.extend(word.letters)
        return BraidWord(2 * self.n, tuple(letters))


def cap_twist(n: int, k: int) -> HildenWord:
    """The twist of cap k (equal to sigma_{2k-1} in B_2n) as a generator word.

    sigma_1 is generator 0; sigma_{2k+1} is the conjugate of sigma_{2k-1} by
    the k-th band generator.
    """
    if not 1 <= k <= n:
        raise ValueError(f"cap index {k} out of range [1, {n}]")
    factors: list[tuple[int, int]] = [(0, 1)]
    for j in range(1, k):
        factors = [(1 + j, 1)] + factors + [(1 + j, -1)]
    return HildenWord(n, tuple(factors))


def apply_double_coset(p: PlatPresentation, side: str, h: HildenWord) -> PlatPresentation:
    """Multiply the word by expand(h): prepend for side="top", append for "bottom"."""
    if h.strands != p.strands:
        raise ValueError(f"Hilden word on {h.strands} strands, plat on {p.strands}")
    if side not in ("top", "bottom"):
        raise ValueError(f"side must be 'top' or 'bottom', got {side!r}")
    expanded = h.expand()
    if not expanded.letters:
        return p
    word = expanded * p.word if side == "top" else p.word * expanded
    return PlatPresentation(p.bridge_index, free_reduce(word))


def _ascending(m: int, a: int, b: int, sign: int = 1) -> list[Letter]:
    return [Letter(i, sign) for i in range(a, b + 1)]


def _descending(m: int, a: int, b: int, sign: int = -1) -> list[Letter]:
    return [Letter(i, sign) for i in range(a, b - 1, -1)]


def flip_insertion(case: str, n: int, k: int | None = None) -> BraidWord:
    """The braid word inserted by the flip move, per case.

    Cases "i" and "ii" flip between the k-th and (k+1)-st strands (into and
    out of the plane respectively) and need 1 <= k <= 2n-1; cases "iii"-"vi"
    fix k at one end.
    """
    m = 2 * n
    if m < 2:
        raise ValueError("flip needs at least 2 strands")
    if case in ("i", "ii"):
        if k is None or not 1 <= k <= m - 1:
            raise ValueError(f"case ({case}) needs k in [1, {m - 1}], got {k}")
    elif case in ("iii", "iv", "v", "vi"):
        implied = {"iii": 1, "iv": 1, "v": m - 1, "vi": m - 1}[case]
        if k is not None and k != implied:
            raise ValueError(f"case ({case}) fixes k = {implied}, got {k}")
    else:
        raise ValueError(f"unknown flip case {case!r}")

    if case == "i":
        letters = _ascending(m, 1, k - 1) * k + _descending(m, m - 1, k + 1) * (m - k)
    elif case == "ii":
        letters = _descending(m, k - 1, 1) * k + _ascending(m, k + 1, m - 1) * (m - k)
    elif case == "iii":
        letters = _descending(m, m - 1, 2) * (m - 1)
    elif case == "iv":
        letters = _ascending(m, 2, m - 1) * (m - 1)
    elif case == "v":
        letters = _ascending(m, 1, m - 2) * (m - 1)
    else:  # vi
        letters = _descending(m, m - 2, 1) * (m - 1)
    return BraidWord(m, tuple(letters))


def apply_flip(
    p: PlatPresentation,
    split_at: int,
    case: str,
    k: int | None = None,
    end: str = "bottom",
) -> PlatPresentation:
    """Insert the flip word (mirrored for end="top") at the split point A|B."""
    if not 0 <= split_at <= len(p.word):
        raise ValueError(f"split point {split_at} out of range [0, {len(p.word)}]")
    if end not in ("top", "bottom"):
        raise ValueError(f"end must be 'top' or 'bottom', got {end!r}")
    insertion = flip_insertion(case, p.bridge_index, k)
    if end == "top":
        insertion = insertion.inverse()  # reversed letters, flipped signs
    if not insertion.letters:
        return p
    letters = (
        p.word.letters[:split_at] + insertion.letters + p.word.letters[split_at:]
    )
    return PlatPresentation(p.bridge_index, free_reduce(BraidWord(p.strands, letters)))


def micro_flip_insertion(n: int, k: int, position: int) -> BraidWord:
    """Flip word for a contiguous band of k strands starting at `position`.

    The band is flipped between its first two strands: the insertion is the
    out-of-plane flip word of the k-strand braid group with indices shifted
    by position - 1.  With the full band (k = 2n, position 1) this is exactly
    the case-(iv) flip.
    """
    m = 2 * n
    if k % 2 != 0:
        raise ValueError(f"band width must be even, got {k}")
    if k < 2 or position < 1 or position + k - 1 > m:
        raise ValueError(f"band [{position}, {position + k - 1}] out of range for {m} strands")
    letters = [Letter(position + j - 1, 1) for j in range(2, k)] * (k - 1)
    return BraidWord(m, tuple(letters))


def micro_flip(p: PlatPresentation, split_at: int, k: int, position: int) -> PlatPresentation:
    """Insert the band-restricted flip word at the split point."""
    if not 0 <= split_at <= len(p.word):
        raise ValueError(f"split point {split_at} out of range [0, {len(p.word)}]")
    insertion = micro_flip_insertion(p.bridge_index, k, position)
    if not insertion.letters:
        return p
    letters = (
        p.word.letters[:split_at] + insertion.letters + p.word.letters[split_at:]
    )
    return PlatPresentation(p.bridge_index, free_reduce(BraidWord(p.strands, letters)))


def garside_slide(A: BraidWord, B: BraidWord, n: int) -> tuple[PlatPresentation, PlatPresentation]:
    """The plats defined by A.delta.B and A.B.delta; the braids are equal.

    delta is the full twist, which is central, so sliding B across it changes
    the word but not the braid.
    """
    m = 2 * n
    if A.strands != m or B.strands != m:
        raise ValueError(f"A and B must live on {m} strands")
    delta = full_twist(m)
    first = PlatPresentation(n, free_reduce(A * delta * B))
    second = PlatPresentation(n, free_reduce(A * B * delta))
    return first, second


# ---------------------------------------------------------------------------
# Braid isotopy rewrites
# ---------------------------------------------------------------------------

ISOTOPY_RULES = ("commute", "braid", "conj_fwd", "conj_rev", "replace")


def apply_isotopy(word: BraidWord, rule: str, pos: int = 0,
                  replacement: "tuple[int, ...] | None" = None) -> BraidWord:
    """Apply one positional rewrite; the result is freely reduced.

    commute:   sigma_i^a sigma_j^b -> sigma_j^b sigma_i^a          (|i-j| >= 2)
    braid:     sigma_i^s sigma_j^s sigma_i^s -> sigma_j^s sigma_i^s sigma_j^s   (|i-j| = 1)
    conj_fwd:  sigma_i^s sigma_j^s sigma_i^-s -> sigma_j^-s sigma_i^s sigma_j^s
    conj_rev:  sigma_i^-s sigma_j^s sigma_i^s -> sigma_j^s sigma_i^s sigma_j^-s
    replace:   substitute a whole word after checking braid equality exactly.
    """
    L = word.letters
    if rule == "replace":
        if replacement is None:
            raise ValueError("replace needs a replacement word")
        candidate = BraidWord.from_ints(word.strands, replacement)
        if not braids_equal(word, candidate):
            raise ValueError("replacement is not braid-equal to the current word")
        return free_reduce(candidate)
    if rule == "commute":
        if pos + 1 >= len(L) or abs(L[pos].index - L[pos + 1].index) < 2:
            raise ValueError(f"no far commutation at position {pos}")
        out = L[:pos] + (L[pos + 1], L[pos]) + L[pos + 2:]
        return free_reduce(BraidWord(word.strands, out))
    if rule in ("braid", "conj_fwd", "conj_rev"):
        if pos + 2 >= len(L):
            raise ValueError(f"no triple at position {pos}")
        a, b, c = L[pos], L[pos + 1], L[pos + 2]
        i, j = a.index, b.index
        if abs(i - j) != 1 or c.index != i:
            raise ValueError(f"no adjacent-index triple at position {pos}")
        s = a.sign
        if rule == "braid":
            if not (b.sign == s and c.sign == s):
                raise ValueError(f"no uniform-sign triple at position {pos}")
            new = (Letter(j, s), Letter(i, s), Letter(j, s))
        elif rule == "conj_fwd":
            if not (b.sign == s and c.sign == -s):
                raise ValueError(f"no conj_fwd pattern at position {pos}")
            new = (Letter(j, -s), Letter(i, s), Letter(j, s))
        else:
            if not (b.sign == -s and c.sign == -s):
                raise ValueError(f"no conj_rev pattern at position {pos}")
            new = (Letter(j, -s), Letter(i, -s), Letter(j, s))
        out = L[:pos] + new + L[pos + 3:]
        return free_reduce(BraidWord(word.strands, out))
    raise ValueError(f"unknown isotopy rule {rule!r}")


def isotopy_moves(word: BraidWord) -> Iterator[tuple[str, int]]:
    """Enumerate every (rule, position) pair applicable to the word."""
    L = word.letters
    for pos in range(len(L) - 1):
        if abs(L[pos].index - L[pos + 1].index) >= 2:
            yield ("commute", pos)
    for pos in range(len(L) - 2):
        a, b, c = L[pos], L[pos + 1], L[pos + 2]
        if abs(a.index - b.index) == 1 and c.index == a.index:
            s = a.sign
            if b.sign == s and c.sign == s:
                yield ("braid", pos)
            elif b.sign == s and c.sign == -s:
                yield ("conj_fwd", pos)
            elif b.sign == -s and c.sign == -s:
                yield ("conj_rev", pos)


# ---------------------------------------------------------------------------
# Move records and logs
# ---------------------------------------------------------------------------

RECORD_KINDS = (
    "double_coset",
    "pocket",
    "flip",
    "micro_flip",
    "stabilize",
    "destabilize",
    "isotopy",
)

# Record kinds that keep the bridge index constant.
CONSTANT_BRIDGE_KINDS = ("double_coset", "pocket", "flip", "micro_flip", "isotopy")


@dataclass(frozen=True)
class MoveRecord:
    """One replayable move; `params` depend on the kind."""

    kind: str
    params: tuple[tuple[str, Any], ...] = ()

    @classmethod
    def make(cls, kind: str, **params: Any) -> "MoveRecord":
        if kind not in RECORD_KINDS:
            raise ValueError(f"unknown move kind {kind!r}")
        return cls(kind, tuple(sorted(params.items())))

    def get(self, name: str, default: Any = None) -> Any:
        for key, value in self.params:
            if key == name:
                return value
        return default

    def to_json_dict(self) -> dict[str, Any]:
        params: dict[str, Any] = {}
        for key, value in self.params:
            if isinstance(value, HildenWord):
                params[key] = {"n": value.n, "factors": [list(f) for f in value.factors]}
            elif isinstance(value, tuple):
                params[key] = list(value)
            else:
                params[key] = value
        return {"kind": self.kind, "params": params}

    @classmethod
    def from_json_dict(cls, obj: dict[str, Any]) -> "MoveRecord":
        kind = obj["kind"]
        params = dict(obj.get("params", {}))
        if "hilden" in params:
            h = params["hilden"]
            params["hilden"] = HildenWord(
                int(h["n"]), tuple((int(g), int(s)) for g, s in h["factors"])
            )
        if "word" in params:
            params["word"] = tuple(int(t) for t in params["word"])
        return cls.make(kind, **params)


def apply_record(p: PlatPresentation, record: MoveRecord) -> PlatPresentation:
    """Apply one move record; raises ReplayError if it does not fit the plat."""
    try:
        kind = record.kind
        if kind in ("double_coset", "pocket"):
            return apply_double_coset(p, record.get("side"), record.get("hilden"))
        if kind == "flip":
            return apply_flip(
                p,
                record.get("split_at"),
                record.get("case"),
                record.get("k"),
                record.get("end", "bottom"),
            )
        if kind == "micro_flip":
            return micro_flip(
                p, record.get("split_at"), record.get("k"), record.get("position")
            )
        if kind == "stabilize":
            return stabilize(p)
        if kind == "destabilize":
            result = destabilize(p)
            if result is None:
                raise ReplayError("word is not in destabilizable form")
            return result
        if kind == "isotopy":
            word = apply_isotopy(
                p.word, record.get("rule"), record.get("pos", 0), record.get("word")
            )
            return PlatPresentation(p.bridge_index, word)
        raise ReplayError(f"unknown record kind {kind!r}")
    except ReplayError:
        raise
    except (ValueError, TypeError) as exc:
        raise ReplayError(str(exc)) from exc


@dataclass
class MoveLog:
    """An initial plat plus an ordered, replayable list of move records."""

    initial: PlatPresentation
    records: list[MoveRecord] = field(default_factory=list)

    def replay_states(self) -> Iterator[PlatPresentation]:
        """Yield the initial plat and the plat after each record."""
        state = self.initial
        yield state
        for step, record in enumerate(self.records):
            try:
                state = apply_record(state, record)
            except ReplayError as exc:
                raise ReplayError(f"step {step}: {exc}", step=step) from exc
            yield state

    def replay(self) -> PlatPresentation:
        state = self.initial
        for state in self.replay_states():
            pass
        return state

    def to_json(self) -> str:
        from .plat import plat_to_json

        obj = {
            "initial": json.loads(plat_to_json(self.initial)),
            "records": [r.to_json_dict() for r in self.records],
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "MoveLog":
        from .plat import plat_from_json

        try:
            obj = json.loads(text)
            initial = plat_from_json(json.dumps(obj["initial"]))
            records = [MoveRecord.from_json_dict(r) for r in obj["records"]]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad move log JSON: {exc}") from exc
        return cls(initial, records)


def pocket_move(
    p: PlatPresentation, side: str, h: HildenWord
) -> tuple[PlatPresentation, MoveLog]:
    """Bridge-dragging move, compiled to single-generator double coset moves.

    The result equals `apply_double_coset(p, side, h)`; the log records the
    factorization, one record per factor of the generator word.
    """
    result = apply_double_coset(p, side, h)
    factors = list(h.factors)
    if side == "top":
        # Prepending f1...fk happens innermost-first.
        ordered = list(reversed(factors))
    else:
        ordered = factors
    records = [
        MoveRecord.make("double_coset", side=side, hilden=HildenWord.single(h.n, gid, sign))
        for gid, sign in ordered
    ]
    return result, MoveLog(p, records)


def special_configuration(
    p: PlatPresentation, side: str, max_steps: int = 200
) -> tuple[PlatPresentation, MoveLog]:
    """Clear every crossing off the chosen outermost strand; see simplify module."""
    from .simplify import clear_outer_strand

    return clear_outer_strand(p, side, max_steps=max_steps)
