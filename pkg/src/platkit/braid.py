"""Braid words on m strands, their rewrites, and an exact equality oracle.

Words are sequences of signed Artin generator letters.  Equality in the braid
group is decided through the classical faithful action on a free group
F_m = <x_1, ..., x_m>, where the generator with index i maps

    x_i     |->  x_i x_{i+1} x_i^-1
    x_{i+1} |->  x_i

and fixes every other x_j; an inverse letter acts by the inverse substitution.

Composition convention (used everywhere, including strand permutations):
letters act left to right, i.e. the first letter of a word is applied first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .errors import ParseError, ResourceLimitError

# Free words are tuples of signed generator indices: +j stands for x_j and
# -j for its inverse.  They are kept freely reduced at all times.
FreeWord = tuple[int, ...]

# Images under the free-group action are reduced eagerly after every
# substitution; words beyond this cap abort instead of thrashing.
FREE_WORD_CAP = 10**6


class Letter(NamedTuple):
    """One signed Artin generator: sigma_index^sign with sign in {-1, +1}."""

    index: int
    sign: int

    def inverse(self) -> "Letter":
        return Letter(self.index, -self.sign)


@dataclass(frozen=True)
class BraidWord:
    """A word in the braid group on `strands` strands.

    The empty word is the identity braid.  Every letter index must lie in
    [1, strands - 1].
    """

    strands: int
    letters: tuple[Letter, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.strands < 2:
            raise ValueError(f"braid group needs at least 2 strands, got {self.strands}")
        for pos, letter in enumerate(self.letters):
            if not 1 <= letter.index <= self.strands - 1:
                raise ValueError(
                    f"letter {pos}: index {letter.index} out of range [1, {self.strands - 1}]"
                )
            if letter.sign not in (-1, 1):
                raise ValueError(f"letter {pos}: sign must be -1 or +1, got {letter.sign}")

    @classmethod
    def from_ints(cls, strands: int, ints: "list[int] | tuple[int, ...]") -> "BraidWord":
        """Build a word from signed indices: +i means sigma_i, -i its inverse."""
        return cls(strands, tuple(Letter(abs(t), 1 if t > 0 else -1) for t in ints))

    def to_ints(self) -> tuple[int, ...]:
        return tuple(l.index * l.sign for l in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.strands != other.strands:
            raise ValueError("cannot concatenate words on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(l.inverse() for l in reversed(self.letters)))

    def to_text(self) -> str:
        """Render as whitespace-separated tokens `s<k>` / `s<k>'` (prime = inverse)."""
        return " ".join(f"s{l.index}" + ("'" if l.sign < 0 else "") for l in self.letters)

    def __str__(self) -> str:
        return self.to_text() if self.letters else "<identity>"


_TOKEN_RE = re.compile(r"^s([0-9]+)(')?$")


def parse_word(text: str, strands: int) -> BraidWord:
    """Parse the `s<k>` / `s<k>'` token format; rejects indices out of range.

    Token positions in errors are 1-based.
    """
    letters: list[Letter] = []
    for pos, token in enumerate(text.split(), start=1):
        m = _TOKEN_RE.match(token)
        if not m:
            raise ParseError(f"malformed token {token!r} at token {pos}", position=pos)
        index = int(m.group(1))
        if not 1 <= index <= strands - 1:
            raise ParseError(
                f"index {index} out of range [1, {strands - 1}] at token {pos}", position=pos
            )
        letters.append(Letter(index, -1 if m.group(2) else 1))
    return BraidWord(strands, tuple(letters))


def free_reduce(word: BraidWord) -> BraidWord:
    """Remove adjacent sigma_i^s sigma_i^-s pairs until none remain."""
    stack: list[Letter] = []
    for letter in word.letters:
        if stack and stack[-1].index == letter.index and stack[-1].sign == -letter.sign:
            stack.pop()
        else:
            stack.append(letter)
    if len(stack) == len(word.letters):
        return word
    return BraidWord(word.strands, tuple(stack))


@dataclass(frozen=True)
class Permutation:
    """Bijection on {1..m}; images[p-1] is the image of p."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.images)}: {self.images}")

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    def __call__(self, p: int) -> int:
        return self.images[p - 1]

    def then(self, other: "Permutation") -> "Permutation":
        """Composite that applies `self` first and `other` after."""
        return Permutation(tuple(other.images[i - 1] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for p, q in enumerate(self.images, start=1):
            inv[q - 1] = p
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(q == p for p, q in enumerate(self.images, start=1))


def permutation_of(word: BraidWord) -> Permutation:
    """Underlying permutation: strand starting at top position p ends at images[p-1].

    Each letter swaps the strands at positions (i, i+1); letters are applied
    in word order (top of the braid first).
    """
    m = word.strands
    at_pos = list(range(m + 1))  # at_pos[position] = strand occupying it
    for letter in word.letters:
        i = letter.index
        at_pos[i], at_pos[i + 1] = at_pos[i + 1], at_pos[i]
    images = [0] * m
    for position in range(1, m + 1):
        images[at_pos[position] - 1] = position
    return Permutation(tuple(images))


def reduce_free_word(seq: "list[int] | tuple[int, ...]") -> FreeWord:
    """Freely reduce a sequence of signed free-group letters."""
    stack: list[int] = []
    for t in seq:
        if stack and stack[-1] == -t:
            stack.pop()
        else:
            stack.append(t)
    return tuple(stack)


def _substitute(image: list[int], i: int, rep_i: tuple[int, ...], rep_i1: tuple[int, ...],
                cap: int) -> list[int]:
    # Replace x_i / x_{i+1} occurrences by their images, cancelling on the fly.
    out: list[int] = []
    j = i + 1
    for t in image:
        a = abs(t)
        if a == i:
            rep = rep_i if t > 0 else tuple(-u for u in reversed(rep_i))
        elif a == j:
            rep = rep_i1 if t > 0 else tuple(-u for u in reversed(rep_i1))
        else:
            rep = (t,)
        for u in rep:
            if out and out[-1] == -u:
                out.pop()
            else:
                out.append(u)
        if len(out) > cap:
            raise ResourceLimitError(
                f"free word exceeded {cap} letters during the braid action"
            )
    return out


def artin_action(word: BraidWord) -> tuple[FreeWord, ...]:
    """Images of the free generators x_1..x_m under the word's automorphism.

    Letters act left to right; outputs are freely reduced.
    """
    m = word.strands
    images: list[list[int]] = [[j] for j in range(1, m + 1)]
    for letter in word.letters:
        i = letter.index
        if letter.sign > 0:
            rep_i: tuple[int, ...] = (i, i + 1, -i)
            rep_i1: tuple[int, ...] = (i,)
        else:
            rep_i = (i + 1,)
            rep_i1 = (-(i + 1), i, i + 1)
        images = [_substitute(img, i, rep_i, rep_i1, FREE_WORD_CAP) for img in images]
    return tuple(tuple(img) for img in images)


def compose_actions(later: tuple[FreeWord, ...], earlier: tuple[FreeWord, ...]) -> tuple[FreeWord, ...]:
    """Action of w.w' from the actions of w' (`later`) and w (`earlier`)."""
    out: list[FreeWord] = []
    for img in earlier:
        acc: list[int] = []
        for t in img:
            rep = later[abs(t) - 1]
            if t < 0:
                rep = tuple(-u for u in reversed(rep))
            for u in rep:
                if acc and acc[-1] == -u:
                    acc.pop()
                else:
                    acc.append(u)
        out.append(tuple(acc))
    return tuple(out)


def braids_equal(w1: BraidWord, w2: BraidWord) -> bool:
    """Exact equality in B_m via the faithful free-group action."""
    if w1.strands != w2.strands:
        raise ValueError(
            f"strand count mismatch: {w1.strands} vs {w2.strands}"
        )
    if w1.letters == w2.letters:
        return True
    return artin_action(w1) == artin_action(w2)


def full_twist(m: int) -> BraidWord:
    """The central full twist (sigma_1 ... sigma_{m-1})^m of B_m."""
    if m < 2:
        raise ValueError(f"full twist needs m >= 2, got {m}")
    block = [Letter(i, 1) for i in range(1, m)]
    return BraidWord(m, tuple(block * m))
