"""Plat presentations: capped braids, their diagrams, and detection predicates.

A plat on 2n strands caps strand pairs (1,2), (3,4), ..., (2n-1,2n) with n
arcs at the top and the same n arcs at the bottom.  Strand positions are
1-based left to right; sigma_i crosses strands i and i+1.  Diagram arcs are
labelled deterministically by a top-to-bottom, left-to-right scan so that
exports are bit-stable across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .braid import BraidWord, Letter, free_reduce, permutation_of
from .errors import ParseError


@dataclass(frozen=True)
class PlatPresentation:
    """Bridge index n plus a braid word on 2n strands."""

    bridge_index: int
    word: BraidWord

    def __post_init__(self) -> None:
        if self.bridge_index < 1:
            raise ValueError(f"bridge index must be >= 1, got {self.bridge_index}")
        if self.word.strands != 2 * self.bridge_index:
            raise ValueError(
                f"word on {self.word.strands} strands does not match bridge index "
                f"{self.bridge_index}"
            )

    @classmethod
    def from_ints(cls, n: int, ints: "list[int] | tuple[int, ...]") -> "PlatPresentation":
        return cls(n, BraidWord.from_ints(2 * n, ints))

    @property
    def strands(self) -> int:
        return 2 * self.bridge_index

    def __str__(self) -> str:
        return f"plat(n={self.bridge_index}, {self.word})"


def cap_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """The fixed pairing (1,2), (3,4), ..., used identically at top and bottom."""
    return tuple((2 * k - 1, 2 * k) for k in range(1, n + 1))


class Crossing(NamedTuple):
    """One 4-valent diagram vertex.

    Arc labels sit at the four corners: nw/ne enter from above, sw/se leave
    below.  The strand nw-se is the over strand when sign is +1, the strand
    ne-sw when sign is -1.  `column` is the generator index (the crossing
    occupies strand positions column, column+1) and `row` the letter position.
    """

    sign: int
    nw: int
    ne: int
    sw: int
    se: int
    column: int
    row: int


@dataclass(frozen=True)
class LinkDiagram:
    """Planar diagram of a plat closure: crossings plus cap-merged arcs.

    Arc identifiers are 0..arc_count-1; every arc occurs exactly twice among
    crossing corners.  Components with no crossings at all are counted in
    `free_loops`.
    """

    strands: int
    crossings: tuple[Crossing, ...]
    arc_count: int
    free_loops: int = 0

    def __post_init__(self) -> None:
        seen: dict[int, int] = {}
        for c in self.crossings:
            for a in (c.nw, c.ne, c.sw, c.se):
                seen[a] = seen.get(a, 0) + 1
        for a, count in seen.items():
            if count != 2:
                raise ValueError(f"arc {a} occurs {count} times, expected exactly 2")


def plat_closure_diagram(p: PlatPresentation) -> LinkDiagram:
    """Cap the braid word per the standard pairing and label arcs canonically."""
    m = p.strands
    n = p.bridge_index
    # Provisional arc ids; union-find merges the segments joined by caps.
    parent: list[int] = []

    def fresh() -> int:
        parent.append(len(parent))
        return len(parent) - 1

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    current = [0] * (m + 1)
    for k in range(1, n + 1):
        arc = fresh()
        current[2 * k - 1] = arc
        current[2 * k] = arc
    raw: list[tuple[int, int, int, int, int, int]] = []
    for row, letter in enumerate(p.word.letters):
        i = letter.index
        nw, ne = current[i], current[i + 1]
        sw, se = fresh(), fresh()
        raw.append((letter.sign, nw, ne, sw, se, i))
        current[i], current[i + 1] = sw, se
    for k in range(1, n + 1):
        union(current[2 * k - 1], current[2 * k])

    # Canonical labels: order of first appearance scanning crossings
    # top-to-bottom, corners (nw, ne, sw, se).
    label: dict[int, int] = {}

    def canon(x: int) -> int:
        r = find(x)
        if r not in label:
            label[r] = len(label)
        return label[r]

    crossings = tuple(
        Crossing(sign, canon(nw), canon(ne), canon(sw), canon(se), col, row)
        for row, (sign, nw, ne, sw, se, col) in enumerate(raw)
    )
    # Arc classes never touching a crossing close up into free loops.
    free = len({find(x) for x in range(len(parent))}) - len(label)
    return LinkDiagram(m, crossings, len(label), free)


class _Pass(NamedTuple):
    """One traversal of a component through one crossing."""

    crossing: int
    strand: int  # 0 = nw-se strand, 1 = ne-sw strand
    component: int
    downward: bool  # True if traversed in construction (top-to-bottom) direction


def trace_components(d: LinkDiagram) -> tuple[int, list[_Pass]]:
    """Walk the diagram's closed curves.

    Returns the component count (free loops included) and, for every
    crossing strand, the component that traverses it and the direction of
    one chosen traversal.
    """
    # occurrences[arc] = list of (crossing index, corner name)
    occurrences: dict[int, list[tuple[int, str]]] = {a: [] for a in range(d.arc_count)}
    for ci, c in enumerate(d.crossings):
        for corner in ("nw", "ne", "sw", "se"):
            occurrences[getattr(c, corner)].append((ci, corner))

    exit_of = {"nw": "se", "ne": "sw", "se": "nw", "sw": "ne"}
    passes: dict[tuple[int, int], _Pass] = {}
    visited_arcs: set[int] = set()
    comp = 0
    for start_arc in range(d.arc_count):
        if start_arc in visited_arcs:
            continue
        # Follow the curve starting along this arc towards its first occurrence.
        arc = start_arc
        occ_index = 0
        while True:
            visited_arcs.add(arc)
            ci, corner = occurrences[arc][occ_index]
            out_corner = exit_of[corner]
            strand = 0 if corner in ("nw", "se") else 1
            key = (ci, strand)
            if key in passes:
                break
            passes[key] = _Pass(ci, strand, comp, corner in ("nw", "ne"))
            out_arc = getattr(d.crossings[ci], out_corner)
            # Continue along out_arc from its other occurrence.
            occs = occurrences[out_arc]
            other = [k for k, (cj, cor) in enumerate(occs) if (cj, cor) != (ci, out_corner)]
            arc = out_arc
            occ_index = other[0]
        comp += 1
    return comp + d.free_loops, sorted(passes.values())


def component_count(p: PlatPresentation) -> int:
    """Number of link components: cycles of the cap pairing composed with the permutation."""
    n = p.bridge_index
    m = p.strands
    perm = permutation_of(p.word)
    # Endpoint nodes: top positions 0..m-1, bottom positions m..2m-1.
    parent = list(range(2 * m))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for a, b in cap_pairs(n):
        union(a - 1, b - 1)
        union(m + a - 1, m + b - 1)
    for top in range(1, m + 1):
        union(top - 1, m + perm(top) - 1)
    return len({find(x) for x in range(2 * m)})


def is_split_word(p: PlatPresentation) -> Optional[int]:
    """Least band i in [1, n-1] such that sigma_{2i} does not occur at all."""
    used = {l.index for l in p.word.letters}
    for i in range(1, p.bridge_index):
        if 2 * i not in used:
            return i
    return None


def is_composite_word(p: PlatPresentation) -> Optional[int]:
    """Least interior i in [1, n-2] such that sigma_{2i+1} does not occur at all."""
    used = {l.index for l in p.word.letters}
    for i in range(1, p.bridge_index - 1):
        if 2 * i + 1 not in used:
            return i
    return None


def stabilize(p: PlatPresentation) -> PlatPresentation:
    """Add a strand pair and cap, appending sigma_{2n}; link type is unchanged."""
    n = p.bridge_index
    word = BraidWord(2 * n + 2, p.word.letters + (Letter(2 * n, 1),))
    return PlatPresentation(n + 1, word)


def destabilize(p: PlatPresentation) -> Optional[PlatPresentation]:
    """Syntactic inverse of `stabilize`; no rewriting search is performed.

    Recognizes exactly the words w . sigma_{2n-2} whose prefix w is a valid
    word on 2n-2 strands (all indices <= 2n-3), i.e. the image of `stabilize`.
    """
    n = p.bridge_index
    if n < 2 or not p.word.letters:
        return None
    last = p.word.letters[-1]
    if last != Letter(2 * n - 2, 1):
        return None
    prefix = p.word.letters[:-1]
    if any(l.index > 2 * n - 3 for l in prefix):
        return None
    return PlatPresentation(n - 1, BraidWord(2 * n - 2, prefix))


def reduce_word(p: PlatPresentation) -> PlatPresentation:
    """Freely reduce the plat's word (same braid, same link)."""
    word = free_reduce(p.word)
    return p if word is p.word else PlatPresentation(p.bridge_index, word)


def plat_to_json(p: PlatPresentation) -> str:
    """JSON schema: {"n": int, "word": [{"i": int, "s": 1|-1}, ...]}."""
    obj = {
        "n": p.bridge_index,
        "word": [{"i": l.index, "s": l.sign} for l in p.word.letters],
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def plat_from_json(text: str) -> PlatPresentation:
    try:
        obj = json.loads(text)
        n = obj["n"]
        letters = tuple(Letter(int(e["i"]), int(e["s"])) for e in obj["word"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad plat JSON: {exc}") from exc
    return PlatPresentation(int(n), BraidWord(2 * int(n), letters))


def pd_text(p: PlatPresentation) -> str:
    """PD-code export: `components <k>` header, then one `X a b c d` per crossing.

    Corners are listed clockwise from the north-west: (nw, ne, se, sw), in
    construction (top-to-bottom) order.
    """
    d = plat_closure_diagram(p)
    lines = [f"components {component_count(p)}"]
    for c in d.crossings:
        lines.append(f"X {c.nw} {c.ne} {c.se} {c.sw}")
    return "\n".join(lines) + "\n"
