"""Combinatorial model of sphere tilings induced by the height function.

A tiling is a directed tree whose vertices are tiles: disc tiles around an
extremum (T1min / T1max), pair-of-pants tiles around a saddle (T3down: one
level curve splits into two going down; T3up: two join into one), and, on a
twice punctured sphere, two puncture tiles (Tp).  Edges join tiles glued
along a level circle and point from the higher tile to the lower.

Census constraints come from gluing Euler characteristics: a sphere tiling
satisfies |T1| - |T3| = 2, a twice punctured one |T1| = |T3| with |Tp| = 2.
The complexity of a tiling is |T3|; reductions remove one extremum tile and
one saddle at a time until the standard configuration remains (two tiles
for the sphere, six for the punctured sphere).

Whether a level curve of an extremum tile contains another level curve is
geometric data the tree cannot see; it is carried as a per-T1 `nested` flag,
set by the generator and cleared by `unnest`.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import ParseError, PlatkitError

T1MIN = "T1min"
T1MAX = "T1max"
T3UP = "T3up"
T3DOWN = "T3down"
TP = "Tp"

TILE_TYPES = (T1MIN, T1MAX, T3UP, T3DOWN, TP)
T1_TYPES = (T1MIN, T1MAX)
T3_TYPES = (T3UP, T3DOWN)

SPHERE = "sphere"
PUNCTURED = "twice_punctured"


class Tile(NamedTuple):
    type: str
    height: Fraction
    nested: bool = False


@dataclass
class TileGraph:
    """Immutable by convention; reductions return new graphs."""

    kind: str
    vertices: dict[int, Tile]
    edges: tuple[tuple[int, int], ...]  # (higher vertex, lower vertex)

    def neighbors(self, v: int) -> list[int]:
        out = [b for a, b in self.edges if a == v]
        out += [a for a, b in self.edges if b == v]
        return sorted(out)

    def in_degree(self, v: int) -> int:
        return sum(1 for _, b in self.edges if b == v)

    def out_degree(self, v: int) -> int:
        return sum(1 for a, _ in self.edges if a == v)

    def count(self, *types: str) -> int:
        return sum(1 for t in self.vertices.values() if t.type in types)

    def of_type(self, *types: str) -> list[int]:
        return sorted(v for v, t in self.vertices.items() if t.type in types)


def standard_sphere() -> TileGraph:
    """Two tiles: one max above one min."""
    return TileGraph(
        SPHERE,
        {0: Tile(T1MAX, Fraction(1)), 1: Tile(T1MIN, Fraction(0))},
        ((0, 1),),
    )


def standard_punctured() -> TileGraph:
    """Six tiles: max, down saddle, two punctures, up saddle, min."""
    vertices = {
        0: Tile(T1MAX, Fraction(1)),
        1: Tile(T3DOWN, Fraction(3, 4)),
        2: Tile(TP, Fraction(5, 8)),
        3: Tile(TP, Fraction(9, 16)),
        4: Tile(T3UP, Fraction(1, 2)),
        5: Tile(T1MIN, Fraction(0)),
    }
    return TileGraph(PUNCTURED, vertices, ((0, 1), (1, 2), (1, 4), (3, 4), (4, 5)))


def validation_errors(g: TileGraph) -> list[str]:
    errors: list[str] = []
    if g.kind not in (SPHERE, PUNCTURED):
        return [f"unknown kind {g.kind!r}"]
    ids = set(g.vertices)
    if len(ids) < 2:
        errors.append("a tiling has at least two tiles")
    for vid, tile in g.vertices.items():
        if tile.type not in TILE_TYPES:
            errors.append(f"vertex {vid}: unknown tile type {tile.type!r}")
        if tile.nested and tile.type not in T1_TYPES:
            errors.append(f"vertex {vid}: only T1 tiles can be nested")
    for a, b in g.edges:
        if a not in ids or b not in ids:
            errors.append(f"edge ({a},{b}) references a missing vertex")
        elif not g.vertices[a].height > g.vertices[b].height:
            errors.append(f"edge ({a},{b}) does not point downward in height")
    if errors:
        return errors

    # tree: connected with |E| = |V| - 1
    if len(g.edges) != len(ids) - 1:
        errors.append(f"{len(g.edges)} edges for {len(ids)} vertices; not a tree")
    else:
        seen = set()
        stack = [next(iter(ids))]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(w for w in g.neighbors(v) if w not in seen)
        if seen != ids:
            errors.append("graph is not connected")
    if errors:
        return errors

    expected_valence = {T1MIN: 1, T1MAX: 1, T3UP: 3, T3DOWN: 3, TP: 1}
    for vid, tile in g.vertices.items():
        ins, outs = g.in_degree(vid), g.out_degree(vid)
        if ins + outs != expected_valence[tile.type]:
            errors.append(
                f"vertex {vid} ({tile.type}) has valence {ins + outs}, "
                f"expected {expected_valence[tile.type]}"
            )
            continue
        if tile.type == T1MAX and outs != 1:
            errors.append(f"max tile {vid} must sit above its neighbor")
        if tile.type == T1MIN and ins != 1:
            errors.append(f"min tile {vid} must sit below its neighbor")
        if tile.type == T3DOWN and (ins, outs) != (1, 2):
            errors.append(f"down saddle {vid} needs one in-edge and two out-edges")
        if tile.type == T3UP and (ins, outs) != (2, 1):
            errors.append(f"up saddle {vid} needs two in-edges and one out-edge")

    saddle_heights = [t.height for t in g.vertices.values() if t.type in T3_TYPES]
    if len(saddle_heights) != len(set(saddle_heights)):
        errors.append("saddles must occur at pairwise distinct heights")

    t1, t3, tp = g.count(*T1_TYPES), g.count(*T3_TYPES), g.count(TP)
    if g.kind == SPHERE:
        if tp:
            errors.append("sphere tilings have no puncture tiles")
        # Euler characteristic of the glued surface: |T1| - |T3| = chi(S^2) = 2
        if t1 - t3 != 2:
            errors.append(f"|T1| - |T3| = {t1 - t3}, expected 2")
    else:
        if tp != 2:
            errors.append(f"punctured tilings have exactly two puncture tiles, got {tp}")
        # The T1/T3 subsurface is an annulus: |T1| - |T3| = chi = 0
        if t1 != t3:
            errors.append(f"|T1| = {t1} and |T3| = {t3} must agree")
        if g.count(T1MAX) < 1 or g.count(T1MIN) < 1:
            errors.append("a height function needs at least one max and one min tile")
    return errors


def validate(g: TileGraph) -> bool:
    return not validation_errors(g)


def complexity(g: TileGraph) -> int:
    """Number of saddle tiles."""
    errors = validation_errors(g)
    if errors:
        raise ValueError("invalid tile graph: " + "; ".join(errors))
    return g.count(*T3_TYPES)


def _matching_saddle(g: TileGraph, v: int) -> Optional[int]:
    """The saddle that makes the extremum tile v removable, if any.

    The removal empties v's disc into the closest tile of the same polarity,
    so another min (resp. max) must exist; on a sphere that is automatic, on
    a punctured sphere a branch can end in a puncture instead.
    """
    tile = g.vertices[v]
    if tile.type not in T1_TYPES:
        return None
    if g.count(tile.type) < 2:
        return None
    neighbor = g.neighbors(v)[0]
    wanted = T3DOWN if tile.type == T1MIN else T3UP
    return neighbor if g.vertices[neighbor].type == wanted else None


def find_removable(g: TileGraph) -> Optional[int]:
    """An unnested min on a down saddle or max on an up saddle, if one exists."""
    errors = validation_errors(g)
    if errors:
        raise ValueError("invalid tile graph: " + "; ".join(errors))
    for v in g.of_type(*T1_TYPES):
        if not g.vertices[v].nested and _matching_saddle(g, v) is not None:
            return v
    return None


def unnest(g: TileGraph, v: int) -> TileGraph:
    """Clear the nested flag of an extremum tile (a pocket move on level curves)."""
    tile = g.vertices.get(v)
    if tile is None or tile.type not in T1_TYPES:
        raise ValueError(f"vertex {v} is not an extremum tile")
    if not tile.nested:
        raise ValueError(f"vertex {v} is not nested")
    vertices = dict(g.vertices)
    vertices[v] = tile._replace(nested=False)
    return TileGraph(g.kind, vertices, g.edges)


@dataclass(frozen=True)
class ReductionStep:
    removed_t1: int
    removed_t3: int
    reconnect: tuple[int, int]

    def to_json_dict(self) -> dict:
        return {
            "removed_T1": self.removed_t1,
            "removed_T3": self.removed_t3,
            "reconnect": list(self.reconnect),
        }


def _delete_pair(g: TileGraph, v: int, saddle: int) -> tuple[TileGraph, ReductionStep]:
    """Remove extremum v and its saddle; rejoin the saddle's other neighbors.

    The new edge keeps each survivor on the side of the saddle it was on; a
    puncture neighbor absorbs any direction flip by taking over the removed
    saddle's height (its single edge is unconstrained).
    """
    others = [w for w in g.neighbors(saddle) if w != v]
    a, b = others
    vertices = {w: t for w, t in g.vertices.items() if w not in (v, saddle)}
    ta, tb = vertices[a], vertices[b]
    saddle_height = g.vertices[saddle].height
    above = [w for w in (a, b) if g.vertices[w].height > saddle_height]
    if len(above) == 1:
        pass  # one neighbor above, one below; heights already orient the edge
    else:
        # both survivors on one side: slide a puncture tile into the saddle's place
        tp_candidates = [w for w in (a, b) if vertices[w].type == TP]
        if not tp_candidates:
            raise ValueError(
                f"removing ({v}, {saddle}) would flip a saddle's edge profile"
            )
        slid = tp_candidates[0]
        vertices[slid] = vertices[slid]._replace(height=saddle_height)
    ha, hb = vertices[a].height, vertices[b].height
    if ha == hb:
        raise ValueError("cannot orient the reconnection edge between equal heights")
    new_edge = (a, b) if ha > hb else (b, a)
    edges = tuple(e for e in g.edges if v not in e and saddle not in e) + (new_edge,)
    reduced = TileGraph(g.kind, vertices, edges)
    return reduced, ReductionStep(v, saddle, new_edge)


def remove_pair(g: TileGraph, v: int) -> tuple[TileGraph, ReductionStep]:
    """Remove an unnested extremum and its matching saddle; complexity drops by 1."""
    errors = validation_errors(g)
    if errors:
        raise ValueError("invalid tile graph: " + "; ".join(errors))
    tile = g.vertices.get(v)
    if tile is None or tile.type not in T1_TYPES:
        raise ValueError(f"vertex {v} is not an extremum tile")
    if tile.nested:
        raise ValueError(f"vertex {v} is nested; unnest it first")
    saddle = _matching_saddle(g, v)
    if saddle is None:
        raise ValueError(f"vertex {v} has no matching saddle")
    return _delete_pair(g, v, saddle)


def _subtree(g: TileGraph, root: int, banned: int) -> list[int]:
    """Vertices reachable from root without passing through `banned`."""
    seen = {banned, root}
    order = [root]
    queue = [root]
    while queue:
        v = queue.pop(0)
        for w in g.neighbors(v):
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def remove_punctured_adjacent(
    g: TileGraph, saddle: int
) -> tuple[TileGraph, Optional[ReductionStep]]:
    """Removal at a saddle that carries a puncture tile.

    With an extremum neighbor, the saddle and that extremum are removed and
    the puncture rewired along the reconnection edge.  With two puncture
    neighbors, the removable pair is looked up through the third boundary
    circle instead.  At the standard six-tile census the reduction refuses
    and returns the graph unchanged.
    """
    errors = validation_errors(g)
    if errors:
        raise ValueError("invalid tile graph: " + "; ".join(errors))
    if g.kind != PUNCTURED:
        raise ValueError("puncture-adjacent removal only applies to punctured tilings")
    tile = g.vertices.get(saddle)
    if tile is None or tile.type not in T3_TYPES:
        raise ValueError(f"vertex {saddle} is not a saddle")
    nbs = g.neighbors(saddle)
    tp_nbs = [w for w in nbs if g.vertices[w].type == TP]
    t1_nbs = [w for w in nbs if g.vertices[w].type in T1_TYPES]
    if not tp_nbs:
        raise ValueError(f"saddle {saddle} has no puncture neighbor")
    if g.count(*T3_TYPES) <= 2:
        return g, None  # already the standard configuration
    # only extrema whose polarity stays populated can be emptied out
    t1_nbs = [w for w in t1_nbs if g.count(g.vertices[w].type) >= 2]
    if t1_nbs:
        # prefer unnested extrema, and among those the matching polarity
        wanted = T1MIN if tile.type == T3DOWN else T1MAX
        t1_nbs.sort(
            key=lambda w: (g.vertices[w].nested, g.vertices[w].type != wanted, w)
        )
        return _delete_pair(g, t1_nbs[0], saddle)
    if len(tp_nbs) < 2:
        raise ValueError(f"saddle {saddle} has neither an extremum nor two punctures")
    # Case with two punctures: follow the third boundary circle.
    third = [w for w in nbs if w not in tp_nbs][0]
    for v in _subtree(g, third, saddle):
        t = g.vertices[v]
        if t.type in T1_TYPES and not t.nested and _matching_saddle(g, v) is not None:
            return _delete_pair(g, v, _matching_saddle(g, v))
    raise ValueError("no removable pair found through the third boundary circle")


def _puncture_spot(g: TileGraph) -> Optional[tuple[int, int]]:
    """A saddle adjacent to both an unnested extremum and a puncture tile,
    with the extremum to remove; None if no such sound removal exists."""
    for saddle in g.of_type(*T3_TYPES):
        nbs = g.neighbors(saddle)
        tps = [w for w in nbs if g.vertices[w].type == TP]
        t1s = [
            w for w in nbs
            if g.vertices[w].type in T1_TYPES
            and not g.vertices[w].nested
            and g.count(g.vertices[w].type) >= 2
        ]
        if tps and t1s:
            return saddle, t1s[0]
    return None


def reduce_to_standard(g: TileGraph) -> tuple[TileGraph, list[ReductionStep]]:
    """Remove saddle/extremum pairs until the standard configuration remains.

    Spheres shed exactly |T3| pairs; punctured tilings stop at the six-tile
    census (|T3| = 2).  Nested extrema are unnested on the way as needed;
    unnesting is not counted as a step.
    """
    errors = validation_errors(g)
    if errors:
        raise ValueError("invalid tile graph: " + "; ".join(errors))
    floor = 0 if g.kind == SPHERE else 2
    steps: list[ReductionStep] = []
    while g.count(*T3_TYPES) > floor:
        v = find_removable(g)
        if v is not None:
            g, step = remove_pair(g, v)
            steps.append(step)
            continue
        if g.kind == PUNCTURED:
            spot = _puncture_spot(g)
            if spot is not None:
                g, step = _delete_pair(g, spot[1], spot[0])
                steps.append(step)
                continue
        # No unnested removal available: clear a nested flag and retry, taking
        # tiles that become removable first.  Each pass either lowers |T3| or
        # the nested count, so the loop terminates.
        nested = sorted(
            (v for v in g.of_type(*T1_TYPES) if g.vertices[v].nested),
            key=lambda v: (_matching_saddle(g, v) is None, v),
        )
        if nested:
            g = unnest(g, nested[0])
            continue
        raise PlatkitError("reduction is stuck; a removable pair should always exist")
    return g, steps


def random_tiling(kind: str, size: int, seed: int) -> TileGraph:
    """Seeded generator of valid tilings.

    For spheres `size` is the saddle count; for punctured tilings it is the
    number of saddles beyond the standard pair (so size 0 is the standard
    six-tile configuration).  Tilings grow by the inverse of `remove_pair`:
    a saddle plus a fresh extremum is inserted on a uniformly random edge.
    """
    if size < 0:
        raise ValueError(f"size must be >= 0, got {size}")
    if kind not in (SPHERE, PUNCTURED):
        raise ValueError(f"unknown kind {kind!r}")
    rng = random.Random(seed)
    g = standard_sphere() if kind == SPHERE else standard_punctured()
    vertices = dict(g.vertices)
    edges = list(g.edges)
    next_id = max(vertices) + 1
    saddle_heights = {t.height for t in vertices.values() if t.type in T3_TYPES}

    def between(lo: Fraction, hi: Fraction) -> Fraction:
        while True:
            h = lo + (hi - lo) * Fraction(rng.randrange(1, 997), 997)
            if h not in saddle_heights:
                return h

    for _ in range(size):
        a, b = edges[rng.randrange(len(edges))]
        edges.remove((a, b))
        h = between(vertices[b].height, vertices[a].height)
        saddle_heights.add(h)
        saddle = next_id
        leaf = next_id + 1
        next_id += 2
        nested = rng.random() < 0.25
        if rng.random() < 0.5:
            # down saddle with a fresh min below it
            vertices[saddle] = Tile(T3DOWN, h)
            vertices[leaf] = Tile(
                T1MIN, h - Fraction(rng.randrange(1, 997), 997), nested
            )
            edges += [(a, saddle), (saddle, b), (saddle, leaf)]
        else:
            vertices[saddle] = Tile(T3UP, h)
            vertices[leaf] = Tile(
                T1MAX, h + Fraction(rng.randrange(1, 997), 997), nested
            )
            edges += [(a, saddle), (saddle, b), (leaf, saddle)]
    return TileGraph(kind, vertices, tuple(sorted(edges)))


def tiling_to_json(g: TileGraph) -> str:
    obj = {
        "kind": g.kind,
        "vertices": [
            {"id": v, "type": t.type, "h": str(t.height), "nested": t.nested}
            for v, t in sorted(g.vertices.items())
        ],
        "edges": [list(e) for e in sorted(g.edges)],
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def tiling_from_json(text: str) -> TileGraph:
    try:
        obj = json.loads(text)
        vertices = {
            int(v["id"]): Tile(v["type"], Fraction(v["h"]), bool(v.get("nested", False)))
            for v in obj["vertices"]
        }
        edges = tuple((int(a), int(b)) for a, b in obj["edges"])
        return TileGraph(obj["kind"], vertices, edges)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad tile graph JSON: {exc}") from exc
