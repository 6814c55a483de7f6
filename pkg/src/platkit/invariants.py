"""Exact unoriented link invariant used to certify that moves preserve link type.

The oracle is the Kauffman bracket state sum normalized by writhe, collected
over orientation classes: for a diagram with k components there are 2^(k-1)
orientation classes after identifying globally reversed orientations, and for
each class o the value is (-A^3)^(-writhe(o)) * bracket.  The multiset of
these Laurent polynomials is an invariant of the unoriented link.

The state sum enumerates all 2^c smoothings; diagrams with more crossings
than the configured cap (default 24, env PLATKIT_ORACLE_CAP) are refused.
All arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .braid import BraidWord, Letter, free_reduce
from .errors import ResourceLimitError
from .plat import LinkDiagram, PlatPresentation, plat_closure_diagram, trace_components

DEFAULT_STATE_SUM_CAP = 24

try:  # the jit kernel is a big win but everything works without it
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False


@dataclass(frozen=True)
class LaurentPolynomial:
    """Integer-coefficient polynomial in A and A^-1.

    Terms are stored sorted by descending exponent with no zero coefficients,
    so equality and hashing are structural.
    """

    terms: tuple[tuple[int, int], ...] = ()  # (exponent, coefficient)

    @classmethod
    def from_dict(cls, coeffs: dict[int, int]) -> "LaurentPolynomial":
        return cls(tuple(sorted(((e, c) for e, c in coeffs.items() if c != 0), reverse=True)))

    @classmethod
    def zero(cls) -> "LaurentPolynomial":
        return cls(())

    @classmethod
    def one(cls) -> "LaurentPolynomial":
        return cls(((0, 1),))

    @classmethod
    def monomial(cls, coefficient: int, exponent: int) -> "LaurentPolynomial":
        if coefficient == 0:
            return cls(())
        return cls(((exponent, coefficient),))

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        coeffs = self.as_dict()
        for e, c in other.terms:
            coeffs[e] = coeffs.get(e, 0) + c
        return LaurentPolynomial.from_dict(coeffs)

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        coeffs: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                coeffs[e] = coeffs.get(e, 0) + c1 * c2
        return LaurentPolynomial.from_dict(coeffs)

    def scale(self, coefficient: int, exponent: int = 0) -> "LaurentPolynomial":
        """Multiply by coefficient * A^exponent."""
        if coefficient == 0:
            return LaurentPolynomial.zero()
        return LaurentPolynomial(
            tuple((e + exponent, c * coefficient) for e, c in self.terms)
        )

    def __pow__(self, k: int) -> "LaurentPolynomial":
        if k < 0:
            raise ValueError("negative powers not supported")
        result = LaurentPolynomial.one()
        for _ in range(k):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for pos, (e, c) in enumerate(self.terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                coef = "" if mag == 1 else str(mag)
                power = "A" if e == 1 else f"A^{e}"
                body = coef + power
            if pos == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def to_json_dict(self) -> dict[str, int]:
        return {str(e): c for e, c in self.terms}

    @classmethod
    def from_json_dict(cls, obj: dict[str, int]) -> "LaurentPolynomial":
        return cls.from_dict({int(e): int(c) for e, c in obj.items()})


# The loop value delta = -A^2 - A^-2.
LOOP_VALUE = LaurentPolynomial.from_dict({2: -1, -2: -1})


@dataclass(frozen=True)
class InvariantValue:
    """Writhe-normalized brackets over orientation classes, distinct values kept.

    Orientation classes whose normalized polynomials coincide collapse to one
    entry, so the size is at most 2^(component_count - 1).
    """

    entries: tuple[LaurentPolynomial, ...]

    @classmethod
    def from_polys(cls, polys: Iterable[LaurentPolynomial]) -> "InvariantValue":
        return cls(tuple(sorted(set(polys), key=lambda p: p.terms)))

    def __str__(self) -> str:
        return "{" + ", ".join(str(p) for p in self.entries) + "}"


def invariants_equal(a: InvariantValue, b: InvariantValue) -> bool:
    """Exact multiset equality."""
    return a.entries == b.entries


def state_sum_cap(override: int | None = None) -> int:
    if override is not None:
        return override
    env = os.environ.get("PLATKIT_ORACLE_CAP")
    return int(env) if env else DEFAULT_STATE_SUM_CAP


def _joins(d: LinkDiagram) -> tuple[np.ndarray, np.ndarray]:
    """Per-crossing arc joins for the A- and B-smoothing.

    For a positive letter the A-smoothing is the identity tangle (nw-sw,
    ne-se) and the B-smoothing the cup-cap (nw-ne, sw-se); a negative letter
    swaps the two.
    """
    ja = np.empty((len(d.crossings), 4), dtype=np.int32)
    jb = np.empty((len(d.crossings), 4), dtype=np.int32)
    for k, c in enumerate(d.crossings):
        vertical = (c.nw, c.sw, c.ne, c.se)
        cupcap = (c.nw, c.ne, c.sw, c.se)
        if c.sign > 0:
            ja[k], jb[k] = vertical, cupcap
        else:
            ja[k], jb[k] = cupcap, vertical
    return ja, jb


def _state_tally_python(c: int, n_arcs: int, ja: np.ndarray, jb: np.ndarray) -> np.ndarray:
    tally = np.zeros((c + 1, n_arcs + 1), dtype=np.int64)
    ja_l = [tuple(int(v) for v in row) for row in ja]
    jb_l = [tuple(int(v) for v in row) for row in jb]
    for mask in range(1 << c):
        parent = list(range(n_arcs))
        merges = 0
        bits = 0
        for k in range(c):
            if (mask >> k) & 1:
                p0, p1, p2, p3 = jb_l[k]
                bits += 1
            else:
                p0, p1, p2, p3 = ja_l[k]
            for x, y in ((p0, p1), (p2, p3)):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                while parent[y] != y:
                    parent[y] = parent[parent[y]]
                    y = parent[y]
                if x != y:
                    if x < y:
                        parent[y] = x
                    else:
                        parent[x] = y
                    merges += 1
        tally[bits, n_arcs - merges] += 1
    return tally


if _HAVE_NUMBA:

    @numba.njit(cache=True)
    def _state_tally_jit(c, n_arcs, ja, jb):  # pragma: no cover - exercised via wrapper
        tally = np.zeros((c + 1, n_arcs + 1), dtype=np.int64)
        parent = np.empty(n_arcs, dtype=np.int32)
        for mask in range(1 << c):
            for i in range(n_arcs):
                parent[i] = i
            merges = 0
            bits = 0
            for k in range(c):
                if (mask >> k) & 1:
                    row = jb[k]
                    bits += 1
                else:
                    row = ja[k]
                for t in range(2):
                    x = row[2 * t]
                    y = row[2 * t + 1]
                    while parent[x] != x:
                        parent[x] = parent[parent[x]]
                        x = parent[x]
                    while parent[y] != y:
                        parent[y] = parent[parent[y]]
                        y = parent[y]
                    if x != y:
                        if x < y:
                            parent[y] = x
                        else:
                            parent[x] = y
                        merges += 1
            tally[bits, n_arcs - merges] += 1
        return tally


def kauffman_bracket(d: LinkDiagram, cap: int | None = None) -> LaurentPolynomial:
    """State sum over all 2^c smoothings, normalized so <unknot> = 1.

    Each state contributes A^(a-b) * delta^(loops-1) where a and b count A-
    and B-smoothings and delta = -A^2 - A^-2.
    """
    c = len(d.crossings)
    limit = state_sum_cap(cap)
    if c > limit:
        raise ResourceLimitError(
            f"diagram has {c} crossings, above the state-sum cap {limit}"
        )
    if c == 0:
        return LOOP_VALUE ** (d.free_loops - 1)
    ja, jb = _joins(d)
    if _HAVE_NUMBA and c >= 10:
        tally = _state_tally_jit(c, d.arc_count, ja, jb)
    else:
        tally = _state_tally_python(c, d.arc_count, ja, jb)
    # bracket = sum over (b, loops) of count * A^(c-2b) * delta^(loops-1+free)
    delta_powers = [LaurentPolynomial.one()]
    for _ in range(d.arc_count + d.free_loops):
        delta_powers.append(delta_powers[-1] * LOOP_VALUE)
    result = LaurentPolynomial.zero()
    for b in range(c + 1):
        for loops in range(1, d.arc_count + 1):
            count = int(tally[b, loops])
            if count:
                term = delta_powers[loops - 1 + d.free_loops].scale(count, c - 2 * b)
                result = result + term
    return result


def writhe(d: LinkDiagram, orientation: Sequence[int]) -> int:
    """Sum of crossing signs once each component is given a direction.

    `orientation` assigns +1 or -1 to every component, indexed as produced by
    `trace_components`; +1 keeps the traced direction.
    """
    count, passes = trace_components(d)
    if len(orientation) != count:
        raise ValueError(f"orientation assigns {len(orientation)} of {count} components")
    if any(o not in (-1, 1) for o in orientation):
        raise ValueError("orientation entries must be -1 or +1")
    by_crossing: dict[int, list] = {}
    for ps in passes:
        by_crossing.setdefault(ps.crossing, []).append(ps)
    total = 0
    for ci, c in enumerate(d.crossings):
        p0, p1 = by_crossing[ci]
        d0 = (1 if p0.downward else -1) * orientation[p0.component]
        d1 = (1 if p1.downward else -1) * orientation[p1.component]
        total += c.sign * d0 * d1
    return total


def _strip_cap_kinks(p: PlatPresentation) -> PlatPresentation:
    """Drop crossings that are curls on a cap; the normalized invariant is unchanged.

    A leading letter of odd index i is a curl on the top cap (i, i+1) when no
    earlier letter touches strands i-1..i+2; dually at the bottom.  Applied
    together with free reduction until stable.
    """
    letters = list(free_reduce(p.word).letters)
    changed = True
    while changed:
        changed = False
        for pos, letter in enumerate(letters):
            if letter.index % 2 == 1 and all(
                abs(earlier.index - letter.index) >= 2 for earlier in letters[:pos]
            ):
                del letters[pos]
                changed = True
                break
        for pos in range(len(letters) - 1, -1, -1):
            letter = letters[pos]
            if letter.index % 2 == 1 and all(
                abs(later.index - letter.index) >= 2 for later in letters[pos + 1 :]
            ):
                del letters[pos]
                changed = True
                break
        if changed:
            reduced = free_reduce(BraidWord(p.strands, tuple(letters)))
            letters = list(reduced.letters)
    return PlatPresentation(p.bridge_index, BraidWord(p.strands, tuple(letters)))


_invariant_cache: dict[tuple[int, tuple[tuple[int, int], ...]], InvariantValue] = {}
_INVARIANT_CACHE_MAX = 4096


def invariant(p: PlatPresentation, cap: int | None = None) -> InvariantValue:
    """Writhe-normalized bracket multiset over orientation classes of the closure."""
    reduced = _strip_cap_kinks(p)
    limit = state_sum_cap(cap)
    if len(reduced.word) > limit:
        raise ResourceLimitError(
            f"plat closure has {len(reduced.word)} crossings, above the state-sum cap {limit}"
        )
    key = (reduced.bridge_index, tuple((l.index, l.sign) for l in reduced.word.letters))
    cached = _invariant_cache.get(key)
    if cached is not None:
        return cached
    d = plat_closure_diagram(reduced)
    bracket = kauffman_bracket(d, cap)
    count, passes = trace_components(d)
    by_crossing: dict[int, list] = {}
    for ps in passes:
        by_crossing.setdefault(ps.crossing, []).append(ps)
    # Orientation classes: fix component 0 to the traced direction, flip the rest.
    polys: list[LaurentPolynomial] = []
    for bits in range(1 << max(count - 1, 0)):
        orientation = [1] + [1 if (bits >> j) & 1 == 0 else -1 for j in range(count - 1)]
        w = 0
        for ci, c in enumerate(d.crossings):
            p0, p1 = by_crossing[ci]
            d0 = (1 if p0.downward else -1) * orientation[p0.component]
            d1 = (1 if p1.downward else -1) * orientation[p1.component]
            w += c.sign * d0 * d1
        # multiply by (-A^3)^(-w) = (-1)^w A^(-3w)
        polys.append(bracket.scale(-1 if w % 2 else 1, -3 * w))
    value = InvariantValue.from_polys(polys)
    if len(_invariant_cache) >= _INVARIANT_CACHE_MAX:
        _invariant_cache.clear()
    _invariant_cache[key] = value
    return value
