"""Deterministic SVG rendering of plat diagrams.

Strands run top to bottom, one crossing per word letter; caps are drawn as
semicircular arcs.  The output is byte-stable for a given plat and spec:
coordinates are formatted with one decimal place and nothing depends on
dictionary order or floating point accumulation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .plat import PlatPresentation, cap_pairs


@dataclass(frozen=True)
class RenderSpec:
    strand_spacing: float = 40.0
    crossing_height: float = 40.0
    stroke_width: float = 2.0
    cap_radius: float = 20.0

    def __post_init__(self) -> None:
        if min(self.strand_spacing, self.crossing_height, self.stroke_width,
               self.cap_radius) <= 0:
            raise ValueError("render spec fields must all be positive")


def _fmt(x: float) -> str:
    return f"{x:.1f}"


def render_svg(p: PlatPresentation, spec: RenderSpec | None = None) -> str:
    spec = spec or RenderSpec()
    n = p.bridge_index
    m = p.strands
    margin = spec.strand_spacing / 2
    top = margin + spec.cap_radius
    bottom = top + max(len(p.word), 1) * spec.crossing_height
    width = margin * 2 + (m - 1) * spec.strand_spacing
    height = bottom + spec.cap_radius + margin

    def x_of(position: int) -> float:
        return margin + (position - 1) * spec.strand_spacing

    lines: list[str] = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<g fill="none" stroke="black" stroke-width="{_fmt(spec.stroke_width)}">',
    ]

    for a, b in cap_pairs(n):
        lines.append(
            f'<path class="cap" d="M {_fmt(x_of(a))} {_fmt(top)} '
            f'A {_fmt(spec.cap_radius)} {_fmt(spec.cap_radius)} 0 0 1 '
            f'{_fmt(x_of(b))} {_fmt(top)}" />'
        )

    # vertical strand segments row by row; crossings replace the two columns
    y = top
    for letter in p.word.letters:
        y2 = y + spec.crossing_height
        i = letter.index
        for position in range(1, m + 1):
            if position not in (i, i + 1):
                lines.append(
                    f'<line x1="{_fmt(x_of(position))}" y1="{_fmt(y)}" '
                    f'x2="{_fmt(x_of(position))}" y2="{_fmt(y2)}" />'
                )
        xl, xr = x_of(i), x_of(i + 1)
        xml = xl + (xr - xl) * 0.4
        xmr = xl + (xr - xl) * 0.6
        yml = y + spec.crossing_height * 0.4
        ymr = y + spec.crossing_height * 0.6
        if letter.sign > 0:
            over = f'<line x1="{_fmt(xl)}" y1="{_fmt(y)}" x2="{_fmt(xr)}" y2="{_fmt(y2)}" />'
            under = (
                f'<line x1="{_fmt(xr)}" y1="{_fmt(y)}" x2="{_fmt(xmr)}" y2="{_fmt(yml)}" />'
                f'<line x1="{_fmt(xml)}" y1="{_fmt(ymr)}" x2="{_fmt(xl)}" y2="{_fmt(y2)}" />'
            )
        else:
            over = f'<line x1="{_fmt(xr)}" y1="{_fmt(y)}" x2="{_fmt(xl)}" y2="{_fmt(y2)}" />'
            under = (
                f'<line x1="{_fmt(xl)}" y1="{_fmt(y)}" x2="{_fmt(xml)}" y2="{_fmt(yml)}" />'
                f'<line x1="{_fmt(xmr)}" y1="{_fmt(ymr)}" x2="{_fmt(xr)}" y2="{_fmt(y2)}" />'
            )
        lines.append(f'<g class="crossing">{over}{under}</g>')
        y = y2

    if not p.word.letters:
        for position in range(1, m + 1):
            lines.append(
                f'<line x1="{_fmt(x_of(position))}" y1="{_fmt(top)}" '
                f'x2="{_fmt(x_of(position))}" y2="{_fmt(bottom)}" />'
            )

    for a, b in cap_pairs(n):
        lines.append(
            f'<path class="cap" d="M {_fmt(x_of(a))} {_fmt(bottom)} '
            f'A {_fmt(spec.cap_radius)} {_fmt(spec.cap_radius)} 0 0 0 '
            f'{_fmt(x_of(b))} {_fmt(bottom)}" />'
        )

    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
