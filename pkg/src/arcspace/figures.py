"""SVG output: the truncated arc space and chord pictures of cancellations.

Arc polylines carry raw parametrisation coordinates; the page flip and
scaling live in a single group transform so the numbers in ``points`` can be
compared directly against the arc formula.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .cancellation import CancellationDiagram
from .dyadic import Dyadic, all_gens, point_on_arc
from .words import Word

SAMPLES = 32
_SCALE = 800


def arc_samples(g, samples: int = SAMPLES) -> list[tuple[float, float]]:
    return [(float(x), y) for x, y in (point_on_arc(g, _t(k, samples)) for k in range(samples + 1))]


def _t(k: int, samples: int) -> Dyadic:
    # samples is a power of two, so k/samples is dyadic
    return Dyadic(k, samples.bit_length() - 1)


def arc_space_svg(level: int, samples: int = SAMPLES) -> str:
    """The base segment plus every arc of level <= ``level``."""
    if samples & (samples - 1):
        raise ValueError("samples must be a power of two")
    if level < 0:
        raise ValueError("level must be >= 0")
    margin = 20
    width = _SCALE + 2 * margin
    height = _SCALE // 2 + 2 * margin
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<g transform="translate({margin},{height - margin}) scale({_SCALE},-{_SCALE})" '
        'fill="none" stroke="black">',
        '<line class="base" x1="0" y1="0" x2="1" y2="0" stroke-width="2" '
        'vector-effect="non-scaling-stroke"/>',
    ]
    for g in all_gens(level):
        pts = " ".join(f"{x!r},{y!r}" for x, y in arc_samples(g, samples))
        lines.append(
            f'<polyline class="arc" data-gen="{g}" data-samples="{samples}" points="{pts}" '
            'stroke-width="1" vector-effect="non-scaling-stroke"/>'
        )
    lines += ["</g>", "</svg>"]
    return "\n".join(lines) + "\n"


def chord_svg(w: Word, d: CancellationDiagram) -> str:
    """Letters on a line, semicircles joining paired positions, residuals in gray."""
    if len(w) != d.length:
        raise ValueError("diagram length does not match word length")
    gap = 48
    m = max(d.length, 1)
    width = gap * (m + 1)
    tallest = max((j - i for i, j in d.pairs), default=1) * gap / 2
    base_y = int(tallest) + 20
    height = base_y + 40
    residual = set(d.residuals)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
    ]
    for i, j in d.pairs:
        x1, x2 = i * gap, j * gap
        r = (x2 - x1) / 2
        out.append(
            f'<path class="chord" d="M {x1} {base_y} A {r} {r} 0 0 1 {x2} {base_y}" '
            'fill="none" stroke="black"/>'
        )
    for pos, letter in enumerate(w.letters, start=1):
        colour = "gray" if pos in residual else "black"
        cls = "residual" if pos in residual else "paired"
        out.append(f'<circle class="{cls}" cx="{pos * gap}" cy="{base_y}" r="3" fill="{colour}"/>')
        out.append(
            f'<text x="{pos * gap}" y="{base_y + 20}" text-anchor="middle" '
            f'font-size="12" fill="{colour}">{escape(str(letter))}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
