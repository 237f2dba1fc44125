"""SVG rendering of circle collections.

All geometry stays exact until the final coordinate emission, where values
are formatted with 12 significant digits.  Stroke widths scale like the
radius, clamped to a minimum so high-curvature circles stay visible.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .arrangement import Window
from .circle import OrientedCircle
from .qint import Disc


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _circle_float_data(c: OrientedCircle):
    d = c.disc.abs_delta
    sq = math.sqrt(d)
    if c.n == 0:
        if c.w.v == 0:
            return ("hline", float(c.line_height()) * sq)
        return ("vline", float(Fraction(-c.nprime * c.w.v * d, 4)))
    cx = float(c.center_x())
    cy = float(c.center_yhat()) * sq
    r = 1.0 / (abs(c.n) * sq)
    return ("circle", cx, cy, r)


def render_svg(circles: Sequence[OrientedCircle], window: Window,
               disc: Disc, scale: float = 400.0, labels: bool = False,
               ghosts: Optional[Iterable] = None,
               color: str = "#1f4e9c", ghost_color: "str" = "#e6c619",
               min_stroke: float = 0.45) -> str:
    """An SVG document of the circles clipped to the window.

    The vertical axis is flipped so increasing imaginary part points up.
    """
    d = disc.abs_delta
    sq = math.sqrt(d)
    x0, x1 = float(window.x0), float(window.x1)
    y0, y1 = float(window.y0h) * sq, float(window.y1h) * sq
    w = (x1 - x0) * scale
    h = (y1 - y0) * scale

    def px(x):
        return (x - x0) * scale

    def py(y):
        return (y1 - y) * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(w)}" height="{_fmt(h)}" '
        f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
        f'<rect x="0" y="0" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'fill="white"/>',
    ]
    for c in circles:
        data = _circle_float_data(c)
        stroke = max(min_stroke, scale / (60.0 * max(abs(c.n), 1)))
        if data[0] == "hline":
            y = py(data[1])
            parts.append(
                f'<line x1="0" y1="{_fmt(y)}" x2="{_fmt(w)}" y2="{_fmt(y)}" '
                f'stroke="{color}" stroke-width="{_fmt(stroke)}"/>')
        elif data[0] == "vline":
            x = px(data[1])
            parts.append(
                f'<line x1="{_fmt(x)}" y1="0" x2="{_fmt(x)}" y2="{_fmt(h)}" '
                f'stroke="{color}" stroke-width="{_fmt(stroke)}"/>')
        else:
            _, cx, cy, r = data
            parts.append(
                f'<circle cx="{_fmt(px(cx))}" cy="{_fmt(py(cy))}" '
                f'r="{_fmt(r * scale)}" fill="none" stroke="{color}" '
                f'stroke-width="{_fmt(stroke)}"/>')
            if labels:
                size = 1.2 * r * scale / max(len(str(c.n)), 2)
                if size > 4.0:
                    parts.append(
                        f'<text x="{_fmt(px(cx))}" y="{_fmt(py(cy) + size / 3)}" '
                        f'font-size="{_fmt(size)}" text-anchor="middle" '
                        f'fill="#333">{c.n}</text>')
    if labels and any(c.n == 0 and c.w.v == 0 for c in circles):
        for c in circles:
            if c.n == 0 and c.w.v == 0:
                y = py(float(c.line_height()) * sq)
                parts.append(
                    f'<text x="{_fmt(0.02 * w)}" y="{_fmt(y - 0.01 * h)}" '
                    f'font-size="{_fmt(0.03 * h)}" fill="#333">0</text>')
                break
    for g in ghosts or ():
        x = float(g.center.p) + float(g.center.q) * disc.eps / 2
        y = float(g.center.q) / 2 * sq
        r = math.sqrt(float(g.radius_sq))
        parts.append(
            f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" '
            f'r="{_fmt(r * scale)}" fill="none" stroke="{ghost_color}" '
            f'stroke-width="{_fmt(max(min_stroke, scale / 120.0))}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
