"""SVG drawings of point sets, matchings and cut lines.

Coordinates are printed with six significant digits; these files are for
looking at, never for reading back into the predicates.
"""
from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import quoteattr

from .geom import Color, Line
from .matching import BichromaticPointSet, BRMatching

FILL = {Color.RED: "#d62728", Color.BLUE: "#1f77b4"}


def _f(v) -> str:
    return f"{float(v):.6g}"


def _clip_line(line: Line, x0, y0, x1, y1):
    """Endpoints of the line inside the box, or None."""
    A, B, C = (float(line.A), float(line.B), float(line.C))
    pts = []
    if B != 0:
        for x in (x0, x1):
            y = -(A * x + C) / B
            if y0 <= y <= y1:
                pts.append((x, y))
    if A != 0:
        for y in (y0, y1):
            x = -(B * y + C) / A
            if x0 <= x <= x1:
                pts.append((x, y))
    pts = sorted(set(pts))
    if len(pts) < 2:
        return None
    return pts[0], pts[-1]


def render_svg(P: BichromaticPointSet, matchings: Sequence[BRMatching] = (),
               lines: Sequence[Line] = (), size: int = 480) -> str:
    """First matching solid, second dashed, cut lines thin and grey."""
    xs = [float(p[0]) for p in P.reds + P.blues]
    ys = [float(p[1]) for p in P.reds + P.blues]
    w = max(max(xs) - min(xs), 1e-9)
    h = max(max(ys) - min(ys), 1e-9)
    mx, my = 0.05 * w, 0.05 * h
    bx0, bx1 = min(xs) - mx, max(xs) + mx
    by0, by1 = min(ys) - my, max(ys) + my
    span = max(bx1 - bx0, by1 - by0)
    r = span / 80
    sw = span / 300

    def flip(y):
        return by0 + by1 - y     # svg y grows downwards

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="{_f(bx0)} {_f(by0)} {_f(bx1 - bx0)} {_f(by1 - by0)}">']
    for line in lines:
        seg = _clip_line(line, bx0, by0, bx1, by1)
        if seg:
            (ax, ay), (cx, cy) = seg
            out.append(f'<line x1="{_f(ax)}" y1="{_f(flip(ay))}" x2="{_f(cx)}" y2="{_f(flip(cy))}" '
                       f'stroke="#999999" stroke-width="{_f(sw / 2)}"/>')
    for k, M in enumerate(matchings[:2]):
        dash = f' stroke-dasharray="{_f(4 * sw)} {_f(3 * sw)}"' if k == 1 else ""
        for rr, bb in M.pairs:
            a, b = P.reds[rr], P.blues[bb]
            out.append(f'<line x1="{_f(a[0])}" y1="{_f(flip(a[1]))}" x2="{_f(b[0])}" '
                       f'y2="{_f(flip(b[1]))}" stroke="black" stroke-width="{_f(sw)}"{dash}/>')
    for color, pts in ((Color.RED, P.reds), (Color.BLUE, P.blues)):
        for p in pts:
            out.append(f'<circle cx="{_f(p[0])}" cy="{_f(flip(p[1]))}" r="{_f(r)}" '
                       f'fill={quoteattr(FILL[color])}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path: str, svg: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)


def render_sequence(P: BichromaticPointSet, ms: Sequence[BRMatching], directory: str,
                    lines: Sequence[Line] = (), prefix: str = "step") -> list[str]:
    """One file per matching; each frame also shows the next matching dashed."""
    import os
    os.makedirs(directory, exist_ok=True)
    width = max(3, len(str(len(ms) - 1)))
    paths = []
    for k, M in enumerate(ms):
        frame = [M] + ([ms[k + 1]] if k + 1 < len(ms) else [])
        path = os.path.join(directory, f"{prefix}_{k:0{width}d}.svg")
        write_svg(path, render_svg(P, frame, lines))
        paths.append(path)
    return paths
