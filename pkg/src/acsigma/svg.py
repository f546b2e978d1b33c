"""Deterministic SVG 1.1 figures.

Coordinates are rendered at 12 significant digits; the files are for
viewing only and are never parsed back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

from .geometry import Polygon
from .regions import GenusRegion


def num(v) -> str:
    s = format(float(v), ".12g")
    return "0" if s == "-0" else s


@dataclass
class Figure:
    """Collects shapes in world coordinates and writes them with y pointing up."""

    width: int = 480
    height: int = 480
    margin: float = 0.08
    items: list[tuple[str, tuple]] = field(default_factory=list)

    def polygon(self, pts: Sequence, fill: str = "#cfe0f5", stroke: str = "#000000", dashed: bool = False):
        self.items.append(("polygon", (tuple(pts), fill, stroke, dashed)))

    def polyline(self, pts: Sequence, stroke: str = "#000000", dashed: bool = False):
        self.items.append(("polyline", (tuple(pts), stroke, dashed)))

    def point(self, p, label: str = "", color: str = "#c00000"):
        self.items.append(("point", (p, label, color)))

    def region(self, r: GenusRegion):
        self.polygon(r.outer.vertices)
        for w in r.windows:
            self.polygon(w.vertices, fill="#ffffff")

    def _frame(self):
        pts = []
        for kind, data in self.items:
            if kind == "point":
                pts.append(data[0])
            else:
                pts.extend(data[0])
        if not pts:
            return 0.0, 0.0, 1.0
        xs = [float(p[0]) for p in pts]
        ys = [float(p[1]) for p in pts]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
        span = max(x1 - x0, y1 - y0) or 1.0
        usable = min(self.width, self.height) * (1 - 2 * self.margin)
        return x0, y1, usable / span

    def render(self) -> str:
        x0, ytop, scale = self._frame()
        off = min(self.width, self.height) * self.margin

        def tx(p) -> str:
            return f"{num(off + (float(p[0]) - x0) * scale)},{num(off + (ytop - float(p[1])) * scale)}"

        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">',
        ]
        for kind, data in self.items:
            if kind == "polygon":
                pts, fill, stroke, dashed = data
                dash = ' stroke-dasharray="4,3"' if dashed else ""
                out.append(
                    f'<polygon points="{" ".join(tx(p) for p in pts)}" fill="{fill}" '
                    f'stroke="{stroke}" stroke-width="1.5"{dash}/>'
                )
            elif kind == "polyline":
                pts, stroke, dashed = data
                dash = ' stroke-dasharray="4,3"' if dashed else ""
                out.append(
                    f'<polyline points="{" ".join(tx(p) for p in pts)}" fill="none" '
                    f'stroke="{stroke}" stroke-width="1"{dash}/>'
                )
            else:
                p, label, color = data
                x, y = tx(p).split(",")
                out.append(f'<circle cx="{x}" cy="{y}" r="3" fill="{color}"/>')
                if label:
                    out.append(f'<text x="{x}" y="{y}" dx="4" dy="-4" font-size="11">{escape(label)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def stage_figure(stage, highlight: Iterable[Sequence] = ()) -> str:
    """A polygon or region snapshot, with optional dashed cell outlines."""
    fig = Figure()
    if isinstance(stage, Polygon):
        fig.polygon(stage.vertices)
    else:
        fig.region(stage)
    for cell in highlight:
        fig.polygon(cell, fill="none", stroke="#c00000", dashed=True)
    return fig.render()


def ratio_plot(rows: Sequence[tuple[float, float]], reference: float | None = None) -> str:
    """Line plot of ``(n, ratio)`` pairs, with an optional horizontal reference line."""
    fig = Figure(width=520, height=360)
    pts = [(float(n), float(r)) for n, r in rows]
    fig.polyline(pts, stroke="#1f4e9c")
    for n, r in pts:
        fig.point((n, r), label=num(r), color="#1f4e9c")
    if reference is not None and pts:
        fig.polyline([(pts[0][0], reference), (pts[-1][0], reference)], stroke="#c00000", dashed=True)
    return fig.render()


__all__ = ["Figure", "num", "ratio_plot", "stage_figure"]
