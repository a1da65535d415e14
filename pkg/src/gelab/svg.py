"""Minimal deterministic SVG chart rendering.

No display dependency; output is plain text whose plotted coordinates can
be compared structurally in tests. Handles the three figure shapes the CLI
needs: line charts, binned scatters with fitted lines, and group-mean
charts with a confidence-interval bar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

WIDTH, HEIGHT = 720, 440
MARGIN = 60
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


@dataclass
class Figure:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    _lines: list[tuple[str, list[tuple[float, float]], str, bool]] = field(
        default_factory=list
    )
    _points: list[tuple[list[tuple[float, float]], str]] = field(default_factory=list)
    _vlines: list[tuple[float, str]] = field(default_factory=list)
    _vbars: list[tuple[float, float, float, str]] = field(default_factory=list)

    def line(self, name: str, pts, color: Optional[str] = None, dashed: bool = False):
        color = color or PALETTE[len(self._lines) % len(PALETTE)]
        self._lines.append((name, [(float(x), float(y)) for x, y in pts], color, dashed))
        return self

    def scatter(self, pts, color: str = "#444444"):
        self._points.append(([(float(x), float(y)) for x, y in pts], color))
        return self

    def vline(self, x: float, color: str = "#888888"):
        self._vlines.append((float(x), color))
        return self

    def vbar(self, x: float, y_low: float, y_high: float, color: str = "#000000"):
        """Vertical bar, e.g. a confidence interval at a date."""
        self._vbars.append((float(x), float(y_low), float(y_high), color))
        return self

    # -- rendering ----------------------------------------------------------

    def render(self) -> str:
        xs, ys = [], []
        for _, pts, _, _ in self._lines:
            xs += [p[0] for p in pts]
            ys += [p[1] for p in pts]
        for pts, _ in self._points:
            xs += [p[0] for p in pts]
            ys += [p[1] for p in pts]
        for x, lo, hi in [(b[0], b[1], b[2]) for b in self._vbars]:
            xs.append(x)
            ys += [lo, hi]
        for x, _ in self._vlines:
            xs.append(x)
        if not xs or not ys:
            xs, ys = [0.0, 1.0], [0.0, 1.0]

        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        if x1 == x0:
            x1 = x0 + 1.0
        if y1 == y0:
            y1 = y0 + 1.0
        pad_y = 0.05 * (y1 - y0)
        y0, y1 = y0 - pad_y, y1 + pad_y

        def sx(x: float) -> float:
            return MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2 * MARGIN)

        def sy(y: float) -> float:
            return HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2 * MARGIN)

        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" '
            f'font-size="16">{_esc(self.title)}</text>',
            f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle" '
            f'font-size="12">{_esc(self.xlabel)}</text>',
            f'<text x="16" y="{HEIGHT / 2:.1f}" text-anchor="middle" font-size="12" '
            f'transform="rotate(-90 16 {HEIGHT / 2:.1f})">{_esc(self.ylabel)}</text>',
            # axes
            f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
            f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
            f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" '
            f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        ]
        for i in range(5):
            fx = x0 + (x1 - x0) * i / 4
            fy = y0 + (y1 - y0) * i / 4
            parts.append(
                f'<text x="{sx(fx):.1f}" y="{HEIGHT - MARGIN + 16}" '
                f'text-anchor="middle" font-size="10">{fx:.6g}</text>'
            )
            parts.append(
                f'<text x="{MARGIN - 6}" y="{sy(fy):.1f}" text-anchor="end" '
                f'font-size="10">{fy:.6g}</text>'
            )
        for x, color in self._vlines:
            parts.append(
                f'<line x1="{sx(x):.2f}" y1="{MARGIN}" x2="{sx(x):.2f}" '
                f'y2="{HEIGHT - MARGIN}" stroke="{color}" stroke-dasharray="3,3"/>'
            )
        for x, lo, hi, color in self._vbars:
            parts.append(
                f'<line x1="{sx(x):.2f}" y1="{sy(lo):.2f}" x2="{sx(x):.2f}" '
                f'y2="{sy(hi):.2f}" stroke="{color}" stroke-width="2"/>'
            )
        for pts, color in self._points:
            for x, y in pts:
                parts.append(
                    f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.5" '
                    f'fill="{color}" fill-opacity="0.6"/>'
                )
        legend_y = MARGIN
        for name, pts, color, dashed in self._lines:
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
            dash = ' stroke-dasharray="6,4"' if dashed else ""
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" '
                f'stroke-width="1.5"{dash}/>'
            )
            if name:
                parts.append(
                    f'<text x="{WIDTH - MARGIN - 4}" y="{legend_y}" text-anchor="end" '
                    f'font-size="11" fill="{color}">{_esc(name)}</text>'
                )
                legend_y += 14
        parts.append("</svg>")
        return "\n".join(parts) + "\n"


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
