"""Minimal log-log line chart as standalone SVG (polylines and ticks)."""
from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


class Series:
    def __init__(self, label: str, x: Sequence[float], y: Sequence[float], dashed: bool = False, color=None):
        self.label, self.x, self.y, self.dashed, self.color = label, list(x), list(y), dashed, color


def loglog_svg(series: Sequence[Series], title: str, xlabel: str, ylabel: str,
               width: int = 640, height: int = 420) -> str:
    pts = [(x, y) for s in series for x, y in zip(s.x, s.y) if x > 0 and y > 0]
    if not pts:
        raise ValueError("nothing positive to plot")
    lx = [math.log10(x) for x, _ in pts]
    ly = [math.log10(y) for _, y in pts]
    x0, x1 = math.floor(min(lx)), math.ceil(max(lx))
    y0, y1 = min(ly), max(ly)
    pad = 0.05 * (y1 - y0 or 1.0)
    y0, y1 = y0 - pad, y1 + pad
    left, right, top, bottom = 70, 20, 40, 50
    pw, ph = width - left - right, height - top - bottom

    def sx(v):
        return left + (math.log10(v) - x0) / ((x1 - x0) or 1.0) * pw

    def sy(v):
        return top + (1.0 - (math.log10(v) - y0) / ((y1 - y0) or 1.0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="15" y="{top + ph / 2:.1f}" text-anchor="middle" transform="rotate(-90 15 {top + ph / 2:.1f})">{escape(ylabel)}</text>',
    ]
    for e in range(x0, x1 + 1):
        px = sx(10.0**e)
        out.append(f'<line x1="{px:.1f}" y1="{top + ph}" x2="{px:.1f}" y2="{top + ph + 5}" stroke="#444"/>')
        out.append(f'<text x="{px:.1f}" y="{top + ph + 18}" text-anchor="middle">1e{e}</text>')
    for k in range(5):
        v = 10.0 ** (y0 + (y1 - y0) * k / 4)
        py = sy(v)
        out.append(f'<line x1="{left - 5}" y1="{py:.1f}" x2="{left}" y2="{py:.1f}" stroke="#444"/>')
        out.append(f'<text x="{left - 8}" y="{py + 4:.1f}" text-anchor="end">{v:.3g}</text>')
    for k, s in enumerate(series):
        color = s.color or _COLORS[k % len(_COLORS)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(s.x, s.y) if x > 0 and y > 0)
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"{dash}/>')
        ly_ = top + 16 + 16 * k
        out.append(f'<line x1="{left + 10}" y1="{ly_ - 4}" x2="{left + 34}" y2="{ly_ - 4}" stroke="{color}" stroke-width="2"{dash}/>')
        out.append(f'<text x="{left + 40}" y="{ly_}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
