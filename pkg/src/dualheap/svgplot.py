"""Minimal deterministic SVG scatter plot of operation counts."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .bench import BenchmarkRecord

WIDTH, HEIGHT = 720, 480
LEFT, RIGHT, TOP, BOTTOM = 90, 170, 40, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1
    raw = (hi - lo) / count
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    first = math.floor(lo / step)
    last = math.ceil(hi / step)
    return [i * step for i in range(first, last + 1)]


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def render_svg(records: list[BenchmarkRecord], title: str = "Operations per sort") -> str:
    """x = n, y = comparisons + moves; one circle per record, one colour
    per algorithm in order of first appearance."""
    algos: list[str] = []
    for r in records:
        if r.algorithm not in algos:
            algos.append(r.algorithm)
    colour = {a: PALETTE[i % len(PALETTE)] for i, a in enumerate(algos)}

    xmax = max((r.n for r in records), default=1) or 1
    ymax = max((r.operations for r in records), default=1) or 1
    xticks = _nice_ticks(0, xmax)
    yticks = _nice_ticks(0, ymax)
    xmax, ymax = max(xmax, xticks[-1]), max(ymax, yticks[-1])
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(x):
        return LEFT + pw * x / xmax

    def sy(y):
        return TOP + ph * (1 - y / ymax)

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{escape(title)}</text>',
        '<g class="axes" stroke="black" stroke-width="1">',
        f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}"/>',
        "</g>",
        '<g class="ticks" font-family="sans-serif" font-size="11">',
    ]
    for t in xticks:
        x = sx(t)
        out.append(f'<line x1="{x:.2f}" y1="{TOP + ph}" x2="{x:.2f}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{TOP + ph + 18}" text-anchor="middle">{_fmt(t)}</text>')
    for t in yticks:
        y = sy(t)
        out.append(f'<line x1="{LEFT - 5}" y1="{y:.2f}" x2="{LEFT}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{y + 4:.2f}" text-anchor="end">{_fmt(t)}</text>')
    out.append("</g>")
    out.append(f'<text class="xlabel" x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle" '
               'font-family="sans-serif" font-size="13">n (elements)</text>')
    out.append(f'<text class="ylabel" x="20" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="13" transform="rotate(-90 20 {TOP + ph / 2:.1f})">'
               'comparisons + moves</text>')
    out.append('<g class="marks">')
    for r in records:
        out.append(f'<circle class="mark" data-algorithm="{escape(r.algorithm)}" '
                   f'cx="{sx(r.n):.2f}" cy="{sy(r.operations):.2f}" r="2.5" '
                   f'fill="{colour[r.algorithm]}" fill-opacity="0.6"/>')
    out.append("</g>")
    out.append('<g class="legend" font-family="sans-serif" font-size="12">')
    for i, a in enumerate(algos):
        y = TOP + 10 + 20 * i
        out.append(f'<g class="legend-entry"><circle cx="{LEFT + pw + 20}" cy="{y}" r="5" '
                   f'fill="{colour[a]}"/><text x="{LEFT + pw + 32}" y="{y + 4}">{escape(a)}</text></g>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
