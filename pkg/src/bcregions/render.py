"""Static SVG plots of rate regions, axes in bits.

Output is deterministic: no timestamps, fixed float formatting, entries
drawn in the order given.
"""
from __future__ import annotations

import math

from .geometry import Region2D

__all__ = ["region_svg", "DEFAULT_COLORS"]

DEFAULT_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")

_W, _H = 480, 480
_MARGIN_L, _MARGIN_B, _MARGIN_T, _MARGIN_R = 64, 52, 20, 20


def _tick_step(span: float) -> float:
    if span <= 0:
        return 0.25
    raw = span / 5
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            return mult * mag
    return 10.0 * mag


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def region_svg(entries: list[tuple[str, Region2D]], title: str = "") -> str:
    """Render labeled regions overlaid on shared axes.

    `entries` holds (label, region) pairs; colors cycle through a fixed
    palette in order.
    """
    max_r1 = max_r2 = 0.0
    for _, region in entries:
        for vx, vy in region.vertices():
            max_r1 = max(max_r1, vx)
            max_r2 = max(max_r2, vy)
    max_r1 = max(max_r1 * 1.08, 0.1)
    max_r2 = max(max_r2 * 1.08, 0.1)

    plot_w = _W - _MARGIN_L - _MARGIN_R
    plot_h = _H - _MARGIN_T - _MARGIN_B

    def sx(r1: float) -> float:
        return _MARGIN_L + r1 / max_r1 * plot_w

    def sy(r2: float) -> float:
        return _H - _MARGIN_B - r2 / max_r2 * plot_h

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        lines.append(
            f'<text x="{_W / 2:.1f}" y="14" text-anchor="middle" font-size="13" font-family="sans-serif">{title}</text>'
        )

    # filled region parts, then outlines, so overlaps stay readable
    for idx, (label, region) in enumerate(entries):
        color = DEFAULT_COLORS[idx % len(DEFAULT_COLORS)]
        for part in region.parts:
            pts = " ".join(f"{sx(vx):.2f},{sy(vy):.2f}" for vx, vy in part.vertices)
            if len(part.vertices) >= 3:
                lines.append(f'<polygon points="{pts}" fill="{color}" fill-opacity="0.30" stroke="{color}" stroke-width="1.5"/>')
            else:
                lines.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2.5"/>')

    # axes
    x0, y0 = sx(0.0), sy(0.0)
    lines.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{sx(max_r1):.2f}" y2="{y0:.2f}" stroke="black" stroke-width="1"/>')
    lines.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x0:.2f}" y2="{sy(max_r2):.2f}" stroke="black" stroke-width="1"/>')

    step1 = _tick_step(max_r1)
    t = step1
    while t <= max_r1 + 1e-12:
        lines.append(f'<line x1="{sx(t):.2f}" y1="{y0:.2f}" x2="{sx(t):.2f}" y2="{y0 + 5:.2f}" stroke="black" stroke-width="1"/>')
        lines.append(
            f'<text x="{sx(t):.2f}" y="{y0 + 18:.2f}" text-anchor="middle" font-size="11" font-family="sans-serif">{_fmt(t)}</text>'
        )
        t += step1
    step2 = _tick_step(max_r2)
    t = step2
    while t <= max_r2 + 1e-12:
        lines.append(f'<line x1="{x0 - 5:.2f}" y1="{sy(t):.2f}" x2="{x0:.2f}" y2="{sy(t):.2f}" stroke="black" stroke-width="1"/>')
        lines.append(
            f'<text x="{x0 - 8:.2f}" y="{sy(t) + 4:.2f}" text-anchor="end" font-size="11" font-family="sans-serif">{_fmt(t)}</text>'
        )
        t += step2

    lines.append(
        f'<text x="{sx(max_r1 / 2):.2f}" y="{_H - 12}" text-anchor="middle" font-size="12" font-family="sans-serif">R1 (bits)</text>'
    )
    lines.append(
        f'<text x="16" y="{sy(max_r2 / 2):.2f}" text-anchor="middle" font-size="12" font-family="sans-serif" '
        f'transform="rotate(-90 16 {sy(max_r2 / 2):.2f})">R2 (bits)</text>'
    )

    # legend
    for idx, (label, _) in enumerate(entries):
        color = DEFAULT_COLORS[idx % len(DEFAULT_COLORS)]
        ly = _MARGIN_T + 14 + idx * 18
        lx = _W - _MARGIN_R - 150
        lines.append(f'<rect x="{lx}" y="{ly - 10}" width="12" height="12" fill="{color}" fill-opacity="0.45" stroke="{color}"/>')
        lines.append(f'<text x="{lx + 18}" y="{ly}" font-size="11" font-family="sans-serif">{label}</text>')

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
