"""Minimal deterministic SVG line plots, no external renderer.

Each plot is a standalone SVG with axes, tick labels, and an XML comment
embedding the numeric series, so the artifact is self-describing and
byte-reproducible across runs.
"""

from __future__ import annotations

import math
from typing import Sequence

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 40, 55
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    span = hi - lo
    step = 10.0 ** math.floor(math.log10(span / max(n - 1, 1)))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if span / (step * mult) <= n - 1:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * span:
        out.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return out


def line_plot(
    path: str,
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    title: str,
    xlabel: str,
    ylabel: str,
    logx: bool = False,
) -> str:
    """Write an SVG of (label, xs, ys) polylines; returns the path."""
    xs_all = [float(x) for _, xs, _ in series for x in xs]
    ys_all = [float(y) for _, _, ys in series for y in ys]
    if not xs_all:
        raise ValueError("nothing to plot")
    if logx:
        xs_all = [math.log10(max(x, 1e-300)) for x in xs_all]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    inner_w = WIDTH - MARGIN_L - MARGIN_R
    inner_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x: float) -> float:
        if logx:
            x = math.log10(max(x, 1e-300))
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * inner_w

    def sy(y: float) -> float:
        return MARGIN_T + (y_hi - y) / (y_hi - y_lo) * inner_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<!-- data: {title} -->",
    ]
    for label, xs, ys in series:
        xs_txt = ",".join(_fmt(float(x)) for x in xs)
        ys_txt = ",".join(_fmt(float(y)) for y in ys)
        parts.append(f"<!-- series {label}: x=[{xs_txt}] y=[{ys_txt}] -->")
    parts.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    parts.append(
        f'<text x="{WIDTH / 2:g}" y="24" text-anchor="middle" '
        f'font-family="monospace" font-size="15">{title}</text>'
    )
    ax = (
        f'<line x1="{MARGIN_L}" y1="{HEIGHT - MARGIN_B}" x2="{WIDTH - MARGIN_R}" '
        f'y2="{HEIGHT - MARGIN_B}" stroke="black"/>'
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" '
        f'y2="{HEIGHT - MARGIN_B}" stroke="black"/>'
    )
    parts.append(ax)
    x_tick_vals = _ticks(x_lo, x_hi)
    for t in x_tick_vals:
        v = 10.0**t if logx else t
        px = MARGIN_L + (t - x_lo) / (x_hi - x_lo) * inner_w
        label = f"{v:.3g}"
        parts.append(
            f'<line x1="{px:.2f}" y1="{HEIGHT - MARGIN_B}" x2="{px:.2f}" '
            f'y2="{HEIGHT - MARGIN_B + 5}" stroke="black"/>'
            f'<text x="{px:.2f}" y="{HEIGHT - MARGIN_B + 18}" text-anchor="middle" '
            f'font-family="monospace" font-size="11">{label}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        py = sy(t)
        parts.append(
            f'<line x1="{MARGIN_L - 5}" y1="{py:.2f}" x2="{MARGIN_L}" '
            f'y2="{py:.2f}" stroke="black"/>'
            f'<text x="{MARGIN_L - 8}" y="{py + 4:.2f}" text-anchor="end" '
            f'font-family="monospace" font-size="11">{t:.3g}</text>'
        )
    parts.append(
        f'<text x="{WIDTH / 2:g}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="monospace" font-size="13">{xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{HEIGHT / 2:g}" text-anchor="middle" '
        f'font-family="monospace" font-size="13" '
        f'transform="rotate(-90 18 {HEIGHT / 2:g})">{ylabel}</text>'
    )
    for k, (label, xs, ys) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{sx(float(x)):.2f},{sy(float(y)):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.2"/>')
        if len(series) > 1 and k < 12:
            ly = MARGIN_T + 14 + 14 * k
            parts.append(
                f'<line x1="{WIDTH - MARGIN_R - 130}" y1="{ly}" '
                f'x2="{WIDTH - MARGIN_R - 110}" y2="{ly}" stroke="{color}" stroke-width="2"/>'
                f'<text x="{WIDTH - MARGIN_R - 104}" y="{ly + 4}" '
                f'font-family="monospace" font-size="11">{label}</text>'
            )
    parts.append("</svg>")
    content = "\n".join(parts) + "\n"
    with open(path, "w") as fh:
        fh.write(content)
    return path
