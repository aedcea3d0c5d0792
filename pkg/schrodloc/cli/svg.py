""" Line plots as plain SVG: polylines, axes, ticks, a legend """

from __future__ import annotations

from collections import abc
from typing import Optional
from xml.sax.saxutils import escape

import numpy as np

WIDTH = 640
HEIGHT = 400
MARGIN = 56

COLORS = ('#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b')

Series = abc.Mapping[str, tuple[abc.Sequence[float], abc.Sequence[float]]]


def line_plot(series: Series, *, title: str, xlabel: str, ylabel: str,
              log_x: bool = False, log_y: bool = False,
              config_hash: Optional[str] = None) -> str:
    """ An SVG document with one polyline per series; non-finite (or, on log axes, non-positive) points are dropped """
    cleaned = {
        label: _clean(xs, ys, log_x, log_y)
        for label, (xs, ys) in series.items()
    }
    cleaned = {label: xy for label, xy in cleaned.items() if xy[0].size}

    xs = np.concatenate([x for x, _ in cleaned.values()]) if cleaned else np.array([0.0, 1.0])
    ys = np.concatenate([y for _, y in cleaned.values()]) if cleaned else np.array([0.0, 1.0])
    x_lo, x_hi = _span(xs)
    y_lo, y_hi = _span(ys)

    def px(x: np.ndarray) -> np.ndarray:
        return MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2 * MARGIN)

    def py(y: np.ndarray) -> np.ndarray:
        return HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2 * MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
    ]
    if config_hash:
        parts.append(f'<!-- config_hash={config_hash} -->')
    parts += [
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
        # Axes
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="14" y="{HEIGHT / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {HEIGHT / 2})">{escape(ylabel)}</text>',
    ]

    # Ticks
    for value in np.linspace(x_lo, x_hi, 5):
        x = float(px(np.array(value)))
        parts.append(f'<line x1="{x:.2f}" y1="{HEIGHT - MARGIN}" x2="{x:.2f}" y2="{HEIGHT - MARGIN + 4}" stroke="black"/>')
        parts.append(f'<text x="{x:.2f}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle" font-size="10">'
                     f'{_tick(value, log_x)}</text>')
    for value in np.linspace(y_lo, y_hi, 5):
        y = float(py(np.array(value)))
        parts.append(f'<line x1="{MARGIN - 4}" y1="{y:.2f}" x2="{MARGIN}" y2="{y:.2f}" stroke="black"/>')
        parts.append(f'<text x="{MARGIN - 6}" y="{y + 3:.2f}" text-anchor="end" font-size="10">'
                     f'{_tick(value, log_y)}</text>')

    # Series and legend
    for i, (label, (x, y)) in enumerate(cleaned.items()):
        color = COLORS[i % len(COLORS)]
        points = ' '.join(f'{a:.2f},{b:.2f}' for a, b in zip(px(x), py(y)))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')
        legend_y = MARGIN + 14 * i
        parts.append(f'<text x="{WIDTH - MARGIN}" y="{legend_y}" text-anchor="end" font-size="11" '
                     f'fill="{color}">{escape(label)}</text>')

    parts.append('</svg>')
    return '\n'.join(parts) + '\n'


def _clean(xs: abc.Sequence[float], ys: abc.Sequence[float], log_x: bool, log_y: bool) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    keep = np.isfinite(x) & np.isfinite(y)
    if log_x:
        keep &= x > 0
    if log_y:
        keep &= y > 0
    x, y = x[keep], y[keep]
    with np.errstate(divide='ignore'):
        return (np.log10(x) if log_x else x), (np.log10(y) if log_y else y)


def _span(values: np.ndarray) -> tuple[float, float]:
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi == lo:
        pad = abs(lo) * 0.05 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def _tick(value: float, log: bool) -> str:
    return f'1e{value:.1f}' if log else f'{value:.3g}'
