"""Minimal deterministic SVG 1.1 renderer for line plots and heatmaps.

Hand-rolled on purpose: the output must be byte-stable across runs and
environments for a given input, which rules out plotting libraries that
embed hashes, timestamps or version-dependent structure.  Axis labels follow
the figure conventions used throughout: detuning Δ/2π in MHz horizontally,
peak Rabi frequency Ω₀/2π in MHz vertically on heatmaps.
"""

from __future__ import annotations

import numpy as np

_WIDTH, _HEIGHT = 760, 520
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 78, 96, 40, 58

_LINE_COLORS = ("#c22e2e", "#2656a8", "#8a5a2a", "#3a8a3a", "#7b3fa0", "#3c8f96")

# Dark-blue -> teal -> yellow ramp (perceptual-ish), anchors lerped in RGB.
_RAMP = ((0.267, 0.005, 0.329), (0.283, 0.141, 0.458), (0.254, 0.265, 0.530),
         (0.207, 0.372, 0.553), (0.164, 0.471, 0.558), (0.128, 0.567, 0.551),
         (0.135, 0.659, 0.518), (0.267, 0.749, 0.441), (0.478, 0.821, 0.318),
         (0.741, 0.873, 0.150), (0.993, 0.906, 0.144))


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _color(value: float) -> str:
    v = min(max(float(value), 0.0), 1.0)
    pos = v * (len(_RAMP) - 1)
    i = min(int(pos), len(_RAMP) - 2)
    frac = pos - i
    rgb = [(_RAMP[i][k] * (1 - frac) + _RAMP[i + 1][k] * frac) for k in range(3)]
    return "#{:02x}{:02x}{:02x}".format(*(int(round(255 * c)) for c in rgb))


def _ticks(lo: float, hi: float, count: int = 5):
    return np.linspace(lo, hi, count)


def _axes_svg(xlo, xhi, ylo, yhi, xlabel, ylabel, title):
    x0, x1 = _MARGIN_L, _WIDTH - _MARGIN_R
    y0, y1 = _HEIGHT - _MARGIN_B, _MARGIN_T
    parts = []
    parts.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
                 f'fill="none" stroke="#000000" stroke-width="1"/>')
    for tx in _ticks(xlo, xhi):
        px = x0 + (tx - xlo) / (xhi - xlo) * (x1 - x0) if xhi > xlo else x0
        parts.append(f'<line x1="{_fmt(px)}" y1="{y0}" x2="{_fmt(px)}" y2="{y0 + 5}" '
                     f'stroke="#000000" stroke-width="1"/>')
        parts.append(f'<text x="{_fmt(px)}" y="{y0 + 20}" font-size="12" '
                     f'text-anchor="middle" font-family="sans-serif">{tx:.4g}</text>')
    for ty in _ticks(ylo, yhi):
        py = y0 - (ty - ylo) / (yhi - ylo) * (y0 - y1) if yhi > ylo else y0
        parts.append(f'<line x1="{x0 - 5}" y1="{_fmt(py)}" x2="{x0}" y2="{_fmt(py)}" '
                     f'stroke="#000000" stroke-width="1"/>')
        parts.append(f'<text x="{x0 - 9}" y="{_fmt(py + 4)}" font-size="12" '
                     f'text-anchor="end" font-family="sans-serif">{ty:.4g}</text>')
    parts.append(f'<text x="{(x0 + x1) / 2:.1f}" y="{_HEIGHT - 14}" font-size="14" '
                 f'text-anchor="middle" font-family="sans-serif">{xlabel}</text>')
    parts.append(f'<text x="20" y="{(y0 + y1) / 2:.1f}" font-size="14" '
                 f'text-anchor="middle" font-family="sans-serif" '
                 f'transform="rotate(-90 20 {(y0 + y1) / 2:.1f})">{ylabel}</text>')
    if title:
        parts.append(f'<text x="{(x0 + x1) / 2:.1f}" y="24" font-size="14" '
                     f'text-anchor="middle" font-family="sans-serif">{title}</text>')
    return parts


def _document(parts) -> str:
    body = "\n".join(parts)
    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_WIDTH}" height="{_HEIGHT}" '
            f'viewBox="0 0 {_WIDTH} {_HEIGHT}">\n'
            '<rect width="100%" height="100%" fill="#ffffff"/>\n'
            f"{body}\n</svg>\n")


def line_plot_svg(x, series, xlabel: str, ylabel: str, title: str = "") -> str:
    """Line plot; ``series`` is an iterable of (label, y-array)."""
    x = np.asarray(x, dtype=float)
    series = [(str(lbl), np.asarray(y, dtype=float)) for lbl, y in series]
    ylo = min(float(np.min(y)) for _, y in series)
    yhi = max(float(np.max(y)) for _, y in series)
    if yhi <= ylo:
        yhi = ylo + 1.0
    pad = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad
    xlo, xhi = float(x[0]), float(x[-1])
    x0, x1 = _MARGIN_L, _WIDTH - _MARGIN_R
    y0, y1 = _HEIGHT - _MARGIN_B, _MARGIN_T
    parts = _axes_svg(xlo, xhi, ylo, yhi, xlabel, ylabel, title)
    for k, (label, y) in enumerate(series):
        color = _LINE_COLORS[k % len(_LINE_COLORS)]
        pts = " ".join(
            f"{_fmt(x0 + (xv - xlo) / (xhi - xlo) * (x1 - x0))},"
            f"{_fmt(y0 - (yv - ylo) / (yhi - ylo) * (y0 - y1))}"
            for xv, yv in zip(x, y))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        ly = _MARGIN_T + 16 + 16 * k
        parts.append(f'<line x1="{x1 + 8}" y1="{ly - 4}" x2="{x1 + 28}" y2="{ly - 4}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{x1 + 32}" y="{ly}" font-size="12" '
                     f'font-family="sans-serif">{label}</text>')
    return _document(parts)


def heatmap_svg(x, y, matrix, xlabel: str, ylabel: str, title: str = "") -> str:
    """Heatmap of ``matrix[i, j]`` over y[i] (rows) and x[j] (columns),
    values clipped to [0, 1]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m = np.asarray(matrix, dtype=float)
    if m.shape != (y.size, x.size):
        raise ValueError(f"matrix shape {m.shape} != ({y.size}, {x.size})")
    x0, x1 = _MARGIN_L, _WIDTH - _MARGIN_R
    y0, y1 = _HEIGHT - _MARGIN_B, _MARGIN_T
    parts = []
    cw = (x1 - x0) / x.size
    ch = (y0 - y1) / y.size
    for i in range(y.size):
        py = y0 - (i + 1) * ch
        for j in range(x.size):
            px = x0 + j * cw
            parts.append(f'<rect x="{_fmt(px)}" y="{_fmt(py)}" '
                         f'width="{_fmt(cw + 0.5)}" height="{_fmt(ch + 0.5)}" '
                         f'fill="{_color(m[i, j])}"/>')
    parts.extend(_axes_svg(float(x[0]), float(x[-1]), float(y[0]), float(y[-1]),
                           xlabel, ylabel, title))
    bar_x = _WIDTH - _MARGIN_R + 24
    for k in range(40):
        v = (k + 0.5) / 40.0
        py = y0 - (k + 1) * (y0 - y1) / 40.0
        parts.append(f'<rect x="{bar_x}" y="{_fmt(py)}" width="14" '
                     f'height="{_fmt((y0 - y1) / 40.0 + 0.5)}" fill="{_color(v)}"/>')
    for v in (0.0, 0.5, 1.0):
        py = y0 - v * (y0 - y1)
        parts.append(f'<text x="{bar_x + 18}" y="{_fmt(py + 4)}" font-size="11" '
                     f'font-family="sans-serif">{v:.1f}</text>')
    return _document(parts)
