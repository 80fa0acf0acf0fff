"""Self-contained SVG 1.1 histograms of benchmark records, no external assets.

One file per metric; methods are stacked as separate panels with a shared
x range (30 bins over the pooled finite values) so their distributions are
directly comparable, mirroring the stacked layout of benchmark figures.
"""

from __future__ import annotations

import os
from xml.sax.saxutils import escape

import numpy as np

from .core import METHODS, ExperimentRecord

NUM_BINS = 30
_COLORS = {"hedge_fw_aggregate": "#1f77b4", "hedge_fw_select": "#2ca02c", "cv_lasso": "#d62728"}
_FALLBACK_COLOR = "#7f7f7f"

_PANEL_W, _PANEL_H = 640, 150
_MARGIN_L, _MARGIN_R, _MARGIN_T, _PANEL_GAP, _MARGIN_B = 70, 30, 50, 40, 55

METRIC_LABELS = {"pred_error": "prediction error", "wall_time_s": "wall time (s)"}


def _collect(records, attr):
    values = {}
    for r in records:
        if r.error:
            continue
        v = getattr(r, attr)
        if np.isfinite(v):
            values.setdefault(r.method, []).append(v)
    return {m: np.asarray(v) for m, v in values.items() if v}


def _svg_histogram(values_by_method: dict, metric: str) -> str:
    methods = [m for m in METHODS if m in values_by_method]
    methods += [m for m in values_by_method if m not in METHODS]
    pooled = np.concatenate([values_by_method[m] for m in methods])
    lo, hi = float(pooled.min()), float(pooled.max())
    if lo == hi:  # degenerate range: one centered bin still renders
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, NUM_BINS + 1)
    counts = {m: np.histogram(values_by_method[m], bins=edges)[0] for m in methods}
    max_count = max(int(c.max()) for c in counts.values())
    max_count = max(max_count, 1)

    width = _MARGIN_L + _PANEL_W + _MARGIN_R
    height = _MARGIN_T + len(methods) * (_PANEL_H + _PANEL_GAP) - _PANEL_GAP + _MARGIN_B
    label = METRIC_LABELS.get(metric, metric)

    def x_of(v):
        return _MARGIN_L + (v - lo) / (hi - lo) * _PANEL_W

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" font-family="sans-serif" font-size="16" '
        f'text-anchor="middle">{escape(label)} by method</text>',
    ]
    # legend row under the title
    lx = _MARGIN_L
    for m in methods:
        color = _COLORS.get(m, _FALLBACK_COLOR)
        parts.append(f'<g class="legend-entry"><rect x="{lx}" y="32" width="12" height="12" fill="{color}"/>'
                     f'<text x="{lx + 16}" y="42" font-family="sans-serif" font-size="11">{escape(m)}</text></g>')
        lx += 16 + 9 * len(m) + 24

    for k, m in enumerate(methods):
        top = _MARGIN_T + k * (_PANEL_H + _PANEL_GAP)
        base = top + _PANEL_H
        color = _COLORS.get(m, _FALLBACK_COLOR)
        bars = []
        for b in range(NUM_BINS):
            c = int(counts[m][b])
            if c == 0:
                continue
            x0 = x_of(edges[b])
            bw = x_of(edges[b + 1]) - x0
            bh = c / max_count * (_PANEL_H - 10)
            bars.append(
                f'<rect x="{x0:.2f}" y="{base - bh:.2f}" width="{bw:.2f}" '
                f'height="{bh:.2f}" fill="{color}" stroke="white" stroke-width="0.5"/>'
            )
        axis = [
            f'<line x1="{_MARGIN_L}" y1="{base}" x2="{_MARGIN_L + _PANEL_W}" y2="{base}" stroke="black"/>',
            f'<line x1="{_MARGIN_L}" y1="{top}" x2="{_MARGIN_L}" y2="{base}" stroke="black"/>',
        ]
        for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
            v = lo + frac * (hi - lo)
            xt = x_of(v)
            axis.append(f'<line x1="{xt:.2f}" y1="{base}" x2="{xt:.2f}" y2="{base + 5}" stroke="black"/>')
            axis.append(
                f'<text x="{xt:.2f}" y="{base + 18}" font-family="sans-serif" '
                f'font-size="10" text-anchor="middle">{v:.3g}</text>'
            )
        for cval in (0, max_count):
            yt = base - (cval / max_count) * (_PANEL_H - 10)
            axis.append(
                f'<text x="{_MARGIN_L - 8}" y="{yt + 3:.2f}" font-family="sans-serif" '
                f'font-size="10" text-anchor="end">{cval}</text>'
            )
        title = (
            f'<text x="{_MARGIN_L + 4}" y="{top + 12}" font-family="sans-serif" '
            f'font-size="12" fill="{color}">{escape(m)} (n={values_by_method[m].size})</text>'
        )
        parts.append(
            f'<g class="histogram" data-method="{escape(m)}">' + "".join(bars + axis) + title + "</g>"
        )

    parts.append(
        f'<text x="{_MARGIN_L + _PANEL_W / 2:.1f}" y="{height - 16}" font-family="sans-serif" '
        f'font-size="12" text-anchor="middle">{escape(label)}</text>'
    )
    parts.append(
        f'<text x="16" y="{height / 2:.1f}" font-family="sans-serif" font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 16 {height / 2:.1f})">trials</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_svg_histograms(records: list[ExperimentRecord], out_dir) -> list[str]:
    """Write pred_error.svg and wall_time_s.svg under out_dir; returns the paths."""
    records = list(records)
    if not records:
        raise ValueError("no records to plot")
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for metric in ("pred_error", "wall_time_s"):
        values = _collect(records, metric)
        if not values:
            raise ValueError(f"no finite values for metric {metric!r}")
        path = os.path.join(out_dir, f"{metric}.svg")
        with open(path, "w") as fh:
            fh.write(_svg_histogram(values, metric))
        paths.append(path)
    return paths
