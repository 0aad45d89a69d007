"""Dependency-free SVG line plots of sweep CSV files."""

from __future__ import annotations

import csv
import io
import math
from xml.sax.saxutils import escape

from .errors import SchemaError

WIDTH, HEIGHT = 720, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 200, 20, 50
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def parse_csv(text: str) -> tuple[list[str], list[list[float | None]]]:
    rows = list(csv.reader(io.StringIO(text)))
    if len(rows) < 2:
        raise SchemaError("CSV needs a header row and at least one data row")
    header = rows[0]
    if len(header) < 2:
        raise SchemaError("CSV needs an axis column and at least one quantity column")
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise SchemaError(f"line {lineno}: expected {len(header)} cells, got {len(row)}")
        try:
            data.append([float(c) if c != "" else None for c in row])
        except ValueError as exc:
            raise SchemaError(f"line {lineno}: {exc}") from exc
        if data[-1][0] is None:
            raise SchemaError(f"line {lineno}: missing axis value")
    return header, data


def _ticks(lo: float, hi: float, log: bool) -> list[float]:
    if log:
        return [10.0 ** k for k in range(math.ceil(math.log10(lo) - 1e-9),
                                         math.floor(math.log10(hi) + 1e-9) + 1)]
    if hi == lo:
        return [lo]
    step = 10 ** math.floor(math.log10((hi - lo) / 5))
    for mult in (1, 2, 5, 10):
        if (hi - lo) / (step * mult) <= 6:
            step *= mult
            break
    start = math.ceil(lo / step) * step
    out, v = [], start
    while v <= hi + 1e-12 * abs(hi):
        out.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return out


def render_svg(text: str) -> str:
    """SVG with one polyline per quantity column; x is logarithmic when the axis spans >= 2 decades."""
    header, data = parse_csv(text)
    xs = [r[0] for r in data]
    log_x = min(xs) > 0 and max(xs) / min(xs) >= 100
    ys = [v for r in data for v in r[1:] if v is not None and math.isfinite(v)]
    if not ys:
        raise SchemaError("CSV has no numeric quantity values")
    y_lo, y_hi = min(ys), max(ys)
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    fx = (lambda v: math.log10(v)) if log_x else (lambda v: v)
    x_lo, x_hi = fx(min(xs)), fx(max(xs))
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(v):
        return MARGIN_LEFT + (fx(v) - x_lo) / (x_hi - x_lo) * pw

    def py(v):
        return MARGIN_TOP + (1 - (v - y_lo) / (y_hi - y_lo)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
           f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" '
           'fill="none" stroke="black"/>']
    for t in _ticks(min(xs), max(xs), log_x):
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{MARGIN_TOP + ph}" x2="{x:.2f}" '
                   f'y2="{MARGIN_TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{MARGIN_TOP + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y_lo, y_hi, False):
        y = py(t)
        out.append(f'<line x1="{MARGIN_LEFT - 5}" y1="{y:.2f}" x2="{MARGIN_LEFT}" '
                   f'y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_LEFT - 8}" y="{y + 4:.2f}" text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{MARGIN_LEFT + pw / 2:.2f}" y="{HEIGHT - 10}" '
               f'text-anchor="middle">{escape(header[0])}{" (log)" if log_x else ""}</text>')

    for j, name in enumerate(header[1:], start=1):
        color = PALETTE[(j - 1) % len(PALETTE)]
        segment: list[str] = []
        segments = []
        for r in data:
            v = r[j]
            if v is None or not math.isfinite(v):
                if segment:
                    segments.append(segment)
                segment = []
                continue
            segment.append(f"{px(r[0]):.2f},{py(v):.2f}")
        if segment:
            segments.append(segment)
        for seg in segments:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                       f'points="{" ".join(seg)}"/>')
        ly = MARGIN_TOP + 14 * j
        lx = WIDTH - MARGIN_RIGHT + 10
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 25}" y="{ly}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
