"""Minimal SVG writer: axes plus polylines, no plotting dependency."""

from __future__ import annotations

from pathlib import Path

WIDTH, HEIGHT, MARGIN = 640, 400, 48

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _scale(values, lo, hi, out_lo, out_hi):
    if hi == lo:
        hi = lo + 1.0
    return [out_lo + (v - lo) * (out_hi - out_lo) / (hi - lo) for v in values]


def line_plot(path: Path | str, series: dict[str, tuple[list, list]],
              title: str = "", x_label: str = "", y_label: str = "") -> None:
    """Write a line plot; series maps label -> (x values, y values)."""
    xs = [x for pts in series.values() for x in pts[0]]
    ys = [y for pts in series.values() for y in pts[1]]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(min(ys), 0.0), max(ys)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" '
        'stroke="black"/>',
    ]
    if title:
        parts.append(f'<text x="{WIDTH // 2}" y="{MARGIN // 2}" text-anchor="middle" '
                     f'font-size="14">{title}</text>')
    if x_label:
        parts.append(f'<text x="{WIDTH // 2}" y="{HEIGHT - 8}" text-anchor="middle" '
                     f'font-size="12">{x_label}</text>')
    if y_label:
        parts.append(f'<text x="14" y="{HEIGHT // 2}" text-anchor="middle" font-size="12" '
                     f'transform="rotate(-90 14 {HEIGHT // 2})">{y_label}</text>')
    for k, (label, (px, py)) in enumerate(series.items()):
        color = PALETTE[k % len(PALETTE)]
        sx = _scale(px, x_lo, x_hi, MARGIN, WIDTH - MARGIN)
        sy = _scale(py, y_lo, y_hi, HEIGHT - MARGIN, MARGIN)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(sx, sy))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     'stroke-width="1.5"/>')
        parts.append(f'<text x="{WIDTH - MARGIN + 4}" y="{MARGIN + 16 * k}" '
                     f'font-size="11" fill="{color}">{label}</text>')
    # axis extremes as tick labels
    parts.append(f'<text x="{MARGIN}" y="{HEIGHT - MARGIN + 16}" font-size="10" '
                 f'text-anchor="middle">{x_lo:g}</text>')
    parts.append(f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - MARGIN + 16}" font-size="10" '
                 f'text-anchor="middle">{x_hi:g}</text>')
    parts.append(f'<text x="{MARGIN - 6}" y="{HEIGHT - MARGIN}" font-size="10" '
                 f'text-anchor="end">{y_lo:g}</text>')
    parts.append(f'<text x="{MARGIN - 6}" y="{MARGIN + 4}" font-size="10" '
                 f'text-anchor="end">{y_hi:g}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
