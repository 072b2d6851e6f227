"""Two-panel SVG line chart: magnetisation M(T) next to information I(t)."""
from __future__ import annotations

import csv
from pathlib import Path
from xml.sax.saxutils import escape

from ..errors import ColumnError

PANEL_W, PANEL_H = 380, 280
MARGIN_L, MARGIN_T, GAP = 60, 40, 80
WIDTH = MARGIN_L + 2 * PANEL_W + GAP + 30
HEIGHT = MARGIN_T + PANEL_H + 60


def read_columns(path, required) -> dict:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ColumnError(f"{path}: empty file")
        missing = [c for c in required if c not in reader.fieldnames]
        if missing:
            raise ColumnError(f"{path}: missing columns {missing}; has {reader.fieldnames}")
        rows = list(reader)
    if not rows:
        raise ColumnError(f"{path}: no data rows")
    out = {c: [] for c in required}
    for k, row in enumerate(rows):
        for c in required:
            try:
                out[c].append(float(row[c]))
            except ValueError:
                raise ColumnError(f"{path}: row {k + 1} column {c!r} is not numeric: {row[c]!r}") from None
    return out


def _ticks(lo, hi, n=5):
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def _panel(x0, xs, ys, xlabel, ylabel, title, mark_x, mark_label):
    xlo, xhi = min(xs), max(xs)
    ylo, yhi = min(0.0, min(ys)), max(ys)
    if xhi == xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    if yhi == ylo:
        yhi = ylo + 1.0

    def sx(x):
        return x0 + (x - xlo) / (xhi - xlo) * PANEL_W

    def sy(y):
        return MARGIN_T + PANEL_H - (y - ylo) / (yhi - ylo) * PANEL_H

    bottom = MARGIN_T + PANEL_H
    parts = [
        '<g class="panel">',
        f'<text x="{x0 + PANEL_W / 2:.1f}" y="{MARGIN_T - 15}" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{x0}" y1="{bottom}" x2="{x0 + PANEL_W}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{x0}" y1="{MARGIN_T}" x2="{x0}" y2="{bottom}" stroke="black"/>',
    ]
    for tx in _ticks(xlo, xhi):
        parts.append(f'<line x1="{sx(tx):.1f}" y1="{bottom}" x2="{sx(tx):.1f}" y2="{bottom + 5}" stroke="black"/>')
        parts.append(f'<text x="{sx(tx):.1f}" y="{bottom + 18}" text-anchor="middle" font-size="10">{tx:.3g}</text>')
    for ty in _ticks(ylo, yhi):
        parts.append(f'<line x1="{x0 - 5}" y1="{sy(ty):.1f}" x2="{x0}" y2="{sy(ty):.1f}" stroke="black"/>')
        parts.append(f'<text x="{x0 - 8}" y="{sy(ty) + 3:.1f}" text-anchor="end" font-size="10">{ty:.3g}</text>')
    parts.append(f'<text x="{x0 + PANEL_W / 2:.1f}" y="{bottom + 40}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>')
    parts.append(
        f'<text x="{x0 - 42}" y="{MARGIN_T + PANEL_H / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 {x0 - 42} {MARGIN_T + PANEL_H / 2:.1f})">{escape(ylabel)}</text>'
    )
    pts = [(sx(x), sy(y)) for x, y in zip(xs, ys)]
    if len(pts) == 1:
        parts.append(f'<circle class="point" cx="{pts[0][0]:.1f}" cy="{pts[0][1]:.1f}" r="4" fill="steelblue"/>')
    else:
        coords = " ".join(f"{x:.1f},{y:.1f}" for x, y in pts)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="steelblue" stroke-width="2"/>')
    if mark_x is not None:
        mx = sx(mark_x)
        parts.append(
            f'<g class="annotation"><line x1="{mx:.1f}" y1="{MARGIN_T}" x2="{mx:.1f}" y2="{bottom}" '
            f'stroke="firebrick" stroke-dasharray="4 3"/>'
            f'<text x="{mx + 4:.1f}" y="{MARGIN_T + 12}" font-size="11" fill="firebrick">{escape(mark_label)}</text></g>'
        )
    parts.append("</g>")
    return parts


def render_curves(sweep_csv, trace_csv, out_path) -> Path:
    """Write the M(T) | I(t) figure.

    ``sweep_csv`` needs ``T, mean_abs_m, susceptibility``; ``trace_csv``
    needs ``t, I``. T_crit is marked at the susceptibility peak and t_crit at
    the first t with I > 0.
    """
    m = read_columns(sweep_csv, ["T", "mean_abs_m", "susceptibility"])
    tr = read_columns(trace_csv, ["t", "I"])
    k = max(range(len(m["T"])), key=lambda i: m["susceptibility"][i])
    t_c = m["T"][k]
    t_first = next((t for t, i in zip(tr["t"], tr["I"]) if i > 0), None)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    parts += _panel(MARGIN_L, m["T"], m["mean_abs_m"], "temperature T", "|M| per spin", "Ising magnetisation",
                    t_c, f"T_crit ~ {t_c:.3g}")
    parts += _panel(MARGIN_L + PANEL_W + GAP, tr["t"], tr["I"], "time t (equal-time sets)", "I (bits)",
                    "cluster-computer information", t_first,
                    f"t_crit = {t_first:g}" if t_first is not None else "")
    parts.append("</svg>")
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text("\n".join(parts) + "\n")
    return out_path
