"""Deterministic result persistence: JSON, CSV, and SVG emission.

All real numbers are written with 17 significant digits, enough to
round-trip IEEE doubles exactly, and every writer produces identical
bytes for identical inputs (no timestamps, no environment leakage).
"""

from __future__ import annotations

import math

import numpy as np


def fmt_real(x: float) -> str:
    """A real with 17 significant digits (round-trips doubles exactly)."""
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON text with insertion-ordered keys and 17-digit reals."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, str):
        return _json_string(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        # JSON has no literal for non-finite reals
        return fmt_real(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = [dumps(v, indent + 2) for v in obj]
        if not items:
            return "[]"
        return "[\n" + ",\n".join(inner + it for it in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            inner + _json_string(str(k)) + ": " + dumps(v, indent + 2) for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _json_string(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))
        fh.write("\n")


CSV_HEADER = ("experiment_id", "trajectory_id", "n", "distance", "mode")


def write_csv(path, rows):
    """Per-checkpoint rows (experiment_id, trajectory_id, n, distance, mode)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for exp_id, traj_id, n, distance, mode in rows:
            fh.write(f"{exp_id},{traj_id},{int(n)},{fmt_real(distance)},{mode}\n")


def read_csv(path):
    """Parse a per-checkpoint CSV back into tuples; raises on malformed input."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or tuple(lines[0].split(",")) != CSV_HEADER:
        raise ValueError(f"missing or wrong CSV header, expected {','.join(CSV_HEADER)}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 5:
            raise ValueError(f"malformed CSV row: {ln!r}")
        rows.append((parts[0], parts[1], int(parts[2]), float(parts[3]), parts[4]))
    return rows


# ---------------------------------------------------------------------------
# SVG: a self-contained log-log line chart, one polyline per trajectory with
# a median overlay.  Hand-rolled so the output bytes are deterministic.
# ---------------------------------------------------------------------------

_W, _H = 800, 560
_ML, _MR, _MT, _MB = 70, 20, 20, 50


def _fmt_coord(x: float) -> str:
    return format(x, ".3f")


def render_svg(rows) -> str:
    """Line chart of distance against n on log-log axes.

    Rows are (experiment_id, trajectory_id, n, distance, mode); points
    with nonpositive distance cannot be drawn on a log axis and are
    skipped.  Raises ValueError when nothing is drawable.
    """
    series = {}
    for exp, traj, n, dist, _mode in rows:
        series.setdefault(f"{exp}/{traj}", []).append((int(n), float(dist)))
    drawable = {
        key: sorted((n, d) for n, d in pts if d > 0.0 and n > 0) for key, pts in series.items()
    }
    drawable = {k: v for k, v in drawable.items() if v}
    if not drawable:
        raise ValueError("no drawable points: every distance is nonpositive")

    xs = [math.log10(n) for pts in drawable.values() for n, _ in pts]
    ys = [math.log10(d) for pts in drawable.values() for _, d in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 - x0 < 1e-9:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 - y0 < 1e-9:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def px(lx):
        return _ML + (lx - x0) / (x1 - x0) * (_W - _ML - _MR)

    def py(ly):
        return _H - _MB - (ly - y0) / (y1 - y0) * (_H - _MT - _MB)

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">'
    )
    out.append(f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>')
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )
    # decade ticks
    for exp in range(math.floor(x0), math.floor(x1) + 1):
        if x0 <= exp <= x1:
            x = px(exp)
            out.append(
                f'<line x1="{_fmt_coord(x)}" y1="{_H - _MB}" x2="{_fmt_coord(x)}" '
                f'y2="{_H - _MB + 6}" stroke="black" stroke-width="1"/>'
            )
            out.append(
                f'<text x="{_fmt_coord(x)}" y="{_H - _MB + 22}" font-size="12" '
                f'text-anchor="middle" font-family="sans-serif">1e{exp}</text>'
            )
    for exp in range(math.floor(y0), math.floor(y1) + 1):
        if y0 <= exp <= y1:
            y = py(exp)
            out.append(
                f'<line x1="{_ML - 6}" y1="{_fmt_coord(y)}" x2="{_ML}" '
                f'y2="{_fmt_coord(y)}" stroke="black" stroke-width="1"/>'
            )
            out.append(
                f'<text x="{_ML - 10}" y="{_fmt_coord(y + 4)}" font-size="12" '
                f'text-anchor="end" font-family="sans-serif">1e{exp}</text>'
            )
    out.append(
        f'<text x="{(_ML + _W - _MR) // 2}" y="{_H - 10}" font-size="13" '
        f'text-anchor="middle" font-family="sans-serif">n</text>'
    )
    out.append(
        f'<text x="16" y="{(_MT + _H - _MB) // 2}" font-size="13" text-anchor="middle" '
        f'font-family="sans-serif" transform="rotate(-90 16 {(_MT + _H - _MB) // 2})">'
        f"distance</text>"
    )

    for key in sorted(drawable, key=lambda k: (len(k), k)):
        pts = " ".join(
            f"{_fmt_coord(px(math.log10(n)))},{_fmt_coord(py(math.log10(d)))}"
            for n, d in drawable[key]
        )
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="#4878a8" '
            f'stroke-width="1" stroke-opacity="0.55"/>'
        )

    # median overlay per experiment, over its trajectories at each n
    by_exp = {}
    for key, pts in series.items():
        exp = key.rsplit("/", 1)[0]
        for n, d in pts:
            by_exp.setdefault(exp, {}).setdefault(n, []).append(d)
    for exp in sorted(by_exp):
        med = sorted((n, float(np.median(ds))) for n, ds in by_exp[exp].items())
        med_pts = [(n, d) for n, d in med if d > 0.0]
        if med_pts:
            pts = " ".join(
                f"{_fmt_coord(px(math.log10(n)))},{_fmt_coord(py(math.log10(d)))}"
                for n, d in med_pts
            )
            out.append(
                f'<polyline points="{pts}" fill="none" stroke="#c03028" stroke-width="2.5"/>'
            )

    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(rows))
