"""Report files: record CSV, 17-digit JSON and a log-log SVG chart.

All writers go through :func:`write_atomic` (temp file + rename), so a
reader never sees a half-written report.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

from .errors import PreconditionError
from .theorems import ConvergenceRecord

CSV_FIELDS = ("theorem", "dist", "n", "metric", "eval_point", "value", "enclosure", "method")


def fmt(x):
    """Shortest text that carries 17 significant digits."""
    return format(float(x), ".17g")


def write_atomic(path, data):
    path = Path(path)
    if isinstance(data, str):
        data = data.encode()
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


# CSV

def records_to_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow([r.theorem, r.dist, r.n, r.metric,
                    "" if r.eval_point is None else fmt(r.eval_point),
                    fmt(r.value), fmt(r.enclosure), r.method])
    return buf.getvalue()


def records_from_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0][:7]) != CSV_FIELDS[:7]:
        raise PreconditionError("not a record CSV: unexpected header")
    out = []
    for row in rows[1:]:
        if not row:
            continue
        method = row[7] if len(row) > 7 else "exact"
        out.append(ConvergenceRecord(row[0], row[1], int(row[2]), row[3],
                                     None if row[4] == "" else float(row[4]),
                                     float(row[5]), float(row[6]), method))
    return out


# JSON

def to_json(obj, indent=2):
    """``json.dumps`` with every float written to 17 significant digits."""
    floats = []

    def walk(o):
        if isinstance(o, bool) or o is None or isinstance(o, (int, str)):
            return o
        if isinstance(o, float):
            if not math.isfinite(o):
                return None
            floats.append(fmt(o))
            return f"\x00{len(floats) - 1}\x00"
        if isinstance(o, dict):
            return {str(k): walk(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [walk(v) for v in o]
        if hasattr(o, "to_dict"):
            return walk(o.to_dict())
        if hasattr(o, "item"):  # numpy scalars
            return walk(o.item())
        raise TypeError(f"cannot serialize {type(o).__name__}")

    text = json.dumps(walk(obj), indent=indent)
    for i, s in enumerate(floats):
        text = text.replace(f'"\\u0000{i}\\u0000"', s, 1)
    return text + "\n"


# SVG

WIDTH, HEIGHT = 800, 600
MARGIN = dict(left=80, right=200, top=50, bottom=60)
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def _series(records):
    groups = {}
    many_points = len({r.eval_point for r in records}) > 1
    for r in records:
        key = r.dist if not many_points else f"{r.dist} @ t={r.eval_point:g}"
        groups.setdefault(key, []).append(r)
    return [(k, sorted(v, key=lambda r: r.n)) for k, v in groups.items()]


def _esc(s):
    return (str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def render_chart(records):
    """SVG text for a log-log plot of value against n, one polyline per law."""
    records = list(records)
    if not records:
        raise PreconditionError("no records to chart")
    if len({r.theorem for r in records}) != 1:
        raise PreconditionError("chart records must share one theorem tag")
    series = _series(records)
    pos = [r for r in records if r.value > 0]
    ns = [r.n for r in records]
    x0, x1 = math.floor(math.log10(min(ns))), math.ceil(math.log10(max(ns)))
    if x1 == x0:
        x1 = x0 + 1
    if pos:
        y0 = math.floor(math.log10(min(r.value for r in pos)))
        y1 = math.ceil(math.log10(max(r.value for r in pos)))
    else:
        y0, y1 = -1, 0
    if y1 == y0:
        y1 = y0 + 1
    L, R, T, B = MARGIN["left"], WIDTH - MARGIN["right"], MARGIN["top"], HEIGHT - MARGIN["bottom"]

    def px(n):
        return L + (math.log10(n) - x0) / (x1 - x0) * (R - L)

    def py(v):
        return B - (math.log10(v) - y0) / (y1 - y0) * (B - T)

    theorem = records[0].theorem
    metric = records[0].metric
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{(L + R) / 2:.2f}" y="28" text-anchor="middle" font-size="16">'
        f'{_esc(theorem.upper())}: {_esc(metric)} against n (log-log)</text>',
        f'<rect x="{L}" y="{T}" width="{R - L}" height="{B - T}" fill="none" stroke="black"/>',
    ]
    for e in range(x0, x1 + 1):
        x = px(10.0**e)
        out.append(f'<line x1="{x:.2f}" y1="{T}" x2="{x:.2f}" y2="{B}" stroke="#dddddd"/>')
        out.append(f'<text x="{x:.2f}" y="{B + 18}" text-anchor="middle">1e{e}</text>')
    for e in range(y0, y1 + 1):
        y = py(10.0**e)
        out.append(f'<line x1="{L}" y1="{y:.2f}" x2="{R}" y2="{y:.2f}" stroke="#dddddd"/>')
        out.append(f'<text x="{L - 8}" y="{y + 4:.2f}" text-anchor="end">1e{e}</text>')
    out.append(f'<text x="{(L + R) / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle">n</text>')
    out.append(f'<text x="20" y="{(T + B) / 2:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 20 {(T + B) / 2:.2f})">{_esc(metric)}</text>')
    for i, (name, rs) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{px(r.n):.2f},{py(r.value):.2f}" for r in rs if r.value > 0)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        ly = T + 20 * i + 10
        out.append(f'<line x1="{R + 15}" y1="{ly}" x2="{R + 40}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="2"/>')
        out.append(f'<text x="{R + 46}" y="{ly + 4}">{_esc(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_chart(records, path):
    return write_atomic(path, render_chart(records))
