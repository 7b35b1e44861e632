"""CSV, JSON and SVG emitters plus readers for what they emit.

Every artifact carries the run configuration: CSV files as a leading
``# config: {...}`` comment, JSON files under ``"config"`` next to
``"schema": 1``, SVG files inside ``<desc>``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

SCHEMA_VERSION = 1
CONFIG_PREFIX = "# config: "


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if hasattr(x, "item") and callable(x.item):  # numpy scalar
        return _jsonable(x.item())
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def to_csv(rows: Sequence[dict], columns: Sequence[str], config: dict) -> str:
    buf = io.StringIO()
    buf.write(CONFIG_PREFIX + json.dumps(_jsonable(config), sort_keys=True) + "\n")
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(row.get(k)) for k in columns})
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+}j"
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else str(v)


def read_csv(text: str) -> tuple[dict, list[dict]]:
    """Inverse of :func:`to_csv`; values stay strings."""
    lines = text.splitlines()
    config = {}
    if lines and lines[0].startswith(CONFIG_PREFIX):
        config = json.loads(lines[0][len(CONFIG_PREFIX):])
        lines = lines[1:]
    return config, list(csv.DictReader(lines))


def to_json(data, config: dict) -> str:
    return json.dumps({"schema": SCHEMA_VERSION, "config": _jsonable(config), "data": _jsonable(data)},
                      indent=2, sort_keys=True) + "\n"


def read_json(text: str) -> tuple[dict, object]:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    return doc["config"], doc["data"]


# ---------------------------------------------------------------------------
# SVG line plots

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-9 * step:
        out.append(round(t, 12))
        t += step
    return out


def to_svg(series: Iterable[tuple[str, Sequence[float], Sequence[float]]], config: dict,
           title: str = "", xlabel: str = "", ylabel: str = "",
           width: int = 640, height: int = 420) -> str:
    """Polyline plot; NaN or infinite points split a line into segments."""
    series = [(label, list(map(float, xs)), list(map(float, ys))) for label, xs, ys in series]
    finite = [(x, y) for _, xs, ys in series for x, y in zip(xs, ys) if math.isfinite(x) and math.isfinite(y)]
    if not finite:
        raise ValueError("nothing to plot")
    x0, x1 = min(p[0] for p in finite), max(p[0] for p in finite)
    y0, y1 = min(p[1] for p in finite), max(p[1] for p in finite)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    ml, mr, mt, mb = 60, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb

    def sx(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return mt + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f"<desc>{escape(json.dumps(_jsonable(config), sort_keys=True))}</desc>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{sx(t):.2f}" y1="{mt + ph}" x2="{sx(t):.2f}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{mt + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{ml - 5}" y1="{sy(t):.2f}" x2="{ml}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{ml + pw / 2}" y="{height - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="15" y="{mt + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 15 {mt + ph / 2})">{escape(ylabel)}</text>')
    for idx, (label, xs, ys) in enumerate(series):
        color = _COLORS[idx % len(_COLORS)]
        segment: list[str] = []
        segments = [segment]
        for x, y in zip(xs, ys):
            if math.isfinite(x) and math.isfinite(y):
                segment.append(f"{sx(x):.2f},{sy(y):.2f}")
            elif segment:
                segment = []
                segments.append(segment)
        for seg in segments:
            if len(seg) > 1:
                out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{" ".join(seg)}"/>')
        out.append(f'<text x="{ml + 10}" y="{mt + 16 + 14 * idx}" fill="{color}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def read_svg_config(text: str) -> dict:
    import xml.etree.ElementTree as ET

    root = ET.fromstring(text)
    desc = root.find("{http://www.w3.org/2000/svg}desc")
    return json.loads(desc.text) if desc is not None and desc.text else {}
