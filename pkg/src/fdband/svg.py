"""Figure bundles and a small dependency-free SVG renderer.

A bundle is the data behind one figure: a kind, axis labels and one or more
panels of polylines. On disk it is a JSON descriptor whose series point at
columns of CSV files written next to it.
"""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

KINDS = ("lines", "band", "phase")
BLOCK_COLORS = ("red", "green", "blue", "orange", "purple", "brown", "black")
DOTTED = "2,3"
DASHED = "6,4"


@dataclass
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray
    color: str = "black"
    style: str = "solid"  # solid | dotted | dashed
    role: str = ""
    source: dict | None = None  # {"file", "x", "y"} once written to disk

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.x.shape != self.y.shape:
            raise ValueError(f"series {self.label!r}: x and y differ in length")


@dataclass
class Panel:
    title: str = ""
    series: list[Series] = field(default_factory=list)
    markers: list[dict] = field(default_factory=list)  # {"x", "y", "text"}


@dataclass
class FigureBundle:
    kind: str
    title: str
    x_label: str = ""
    y_label: str = ""
    panels: list[Panel] = field(default_factory=list)
    figure: int | None = None

    def to_json(self) -> str:
        doc = {
            "figure": self.figure, "kind": self.kind, "title": self.title,
            "x_label": self.x_label, "y_label": self.y_label,
            "panels": [{
                "title": p.title,
                "markers": p.markers,
                "series": [{"label": s.label, "color": s.color, "style": s.style,
                            "role": s.role, **({"source": s.source} if s.source else
                                               {"x": s.x.tolist(), "y": s.y.tolist()})}
                           for s in p.series],
            } for p in self.panels],
        }
        return json.dumps(doc, indent=2) + "\n"


def load_bundle(path) -> FigureBundle:
    """Read a bundle descriptor and the CSV columns it references."""
    base = os.path.dirname(os.path.abspath(path))
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    cache: dict[str, dict[str, list[float]]] = {}

    def column(fname, name):
        if fname not in cache:
            with open(os.path.join(base, fname), newline="", encoding="utf-8") as fh:
                rows = csv.reader(line for line in fh if not line.startswith("#"))
                header = next(rows)
                cols = {h: [] for h in header}
                for row in rows:
                    for h, v in zip(header, row):
                        cols[h].append(float("nan") if v == "NA" else float(v))
            cache[fname] = cols
        return cache[fname][name]

    panels = []
    for p in doc["panels"]:
        series = []
        for s in p["series"]:
            src = s.get("source")
            if src:
                x, y = column(src["file"], src["x"]), column(src["file"], src["y"])
            else:
                x, y = s["x"], s["y"]
            series.append(Series(s["label"], x, y, s.get("color", "black"),
                                 s.get("style", "solid"), s.get("role", ""), src))
        panels.append(Panel(p.get("title", ""), series, p.get("markers", [])))
    return FigureBundle(doc["kind"], doc.get("title", ""), doc.get("x_label", ""),
                        doc.get("y_label", ""), panels, doc.get("figure"))


def _nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    ticks = []
    v = start
    while v <= hi + 1e-9 * step:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _fmt_tick(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.2g}"
    return f"{v:.6g}"


def _num(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _panel_svg(panel: Panel, x0: float, y0: float, w: float, h: float,
               x_label: str, y_label: str) -> list[str]:
    left, right, top, bottom = 60.0, 15.0, 30.0, 45.0
    pw, ph = w - left - right, h - top - bottom
    xs = [s.x[np.isfinite(s.x) & np.isfinite(s.y)] for s in panel.series]
    ys = [s.y[np.isfinite(s.x) & np.isfinite(s.y)] for s in panel.series]
    xs = np.concatenate(xs) if xs else np.empty(0)
    ys = np.concatenate(ys) if ys else np.empty(0)
    if xs.size:
        xlo, xhi = float(xs.min()), float(xs.max())
        ylo, yhi = float(ys.min()), float(ys.max())
    else:
        xlo, xhi, ylo, yhi = 0.0, 1.0, 0.0, 1.0
    if xhi == xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    if yhi == ylo:
        ylo, yhi = ylo - 0.5, yhi + 0.5
    pad = 0.04 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad

    def px(v):
        return x0 + left + (v - xlo) / (xhi - xlo) * pw

    def py(v):
        return y0 + top + (yhi - v) / (yhi - ylo) * ph

    out = [f'<g class="panel">']
    if panel.title:
        out.append(f'<text x="{_num(x0 + left + pw / 2)}" y="{_num(y0 + 18)}" '
                   f'text-anchor="middle" class="title">{escape(panel.title)}</text>')
    out.append(f'<rect class="frame" x="{_num(x0 + left)}" y="{_num(y0 + top)}" '
               f'width="{_num(pw)}" height="{_num(ph)}" fill="none" stroke="black"/>')
    for t in _nice_ticks(xlo, xhi):
        out.append(f'<line class="tick" x1="{_num(px(t))}" y1="{_num(y0 + top + ph)}" '
                   f'x2="{_num(px(t))}" y2="{_num(y0 + top + ph + 4)}" stroke="black"/>')
        out.append(f'<text x="{_num(px(t))}" y="{_num(y0 + top + ph + 16)}" '
                   f'text-anchor="middle">{_fmt_tick(t)}</text>')
    for t in _nice_ticks(ylo, yhi):
        out.append(f'<line class="tick" x1="{_num(x0 + left - 4)}" y1="{_num(py(t))}" '
                   f'x2="{_num(x0 + left)}" y2="{_num(py(t))}" stroke="black"/>')
        out.append(f'<text x="{_num(x0 + left - 6)}" y="{_num(py(t) + 4)}" '
                   f'text-anchor="end">{_fmt_tick(t)}</text>')
    out.append(f'<text x="{_num(x0 + left + pw / 2)}" y="{_num(y0 + h - 8)}" '
               f'text-anchor="middle">{escape(x_label)}</text>')
    cx, cy = x0 + 14, y0 + top + ph / 2
    out.append(f'<text x="{_num(cx)}" y="{_num(cy)}" text-anchor="middle" '
               f'transform="rotate(-90 {_num(cx)} {_num(cy)})">{escape(y_label)}</text>')

    legend_y = y0 + top + 12
    seen = set()
    for s in panel.series:
        pts = " ".join(f"{_num(px(a))},{_num(py(b))}" for a, b in zip(s.x, s.y)
                       if math.isfinite(a) and math.isfinite(b))
        dash = {"dotted": f' stroke-dasharray="{DOTTED}"', "dashed": f' stroke-dasharray="{DASHED}"'}.get(s.style, "")
        role = f' data-role="{escape(s.role)}"' if s.role else ""
        out.append(f'<polyline class="series" points="{pts}" fill="none" stroke="{escape(s.color)}" '
                   f'stroke-width="1.2"{dash}{role} data-label="{escape(s.label)}"/>')
        key = (s.color, s.label.split(" (")[0])
        if s.style == "solid" and key not in seen:
            seen.add(key)
            lx = x0 + left + pw - 120
            out.append(f'<g class="legend"><line x1="{_num(lx)}" y1="{_num(legend_y)}" '
                       f'x2="{_num(lx + 18)}" y2="{_num(legend_y)}" stroke="{escape(s.color)}"/>'
                       f'<text x="{_num(lx + 22)}" y="{_num(legend_y + 4)}">{escape(key[1])}</text></g>')
            legend_y += 14
    for m in panel.markers:
        out.append(f'<text class="marker" x="{_num(px(m["x"]))}" y="{_num(py(m["y"]) - 3)}" '
                   f'font-size="9" text-anchor="middle">{escape(str(m["text"]))}</text>')
    out.append("</g>")
    return out


def emit_svg(bundle: FigureBundle, panel_width: int = 480, panel_height: int = 360) -> str:
    """Render a bundle as a standalone SVG document."""
    if bundle.kind not in KINDS:
        raise ValueError(f"unknown bundle kind {bundle.kind!r}; expected one of {KINDS}")
    panels = bundle.panels or [Panel()]
    width = panel_width * len(panels)
    height = panel_height + 30
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:g}" y="18" text-anchor="middle" font-size="13">{escape(bundle.title)}</text>',
    ]
    for i, panel in enumerate(panels):
        parts.extend(_panel_svg(panel, i * panel_width, 25, panel_width, panel_height,
                                bundle.x_label, bundle.y_label))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
