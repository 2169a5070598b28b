"""Minimal deterministic SVG line plots for summary tables.

Output is self-contained (inline styles, no fonts or scripts) and contains
no timestamps, so equal tables give identical bytes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

from .records import SummaryTable

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#000000", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


@dataclass(frozen=True)
class PlotStyle:
    width: int = 520
    height: int = 360
    margin_left: int = 70
    margin_right: int = 170
    margin_top: int = 36
    margin_bottom: int = 50
    stroke: float = 1.8
    marker: float = 3.2
    font_size: int = 12


def _nice_ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((1, 2, 2.5, 5, 10), key=lambda k: abs(k * mag - raw)) * mag
    start = math.floor(lo / step) * step
    ticks = []
    v = start
    while v <= hi + 1e-9 * step:
        if v >= lo - 1e-9 * step:
            ticks.append(round(v, 12))
        v += step
    return ticks


def _fmt(v):
    return f"{v:.2f}".rstrip("0").rstrip(".") if abs(v) < 1e4 else f"{v:.0e}"


def _series(table: SummaryTable, panel: str):
    """``[(label, [(x, y), ...]), ...]`` for the requested panel."""
    attr = "mean_rel_l2" if panel == "error" else "success_rate"
    out = []
    if table.experiment == "quintiles":
        for s in sorted({r.s for r in table.rows}):
            pts = [(int(r.group[1:]), getattr(r, attr)) for r in table.rows if r.s == s and not r.pooled]
            out.append((f"s = {s}", sorted(pts)))
        return out, "group (1 = lowest test values)"
    xname = "m" if table.experiment == "msweep" else "s"
    names = {("uniform", "g1"): "lowest 20%", ("uniform", "all"): "all uniform",
             ("chebyshev", "all"): "Chebyshev (precond.)"}
    groups = sorted({r.group for r in table.rows if r.case == "uniform" and not r.pooled})
    if groups:
        names[("uniform", groups[-1])] = "highest 20%"
    for case, group in table.keys():
        if table.experiment in ("msweep", "ssweep") and (case, group) not in names:
            continue
        pts = sorted((getattr(r, xname), getattr(r, attr)) for r in table.series(case, group))
        out.append((names.get((case, group), case if group == "all" else f"{case} {group}"), pts))
    return out, xname


def render_svg(table: SummaryTable, panel: str = "success", style: PlotStyle | None = None) -> str:
    if panel not in ("error", "success"):
        raise ValueError("panel must be 'error' or 'success'")
    st = style or PlotStyle()
    series, xlabel = _series(table, panel)
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    logy = panel == "error" and ys and min(ys) > 0 and max(ys) / min(ys) > 100
    if logy:
        ty = lambda v: math.log10(max(v, 1e-300))  # noqa: E731
        y_lo, y_hi = math.floor(min(map(ty, ys))), math.ceil(max(map(ty, ys)))
        yticks = list(range(int(y_lo), int(y_hi) + 1))
        step = max(1, len(yticks) // 6)
        yticks = yticks[::step]
    else:
        ty = float
        y_lo, y_hi = (0.0, 1.0) if panel == "success" else (0.0, max(ys) * 1.05 if ys and max(ys) > 0 else 1.0)
        yticks = _nice_ticks(y_lo, y_hi)
    x_lo, x_hi = (min(xs), max(xs)) if xs else (0, 1)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1, x_hi + 1
    pw = st.width - st.margin_left - st.margin_right
    ph = st.height - st.margin_top - st.margin_bottom

    def px(x):
        return st.margin_left + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        v = ty(y)
        return st.margin_top + (1.0 - (v - y_lo) / ((y_hi - y_lo) or 1.0)) * ph

    fs = st.font_size
    title = "average relative l2 error" if panel == "error" else "success rate"
    L = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{st.width}" height="{st.height}" '
         f'viewBox="0 0 {st.width} {st.height}" font-family="sans-serif" font-size="{fs}">',
         f'<rect x="0" y="0" width="{st.width}" height="{st.height}" style="fill:#ffffff"/>',
         f'<text x="{st.margin_left + pw / 2:.1f}" y="{st.margin_top - 14}" text-anchor="middle" '
         f'style="font-weight:bold">{escape(table.experiment)}: {title}</text>',
         f'<rect x="{st.margin_left}" y="{st.margin_top}" width="{pw}" height="{ph}" '
         f'style="fill:none;stroke:#444444;stroke-width:1"/>']
    for v in _nice_ticks(x_lo, x_hi, 6):
        X = px(v)
        L.append(f'<line x1="{X:.1f}" y1="{st.margin_top + ph}" x2="{X:.1f}" y2="{st.margin_top + ph + 4}" '
                 f'style="stroke:#444444"/>')
        L.append(f'<text x="{X:.1f}" y="{st.margin_top + ph + 17}" text-anchor="middle">{_fmt(v)}</text>')
    for v in yticks:
        Y = st.margin_top + (1.0 - (v - y_lo) / ((y_hi - y_lo) or 1.0)) * ph
        lab = f"1e{v}" if logy else _fmt(v)
        L.append(f'<line x1="{st.margin_left - 4}" y1="{Y:.1f}" x2="{st.margin_left + pw}" y2="{Y:.1f}" '
                 f'style="stroke:#dddddd"/>')
        L.append(f'<text x="{st.margin_left - 7}" y="{Y + 4:.1f}" text-anchor="end">{lab}</text>')
    L.append(f'<text x="{st.margin_left + pw / 2:.1f}" y="{st.height - 12}" text-anchor="middle">'
             f'{escape(xlabel)}</text>')
    for i, (label, pts) in enumerate(series):
        col = PALETTE[i % len(PALETTE)]
        path = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in pts)
        L.append(f'<polyline points="{path}" style="fill:none;stroke:{col};stroke-width:{st.stroke}"/>')
        for x, y in pts:
            L.append(f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="{st.marker}" style="fill:{col}"/>')
        ly = st.margin_top + 10 + i * (fs + 6)
        lx = st.margin_left + pw + 12
        L.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 18}" y2="{ly}" style="stroke:{col};stroke-width:{st.stroke}"/>')
        L.append(f'<text x="{lx + 24}" y="{ly + 4}">{escape(label)}</text>')
    L.append("</svg>")
    return "\n".join(L) + "\n"


def emit_svg(table: SummaryTable, path, panel: str = "success", style: PlotStyle | None = None) -> bool:
    """Write one panel; returns False (and writes nothing) for an empty table."""
    if not table.rows:
        return False
    text = render_svg(table, panel, style)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return True
