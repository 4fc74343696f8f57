"""Distance-distance (DD) plots: per-observation pairs of multivariate and
matrix variate MSDs, written as CSV or as a standalone SVG scatter with the
``y = x`` reference line.

SVG layout: the plot area is a square of side
``min(width - 80, height - 70)`` pixels whose top-left corner sits at
``(60, 20)``. Both axes share one data interval, ``[lo - pad, hi + pad]``
where ``lo``/``hi`` are the min/max over all plotted coordinates and
``pad = 0.04 * (hi - lo)`` (``0.5`` when ``hi == lo``), so the reference line
runs at 45 degrees.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from .distances import DistancePair, matnorm_distances_at, mvn_distances_at
from .distributions import MatrixDataset
from .estimation import DEFAULT_TOL, estimate_mvn, flip_flop_mle

MARGIN_LEFT = 60
MARGIN_TOP = 20
MARGIN_RIGHT = 20
MARGIN_BOTTOM = 50
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


@dataclass(frozen=True)
class DdPlotData:
    d_mvn: np.ndarray
    d_mat: np.ndarray
    rows: int
    cols: int
    label: str = ""
    point_labels: tuple | None = field(default=None)

    def __post_init__(self):
        d = np.array(self.d_mvn, dtype=float).ravel()
        dm = np.array(self.d_mat, dtype=float).ravel()
        if d.size < 1 or d.shape != dm.shape:
            raise ValueError("distance sequences must be non-empty and of equal length")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(dm))):
            raise ValueError("distances must be finite")
        if np.any(d < 0) or np.any(dm < 0):
            raise ValueError("distances must be non-negative")
        if self.point_labels is not None:
            labels = tuple(str(v) for v in self.point_labels)
            if len(labels) != d.size:
                raise ValueError("need one point label per observation")
            object.__setattr__(self, "point_labels", labels)
        d.setflags(write=False)
        dm.setflags(write=False)
        object.__setattr__(self, "d_mvn", d)
        object.__setattr__(self, "d_mat", dm)

    @property
    def n(self) -> int:
        return self.d_mvn.size

    @property
    def points(self) -> list[DistancePair]:
        return [DistancePair(float(a), float(b)) for a, b in zip(self.d_mvn, self.d_mat)]


def dd_points(
    data: MatrixDataset,
    flip_flop_tol: float = DEFAULT_TOL,
    label: str = "",
    point_labels=None,
) -> DdPlotData:
    """Pair ``D`` and ``D_M`` for every observation, in observation order."""
    d = mvn_distances_at(data, estimate_mvn(data).params)
    dm = matnorm_distances_at(data, flip_flop_mle(data, tol=flip_flop_tol).params)
    return DdPlotData(d, dm, data.rows, data.cols, label, point_labels)


def render_csv(dd: DdPlotData) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["index", "d_mvn", "d_mat"]
    if dd.point_labels is not None:
        header.append("label")
    w.writerow(header)
    for i in range(dd.n):
        row = [i, f"{dd.d_mvn[i]:.17g}", f"{dd.d_mat[i]:.17g}"]
        if dd.point_labels is not None:
            row.append(dd.point_labels[i])
        w.writerow(row)
    return buf.getvalue().encode()


def read_dd_csv(blob: bytes) -> tuple[np.ndarray, np.ndarray, tuple | None]:
    """Parse :func:`render_csv` output back into ``(d_mvn, d_mat, labels)``."""
    rows = list(csv.reader(io.StringIO(blob.decode())))
    header, body = rows[0], rows[1:]
    d = np.array([float(r[1]) for r in body])
    dm = np.array([float(r[2]) for r in body])
    labels = tuple(r[3] for r in body) if "label" in header else None
    return d, dm, labels


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t / step) * step)
        t += step
    return ticks


def _fmt_tick(v: float) -> str:
    return f"{v:.6g}"


def plot_domain(dd: DdPlotData) -> tuple[float, float]:
    lo = float(min(dd.d_mvn.min(), dd.d_mat.min()))
    hi = float(max(dd.d_mvn.max(), dd.d_mat.max()))
    pad = 0.04 * (hi - lo) if hi > lo else 0.5
    return lo - pad, hi + pad


def render_svg(dd: DdPlotData, width: int = 480, height: int = 480) -> bytes:
    """Standalone SVG 1.1 scatter of ``(D, D_M)`` with a red ``y = x`` segment."""
    if width < 100 or height < 100:
        raise ValueError("width and height must be at least 100 pixels")
    side = min(width - MARGIN_LEFT - MARGIN_RIGHT, height - MARGIN_TOP - MARGIN_BOTTOM)
    x0, y0 = MARGIN_LEFT, MARGIN_TOP
    dlo, dhi = plot_domain(dd)
    span = dhi - dlo

    def sx(v):
        return x0 + (v - dlo) / span * side

    def sy(v):
        return y0 + side - (v - dlo) / span * side

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if dd.label:
        out.append(f"<title>{escape(dd.label)}</title>")
    out.append(
        f'<rect class="frame" x="{x0}" y="{y0}" width="{side}" height="{side}" '
        'fill="none" stroke="black" stroke-width="1"/>'
    )
    tick_font = 'font-family="sans-serif" font-size="10"'
    for t in _nice_ticks(dlo, dhi):
        px, py = sx(t), sy(t)
        out.append(f'<line class="tick" x1="{px:.2f}" y1="{y0 + side}" x2="{px:.2f}" y2="{y0 + side + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{y0 + side + 17}" text-anchor="middle" {tick_font}>{_fmt_tick(t)}</text>')
        out.append(f'<line class="tick" x1="{x0 - 5}" y1="{py:.2f}" x2="{x0}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{x0 - 7}" y="{py + 3:.2f}" text-anchor="end" {tick_font}>{_fmt_tick(t)}</text>')
    out.append(
        f'<text class="xlabel" x="{x0 + side / 2:.2f}" y="{y0 + side + 38}" text-anchor="middle" '
        'font-family="sans-serif" font-size="12">multivariate MSD</text>'
    )
    out.append(
        f'<text class="ylabel" transform="translate(16,{y0 + side / 2:.2f}) rotate(-90)" text-anchor="middle" '
        'font-family="sans-serif" font-size="12">matrix variate MSD</text>'
    )

    if dd.point_labels is None:
        colors = [PALETTE[0]] * dd.n
        legend = []
    else:
        legend = sorted(set(dd.point_labels))
        cmap = {lab: PALETTE[i % len(PALETTE)] for i, lab in enumerate(legend)}
        colors = [cmap[lab] for lab in dd.point_labels]

    out.append('<g class="points" fill-opacity="0.6">')
    for a, b, col in zip(dd.d_mvn, dd.d_mat, colors):
        out.append(f'<circle class="point" cx="{sx(a):.2f}" cy="{sy(b):.2f}" r="2" fill="{col}"/>')
    out.append("</g>")

    m = float(min(dd.d_mvn.min(), dd.d_mat.min()))
    M = float(max(dd.d_mvn.max(), dd.d_mat.max()))
    out.append(
        f'<line class="reference" x1="{sx(m):.2f}" y1="{sy(m):.2f}" x2="{sx(M):.2f}" y2="{sy(M):.2f}" '
        'stroke="red" stroke-width="1.5"/>'
    )
    for i, lab in enumerate(legend):
        ly = y0 + 12 + 14 * i
        out.append(f'<circle class="legend" cx="{x0 + 10}" cy="{ly - 3}" r="4" fill="{PALETTE[i % len(PALETTE)]}"/>')
        out.append(f'<text x="{x0 + 18}" y="{ly}" {tick_font}>{escape(lab)}</text>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode()
