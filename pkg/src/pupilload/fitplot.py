"""Per-segment export of histogram masses with the fitted Normal and Beta densities.

Each segment gets a CSV table and a small self-contained SVG overlay. Output
is formatted with fixed precision so re-runs are byte-identical.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .distfit import (DEFAULT_BINS, BetaParams, DegenerateSegmentError, NormalParams, beta_pdf,
                      fit_beta, fit_normal, histogram, normal_pdf)
from .segmentation import MIN_SAMPLES_PER_SEGMENT, prepare_segment, uniform_segments

NORMAL_RANGE = (-0.4, 1.2)
CURVE_POINTS = 321
_W, _H, _PAD = 480, 300, 40


@dataclass(frozen=True)
class SegmentFit:
    index: int
    centers: np.ndarray
    masses: np.ndarray
    normal: NormalParams | None
    beta: BetaParams | None

    def table(self) -> list[tuple[float, float, float, float]]:
        npdf = _safe_pdf(normal_pdf, self.centers, self.normal)
        bpdf = _safe_pdf(beta_pdf, self.centers, self.beta)
        return list(zip(self.centers, self.masses, npdf, bpdf))


def _safe_pdf(fn, x, params):
    if params is None or (isinstance(params, NormalParams) and params.sigma == 0.0):
        return np.zeros_like(x)
    return fn(x, params)


def segment_fits(rec, k: int, bins: int = DEFAULT_BINS,
                 min_samples: int = MIN_SAMPLES_PER_SEGMENT) -> list[SegmentFit]:
    fits = []
    for i, seg in enumerate(uniform_segments(rec, k, min_samples), start=1):
        x = prepare_segment(seg)
        if x is None:
            x = np.full(len(seg), 0.5)
        hist = histogram(x, bins)
        centers = 0.5 * (hist.edges[:-1] + hist.edges[1:])
        normal = fit_normal(x)
        try:
            beta = fit_beta(x)
        except DegenerateSegmentError:
            beta = None
        fits.append(SegmentFit(i, centers, hist.masses, normal, beta))
    return fits


def write_segment_csv(fit: SegmentFit, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bin_center", "hist_mass", "normal_pdf", "beta_pdf"])
        for row in fit.table():
            w.writerow([f"{v:.10g}" for v in row])


def render_svg(fit: SegmentFit, title: str = "") -> str:
    """Histogram as densities, Normal over the extended range, Beta on (0, 1)."""
    lo, hi = NORMAL_RANGE
    width = fit.centers[1] - fit.centers[0] if len(fit.centers) > 1 else 1.0
    dens = fit.masses / width
    xs = np.linspace(lo, hi, CURVE_POINTS)
    nys = _safe_pdf(normal_pdf, xs, fit.normal)
    bx = xs[(xs > 0) & (xs < 1)]
    bys = _safe_pdf(beta_pdf, bx, fit.beta)
    top = max(float(dens.max()), float(nys.max()), float(bys.max()) if bys.size else 0.0, 1e-12)
    top = min(top, 3.0 * max(float(dens.max()), 1e-12))  # keep spiky Beta ends on the canvas

    def sx(x):
        return _PAD + (x - lo) / (hi - lo) * (_W - 2 * _PAD)

    def sy(y):
        return _H - _PAD - min(y, top) / top * (_H - 2 * _PAD)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
           f'viewBox="0 0 {_W} {_H}">',
           f'<rect width="{_W}" height="{_H}" fill="white"/>']
    for c, d in zip(fit.centers, dens):
        x0, x1 = sx(c - width / 2), sx(c + width / 2)
        out.append(f'<rect x="{x0:.2f}" y="{sy(d):.2f}" width="{x1 - x0:.2f}" '
                   f'height="{sy(0) - sy(d):.2f}" fill="#c8d7e8" stroke="#6b8bb0"/>')
    for xsv, ysv, color in ((xs, nys, "#d0342c"), (bx, bys, "#1f8a3b")):
        if ysv.size and ysv.any():
            pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(xsv, ysv))
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
    out.append(f'<line x1="{sx(lo):.2f}" y1="{sy(0):.2f}" x2="{sx(hi):.2f}" y2="{sy(0):.2f}" '
               'stroke="black"/>')
    for tick in (-0.4, 0.0, 0.4, 0.8, 1.2):
        out.append(f'<text x="{sx(tick):.2f}" y="{_H - _PAD + 16}" font-size="11" '
                   f'text-anchor="middle">{tick:g}</text>')
    label = title or f"segment {fit.index}"
    out.append(f'<text x="{_W / 2:.0f}" y="20" font-size="13" text-anchor="middle">{label}</text>')
    out.append(f'<text x="{_W - _PAD}" y="36" font-size="11" text-anchor="end" fill="#d0342c">'
               f'normal</text>')
    out.append(f'<text x="{_W - _PAD}" y="50" font-size="11" text-anchor="end" fill="#1f8a3b">'
               f'beta</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_fits(rec, k: int, out_dir, bins: int = DEFAULT_BINS,
                min_samples: int = MIN_SAMPLES_PER_SEGMENT) -> list[Path]:
    """Write ``<id>_seg<i>.csv`` and ``.svg`` for each of the ``k`` segments; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fit in segment_fits(rec, k, bins, min_samples):
        stem = out_dir / f"{rec.id}_seg{fit.index:02d}"
        write_segment_csv(fit, stem.with_suffix(".csv"))
        stem.with_suffix(".svg").write_text(
            render_svg(fit, f"{rec.id} segment {fit.index}/{k}"), encoding="utf-8")
        written += [stem.with_suffix(".csv"), stem.with_suffix(".svg")]
    return written
