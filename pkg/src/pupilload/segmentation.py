"""Uniform temporal segmentation, split-count estimation and sliding windows."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .distfit import (DEFAULT_BINS, BetaParams, DegenerateSegmentError, dist_bin_masses,
                      fit_beta, fit_normal, histogram, l1_fit_error)
from .ingest import Recording

logger = logging.getLogger(__name__)

MIN_SAMPLES_PER_SEGMENT = 30
DEFAULT_K_RANGE = range(1, 31)
DEFAULT_SUBSET_FRACTION = 0.3


class SparseSegmentError(ValueError):
    """A segment holds fewer samples than required for fitting."""


@dataclass(frozen=True)
class SegmentPlan:
    k: int
    boundaries: np.ndarray

    @classmethod
    def for_span(cls, start: float, stop: float, k: int) -> "SegmentPlan":
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if not stop > start:
            raise ValueError("segmentation needs a positive time span")
        return cls(k, np.linspace(start, stop, k + 1))

    def assign(self, t) -> np.ndarray:
        """Segment index of each timestamp; intervals are [a, b) except the last, which is closed."""
        idx = np.searchsorted(self.boundaries, t, side="right") - 1
        return np.clip(idx, 0, self.k - 1)


def uniform_segments(rec, k: int, min_samples: int = MIN_SAMPLES_PER_SEGMENT) -> list[np.ndarray]:
    """Split ``rec``'s diameters into ``k`` equal-duration, time-ordered segments."""
    t = np.asarray(rec.t)
    plan = SegmentPlan.for_span(float(t[0]), float(t[-1]), k)
    idx = plan.assign(t)
    counts = np.bincount(idx, minlength=k)
    if counts.min() < min_samples:
        raise SparseSegmentError(
            f"{getattr(rec, 'id', 'recording')}: k={k} leaves a segment with {counts.min()} "
            f"samples (< {min_samples})")
    # idx is non-decreasing because t is sorted
    return np.split(np.asarray(rec.diameter), np.cumsum(counts)[:-1])


def prepare_segment(values) -> np.ndarray | None:
    """Min-max normalize then squeeze into (0, 1); None for a constant segment."""
    from .features import normalize_minmax, squeeze_unit_interval

    values = np.asarray(values, dtype=float)
    if values.max() == values.min():
        return None
    return squeeze_unit_interval(normalize_minmax(values))


def segment_costs(values, bins: int = DEFAULT_BINS) -> tuple[float, float]:
    """L1 errors of the fitted Normal and Beta against the segment histogram."""
    x = prepare_segment(values)
    if x is None:
        # constant segment: histogram, Normal and substituted Beta all sit on one bin
        return 0.0, 0.0
    hist = histogram(x, bins)
    normal = fit_normal(x)
    try:
        beta = fit_beta(x)
    except DegenerateSegmentError:
        beta_masses = dist_bin_masses(type(normal)(normal.mu, 0.0), hist.edges)
    else:
        beta_masses = dist_bin_masses(beta, hist.edges)
    return (l1_fit_error(hist, dist_bin_masses(normal, hist.edges)),
            l1_fit_error(hist, beta_masses))


def segment_fit_cost(rec, k: int, bins: int = DEFAULT_BINS,
                     min_samples: int = MIN_SAMPLES_PER_SEGMENT) -> float:
    """Summed Normal and Beta histogram misfit over the ``k`` uniform segments of ``rec``."""
    return math.fsum(sum(segment_costs(seg, bins))
                     for seg in uniform_segments(rec, k, min_samples))


def max_feasible_k(rec, k_range: Sequence[int] = DEFAULT_K_RANGE,
                   min_samples: int = MIN_SAMPLES_PER_SEGMENT) -> int | None:
    feasible = [k for k in k_range if _feasible(rec, k, min_samples)]
    return max(feasible) if feasible else None


def _feasible(rec, k, min_samples) -> bool:
    try:
        uniform_segments(rec, k, min_samples)
    except SparseSegmentError:
        return False
    return True


def best_split_count(rec, k_range: Sequence[int] = DEFAULT_K_RANGE, bins: int = DEFAULT_BINS,
                     min_samples: int = MIN_SAMPLES_PER_SEGMENT) -> tuple[int | None, dict]:
    """Cost-minimizing k for one recording (ties go to the smallest k).

    Returns ``(k_star, costs)`` with ``costs`` holding every feasible k; ``k_star``
    is None when no k in ``k_range`` is feasible.
    """
    costs = {}
    for k in sorted(k_range):
        try:
            costs[k] = segment_fit_cost(rec, k, bins, min_samples)
        except SparseSegmentError:
            continue
    if not costs:
        return None, costs
    best = min(costs.values())
    return min(k for k, c in costs.items() if c == best), costs


@dataclass(frozen=True)
class SplitEstimate:
    k: int
    optima: dict
    skipped: tuple


def estimate_splits(train: Sequence, subset_fraction: float = DEFAULT_SUBSET_FRACTION,
                    k_range: Sequence[int] = DEFAULT_K_RANGE, bins: int = DEFAULT_BINS,
                    seed: int = 0, min_samples: int = MIN_SAMPLES_PER_SEGMENT,
                    return_details: bool = False):
    """Estimate the number of uniform segments from a random training subset.

    Draws ``ceil(subset_fraction * len(train))`` recordings without
    replacement, finds each one's cost-minimizing k, and returns the mean of
    those optima rounded half up. Recordings with no feasible k are skipped
    with a warning.
    """
    if len(train) == 0:
        raise ValueError("estimate_splits needs at least one training recording")
    if not (0.0 < subset_fraction <= 1.0):
        raise ValueError(f"subset_fraction must lie in (0, 1], got {subset_fraction!r}")
    k_range = list(k_range)
    if not k_range or min(k_range) < 1:
        raise ValueError("k_range must be a non-empty set of positive integers")
    n = min(len(train), math.ceil(subset_fraction * len(train) - 1e-12))
    picked = np.random.default_rng(seed).choice(len(train), size=n, replace=False)

    optima, skipped = {}, []
    for i in sorted(picked.tolist()):
        rec = train[i]
        k_star, _ = best_split_count(rec, k_range, bins, min_samples)
        name = getattr(rec, "id", str(i))
        if k_star is None:
            logger.warning("%s: no feasible split count in %s..%s, skipped",
                           name, min(k_range), max(k_range))
            skipped.append(name)
            continue
        optima[name] = k_star
    if not optima:
        raise SparseSegmentError(
            f"no sampled recording admits a split count in {min(k_range)}..{max(k_range)} "
            f"with >= {min_samples} samples per segment")
    k = int(math.floor(sum(optima.values()) / len(optima) + 0.5))
    if return_details:
        return SplitEstimate(k, optima, tuple(skipped))
    return k


@dataclass(frozen=True, eq=False)
class Window:
    parent_id: str
    start: float
    length: float
    t: np.ndarray
    diameter: np.ndarray
    label: object = None

    @property
    def id(self) -> str:
        return f"{self.parent_id}@{self.start:g}"

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])

    def __len__(self):
        return len(self.t)


def window_count(duration: float, window_s: float, step_s: float) -> int:
    if duration < 2.0 * window_s:
        return 0
    return int(math.floor((duration - window_s) / step_s + 1e-9)) + 1


def window_recording(rec: Recording, window_s: float, step_s: float | None = None) -> list[Window]:
    """Fixed-length windows with step ``step_s`` (default half a window).

    Recordings shorter than two window lengths yield no windows.
    """
    if step_s is None:
        step_s = window_s / 2.0
    if not (window_s > 0 and step_s > 0):
        raise ValueError("window and step lengths must be positive")
    n = window_count(rec.duration, window_s, step_s)
    t0 = float(rec.t[0])
    windows = []
    for j in range(n):
        start = t0 + j * step_s
        lo, hi = np.searchsorted(rec.t, [start, start + window_s], side="left")
        windows.append(Window(rec.id, start, window_s, rec.t[lo:hi], rec.diameter[lo:hi],
                              rec.label))
    return windows


def window_dataset(recordings: Sequence[Recording], window_s: float,
                   step_s: float | None = None) -> list[Window]:
    return [w for rec in recordings for w in window_recording(rec, window_s, step_s)]


def with_diameter(rec, diameter):
    """Copy of a recording or window carrying different diameters (same timestamps)."""
    return replace(rec, diameter=np.asarray(diameter, dtype=float))
