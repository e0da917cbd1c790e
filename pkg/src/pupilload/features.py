"""Segment-distribution pupil feature and the baseline pupil statistics.

The feature of a recording is, for each of ``k`` uniform time segments, the
standard deviation of a Normal and of a Beta distribution fitted to the
segment's min-max normalized diameters, interleaved as
``(sd_normal_1, sd_beta_1, ..., sd_normal_k, sd_beta_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .distfit import DEFAULT_BINS, DegenerateSegmentError, beta_std, fit_beta, fit_normal
from .segmentation import (DEFAULT_K_RANGE, DEFAULT_SUBSET_FRACTION, MIN_SAMPLES_PER_SEGMENT,
                           estimate_splits, uniform_segments)


def normalize_minmax(values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.full(values.shape, 0.5)
    return (values - lo) / (hi - lo)


def squeeze_unit_interval(values) -> np.ndarray:
    """Map [0, 1] strictly into (0, 1) via ``(x (N-1) + 0.5) / N``."""
    values = np.asarray(values, dtype=float)
    n = values.size
    return (values * (n - 1) + 0.5) / n


def segment_stds(values) -> tuple[float, float]:
    """(Normal sd, Beta sd) of one segment; a constant segment gives (0, 0)."""
    x = squeeze_unit_interval(normalize_minmax(values))
    if x.max() == x.min():
        return 0.0, 0.0
    try:
        beta = fit_beta(x)
    except DegenerateSegmentError:
        return 0.0, 0.0
    return fit_normal(x).sigma, beta_std(beta)


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    k: int

    @property
    def normal_stds(self) -> np.ndarray:
        return self.values[0::2]

    @property
    def beta_stds(self) -> np.ndarray:
        return self.values[1::2]


def extract_feature(rec, k: int, min_samples: int = MIN_SAMPLES_PER_SEGMENT) -> FeatureVector:
    pairs = [segment_stds(seg) for seg in uniform_segments(rec, k, min_samples)]
    return FeatureVector(np.array(pairs, dtype=float).ravel(), k)


def baseline_pupil_stats(rec) -> np.ndarray:
    """Mean, population std, skewness and (non-excess) kurtosis of the raw diameters.

    Skewness and kurtosis of zero-variance data are reported as 0.
    """
    d = np.asarray(rec.diameter, dtype=float)
    if d.size < 4:
        raise ValueError(f"baseline statistics need at least 4 samples, got {d.size}")
    mean = d.mean()
    dev = d - mean
    m2 = np.mean(dev ** 2)
    if m2 == 0.0:
        return np.array([mean, 0.0, 0.0, 0.0])
    skew = np.mean(dev ** 3) / m2 ** 1.5
    kurt = np.mean(dev ** 4) / m2 ** 2
    return np.array([mean, np.sqrt(m2), skew, kurt])


class SegmentDistributionFeatures(TransformerMixin, BaseEstimator):
    """Turn recordings (or windows) into segment-distribution feature rows.

    ``fit`` estimates the segment count from a random subset of the training
    recordings unless ``n_splits`` is given explicitly.

    Parameters
    ----------
    n_splits : int or "auto"
        Number of uniform time segments.
    bins : int
        Histogram bins used by the split-count search.
    subset_fraction : float
        Fraction of training recordings searched when ``n_splits="auto"``.
    k_max : int
        Largest segment count considered by the search.
    min_samples : int
        Minimum samples per segment.
    random_state : int
        Seed for the subset draw.
    """

    def __init__(self, n_splits="auto", bins=DEFAULT_BINS, subset_fraction=DEFAULT_SUBSET_FRACTION,
                 k_max=max(DEFAULT_K_RANGE), min_samples=MIN_SAMPLES_PER_SEGMENT, random_state=0):
        self.n_splits = n_splits
        self.bins = bins
        self.subset_fraction = subset_fraction
        self.k_max = k_max
        self.min_samples = min_samples
        self.random_state = random_state

    def fit(self, recordings: Sequence, y=None):
        if self.n_splits == "auto":
            est = estimate_splits(recordings, self.subset_fraction, range(1, self.k_max + 1),
                                  self.bins, self.random_state, self.min_samples,
                                  return_details=True)
            self.n_splits_ = est.k
            self.split_optima_ = est.optima
        else:
            if int(self.n_splits) < 1:
                raise ValueError(f"n_splits must be >= 1, got {self.n_splits!r}")
            self.n_splits_ = int(self.n_splits)
        return self

    def transform(self, recordings: Sequence) -> np.ndarray:
        check_is_fitted(self, "n_splits_")
        rows = [extract_feature(r, self.n_splits_, self.min_samples).values for r in recordings]
        return np.array(rows, dtype=float).reshape(len(rows), 2 * self.n_splits_)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "n_splits_")
        return np.array([f"{kind}_sd_{i}" for i in range(1, self.n_splits_ + 1)
                         for kind in ("normal", "beta")], dtype=object)


class BaselinePupilStats(TransformerMixin, BaseEstimator):
    """Mean, std, skewness and kurtosis of each recording's pupil diameter."""

    def fit(self, recordings: Sequence, y=None):
        self.n_features_out_ = 4
        return self

    def transform(self, recordings: Sequence) -> np.ndarray:
        return np.array([baseline_pupil_stats(r) for r in recordings], dtype=float).reshape(-1, 4)

    def get_feature_names_out(self, input_features=None):
        return np.array(["pupil_mean", "pupil_std", "pupil_skew", "pupil_kurtosis"], dtype=object)


def labels_of(recordings: Sequence) -> np.ndarray:
    """TLX class names (``"C1"``...) of recordings or windows."""
    return np.array([r.label.label for r in recordings])


def scores_of(recordings: Sequence) -> np.ndarray:
    return np.array([r.label.mean_score for r in recordings], dtype=float)
