"""Experiment pipelines: whole-recording classification, windowed (online)
classification and TLX-score regression."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .distfit import DEFAULT_BINS
from .features import BaselinePupilStats, SegmentDistributionFeatures, labels_of, scores_of
from .ingest import CLASSES, split_train_test
from .learn import canonical_kind, fit_regressor_nn, make_classifier
from .metrics import mae, score_labels
from .segmentation import (DEFAULT_SUBSET_FRACTION, MIN_SAMPLES_PER_SEGMENT, estimate_splits,
                           window_dataset)

logger = logging.getLogger(__name__)

TRAIN_FRACTION = 0.8
TABLE1_METHODS = ("RF", "GNB", "LR", "SVM", "KNN", "DA")
TABLE2_METHODS = ("RF", "SVM")
TABLE2_WINDOWS = (10.0, 15.0, 20.0, 25.0, 30.0)
TABLE3_HIDDEN = (5, 10, 20)


@dataclass
class ExperimentConfig:
    seed: int = 0
    k: int | None = None
    bins: int = DEFAULT_BINS
    k_max: int = 30
    subset_fraction: float = DEFAULT_SUBSET_FRACTION
    train_fraction: float = TRAIN_FRACTION
    min_samples: int = MIN_SAMPLES_PER_SEGMENT

    def proposed(self, k=None) -> SegmentDistributionFeatures:
        return SegmentDistributionFeatures(
            n_splits=k if k is not None else (self.k if self.k is not None else "auto"),
            bins=self.bins, subset_fraction=self.subset_fraction, k_max=self.k_max,
            min_samples=self.min_samples, random_state=self.seed)


@dataclass
class ResultRow:
    feature: str
    method: str
    scores: dict
    extra: dict = field(default_factory=dict)


def _evaluate_classifiers(feature_name, Xtr, ytr, Xte, yte, methods, seed, extra=None):
    rows = []
    for m in methods:
        model = make_classifier(m, seed=seed).fit(Xtr, ytr)
        s = score_labels(yte, model.predict(Xte), CLASSES)
        rows.append(ResultRow(feature_name, canonical_kind(m), s.as_percent(), dict(extra or {})))
    return rows


def run_table1(recordings: Sequence, config: ExperimentConfig = ExperimentConfig(),
               methods: Sequence[str] = TABLE1_METHODS, baseline: bool = True):
    """Whole-recording classification on the proposed feature (and the baseline statistics)."""
    train, test = split_train_test(recordings, config.train_fraction, config.seed)
    prop = config.proposed().fit(train)
    logger.info("table1: %d train / %d test recordings, k=%d", len(train), len(test),
                prop.n_splits_)
    ytr, yte = labels_of(train), labels_of(test)
    extra = {"k": prop.n_splits_, "n_train": len(train), "n_test": len(test)}
    rows = _evaluate_classifiers("proposed", prop.transform(train), ytr, prop.transform(test),
                                 yte, methods, config.seed, extra)
    if baseline:
        base = BaselinePupilStats().fit(train)
        rows += _evaluate_classifiers("pupil-stats", base.transform(train), ytr,
                                      base.transform(test), yte, methods, config.seed, extra)
    return rows


def run_table2(recordings: Sequence, config: ExperimentConfig = ExperimentConfig(),
               windows: Sequence[float] = TABLE2_WINDOWS, methods: Sequence[str] = TABLE2_METHODS,
               baseline: bool = True):
    """Sliding-window classification; recordings are split into train/test before windowing."""
    train, test = split_train_test(recordings, config.train_fraction, config.seed)
    rows = []
    for w in windows:
        wtr, wte = window_dataset(train, w), window_dataset(test, w)
        extra = {"window_s": w, "n_train": len(wtr), "n_test": len(wte)}
        if not wtr or not wte:
            logger.warning("window %gs: no usable windows (train %d, test %d)", w, len(wtr), len(wte))
            continue
        if len(set(labels_of(wtr))) < 2:
            logger.warning("window %gs: training windows cover a single class", w)
            continue
        prop = config.proposed().fit(wtr)
        extra["k"] = prop.n_splits_
        ytr, yte = labels_of(wtr), labels_of(wte)
        rows += _evaluate_classifiers("proposed", prop.transform(wtr), ytr, prop.transform(wte),
                                      yte, methods, config.seed, extra)
        if baseline:
            base = BaselinePupilStats().fit(wtr)
            rows += _evaluate_classifiers("pupil-stats", base.transform(wtr), ytr,
                                          base.transform(wte), yte, methods, config.seed, extra)
    return rows


def run_table3(recordings: Sequence, config: ExperimentConfig = ExperimentConfig(),
               hidden: Sequence[int] = TABLE3_HIDDEN, epochs: int = 2000, lr: float = 0.01,
               baseline: bool = True):
    """Regression of the mean TLX score with one-hidden-layer networks; reports MAE."""
    train, test = split_train_test(recordings, config.train_fraction, config.seed)
    ytr, yte = scores_of(train), scores_of(test)
    prop = config.proposed().fit(train)
    sets = [("proposed", prop.transform(train), prop.transform(test))]
    if baseline:
        base = BaselinePupilStats().fit(train)
        sets.append(("pupil-stats", base.transform(train), base.transform(test)))
    rows = []
    for name, Xtr, Xte in sets:
        for h in hidden:
            model = fit_regressor_nn(Xtr, ytr, hidden=h, seed=config.seed, epochs=epochs, lr=lr)
            rows.append(ResultRow(name, f"NN-{h}", {"mae": mae(yte, model.predict(Xte))},
                                  {"k": prop.n_splits_}))
    return rows


def split_count_report(recordings: Sequence, config: ExperimentConfig = ExperimentConfig()):
    """Split-count estimate on the training part of an 80/20 split."""
    train, _ = split_train_test(recordings, config.train_fraction, config.seed)
    return estimate_splits(train, config.subset_fraction, range(1, config.k_max + 1), config.bins,
                           config.seed, config.min_samples, return_details=True)


def rows_to_records(rows: Sequence[ResultRow]) -> list[dict]:
    return [{"feature": r.feature, "method": r.method, **r.extra,
             **{k: round(float(v), 2) for k, v in r.scores.items()}} for r in rows]


def format_table(records: Sequence[dict]) -> str:
    if not records:
        return "(no results)"
    cols = list(dict.fromkeys(k for r in records for k in r))
    cells = [[_fmt(r.get(c, "")) for c in cols] for r in records]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths)),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.2f}"
    return str(v)


def accuracy_of(rows: Sequence[ResultRow], feature: str, method: str) -> float:
    for r in rows:
        if r.feature == feature and r.method == method:
            return r.scores["accuracy"]
    raise KeyError((feature, method))


def as_matrix(rows):
    return np.array([[r.scores[k] for k in ("accuracy", "precision", "recall", "f1")] for r in rows])
