"""Confusion-matrix classification metrics (macro averaged) and MAE."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ClassificationScores:
    accuracy: float
    precision: float
    recall: float
    f1: float

    def as_percent(self) -> dict:
        return {k: 100.0 * v for k, v in vars(self).items()}


def confusion_matrix(y_true, y_pred, n_classes: int) -> np.ndarray:
    """``counts[i, j]`` = number of samples of true class ``i`` predicted as ``j``."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ValueError("y_true and y_pred must be 1-d and of equal length")
    for name, y in (("y_true", y_true), ("y_pred", y_pred)):
        if y.size and (not np.issubdtype(y.dtype, np.integer) or y.min() < 0 or y.max() >= n_classes):
            raise ValueError(f"{name} labels must be integers in [0, {n_classes})")
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    return counts


def classification_metrics(cm) -> ClassificationScores:
    """Accuracy plus precision, recall and F1 averaged over the classes present in the truth.

    A class whose denominator is zero scores 0 for that metric.
    """
    cm = np.asarray(cm)
    total = cm.sum()
    if total <= 0:
        raise ValueError("confusion matrix is empty")
    tp = np.diag(cm).astype(float)
    fp = cm.sum(axis=0) - tp
    fn = cm.sum(axis=1) - tp
    present = cm.sum(axis=1) > 0

    def ratio(num, den):
        return np.divide(num, den, out=np.zeros_like(num), where=den > 0)

    precision = ratio(tp, tp + fp)[present].mean()
    recall = ratio(tp, tp + fn)[present].mean()
    f1 = ratio(2 * tp, 2 * tp + fp + fn)[present].mean()
    return ClassificationScores(float(tp.sum() / total), float(precision), float(recall), float(f1))


def score_labels(y_true, y_pred, classes) -> ClassificationScores:
    """Metrics for arbitrary label values, indexed by their position in ``classes``."""
    index = {c: i for i, c in enumerate(classes)}
    return classification_metrics(confusion_matrix(
        np.array([index[c] for c in y_true], dtype=np.int64),
        np.array([index[c] for c in y_pred], dtype=np.int64), len(classes)))


def mae(y_true, y_pred) -> float:
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred must have equal length")
    if y_true.size == 0:
        raise ValueError("mae of empty vectors is undefined")
    return float(np.mean(np.abs(y_true - y_pred)))
