import numpy as np
import pytest
from hypothesis import given, strategies as st

from pupilload.metrics import (ClassificationScores, classification_metrics, confusion_matrix,
                               mae, score_labels)


def brute_force(y_true, y_pred, k):
    acc = sum(t == p for t, p in zip(y_true, y_pred)) / len(y_true)
    precs, recs, f1s = [], [], []
    for c in range(k):
        if c not in y_true:
            continue
        tp = sum(t == c and p == c for t, p in zip(y_true, y_pred))
        fp = sum(t != c and p == c for t, p in zip(y_true, y_pred))
        fn = sum(t == c and p != c for t, p in zip(y_true, y_pred))
        precs.append(tp / (tp + fp) if tp + fp else 0.0)
        recs.append(tp / (tp + fn) if tp + fn else 0.0)
        f1s.append(2 * tp / (2 * tp + fp + fn) if tp + fp + fn else 0.0)
    return acc, float(np.mean(precs)), float(np.mean(recs)), float(np.mean(f1s))


@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=300))
def test_matches_brute_force(pairs):
    yt, yp = map(list, zip(*pairs))
    got = classification_metrics(confusion_matrix(np.array(yt), np.array(yp), 3))
    exp = brute_force(yt, yp, 3)
    assert (got.accuracy, got.precision, got.recall, got.f1) == pytest.approx(exp, abs=1e-12)


def test_confusion_orientation():
    cm = confusion_matrix(np.array([0, 0, 1, 2]), np.array([0, 1, 1, 1]), 3)
    assert cm.tolist() == [[1, 1, 0], [0, 1, 0], [0, 1, 0]]


def test_confusion_validation():
    with pytest.raises(ValueError):
        confusion_matrix(np.array([0, 3]), np.array([0, 1]), 3)
    with pytest.raises(ValueError):
        confusion_matrix(np.array([0, 1]), np.array([0]), 3)
    with pytest.raises(ValueError):
        classification_metrics(np.zeros((3, 3)))


def test_perfect_and_percent():
    s = score_labels(["C1", "C3", "C2"], ["C1", "C3", "C2"], ("C1", "C2", "C3"))
    assert s == ClassificationScores(1.0, 1.0, 1.0, 1.0)
    assert s.as_percent() == {"accuracy": 100.0, "precision": 100.0, "recall": 100.0, "f1": 100.0}


def test_absent_class_excluded_from_macro_mean():
    s = score_labels(["C1", "C1"], ["C1", "C2"], ("C1", "C2", "C3"))
    assert s.recall == 0.5 and s.precision == 1.0


def test_mae():
    assert mae([1, 2, 3], [1, 2, 3]) == 0.0
    assert mae([0, 0], [1, -3]) == 2.0
    with pytest.raises(ValueError):
        mae([], [])
    with pytest.raises(ValueError):
        mae([1], [1, 2])
