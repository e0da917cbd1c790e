"""Classifier suite and neural regressor behind sklearn-style fit/predict.

``make_classifier`` returns a pipeline that first min-max scales every
feature column to [0, 1] with training ranges (test values are clipped).
"""

from __future__ import annotations

import numpy as np
from sklearn.pipeline import Pipeline
from sklearn.preprocessing import MinMaxScaler

from ._base import NotEnoughClassesError
from .bayes import GaussianNB
from .forest import DecisionTree, RandomForest
from .linear import LinearDiscriminant, LinearSVM, LogisticRegressionGD
from .neighbors import KNearestNeighbors
from .neural import NeuralRegressor, TrainingDivergedError, mse_loss_and_grad
from .persist import load_model, loads_model, dumps_model, save_model

CLASSIFIERS = {
    "RF": RandomForest,
    "GNB": GaussianNB,
    "LR": LogisticRegressionGD,
    "SVM": LinearSVM,
    "KNN": KNearestNeighbors,
    "DA": LinearDiscriminant,
}
_SEEDED = {"RF"}
_ALIASES = {"DR": "DA", "LDA": "DA"}


def canonical_kind(kind: str) -> str:
    kind = kind.upper()
    kind = _ALIASES.get(kind, kind)
    if kind not in CLASSIFIERS:
        raise ValueError(f"unknown classifier {kind!r}; choose from {', '.join(CLASSIFIERS)}")
    return kind


def make_classifier(kind: str, seed: int = 0, scale: bool = True, **hyper):
    kind = canonical_kind(kind)
    if kind in _SEEDED:
        hyper.setdefault("random_state", seed)
    est = CLASSIFIERS[kind](**hyper)
    if not scale:
        return est
    return Pipeline([("scale", MinMaxScaler(clip=True)), ("clf", est)])


def fit_classifier(kind: str, X, y, hyper: dict | None = None, seed: int = 0, classes=None):
    """Fit a scaled classifier; ``classes`` (if given) must all occur in ``y``."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] == 0:
        raise ValueError("X must be a 2-d array with at least one feature")
    if classes is not None:
        missing = sorted(set(classes) - set(np.asarray(y).tolist()))
        if missing:
            raise NotEnoughClassesError(f"classes missing from training labels: {missing}")
    return make_classifier(kind, seed, **(hyper or {})).fit(X, y)


def predict(model, X):
    """Predict rows of ``X``; an empty ``X`` gives an empty result."""
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        if X.ndim == 2 and X.shape[1] not in (0, model.n_features_in_):
            raise ValueError(f"X has {X.shape[1]} features, model expects {model.n_features_in_}")
        final = model.steps[-1][1] if isinstance(model, Pipeline) else model
        return final.classes_[:0] if hasattr(final, "classes_") else np.zeros(0)
    return model.predict(X)


def fit_regressor_nn(X, y, hidden: int = 5, seed: int = 0, epochs: int = 2000,
                     lr: float = 0.01) -> NeuralRegressor:
    return NeuralRegressor(hidden=hidden, epochs=epochs, learning_rate=lr,
                           random_state=seed).fit(X, y)


def predict_reg(model: NeuralRegressor, X):
    return predict(model, X)


__all__ = [
    "CLASSIFIERS", "DecisionTree", "GaussianNB", "KNearestNeighbors", "LinearDiscriminant",
    "LinearSVM", "LogisticRegressionGD", "NeuralRegressor", "NotEnoughClassesError",
    "RandomForest", "TrainingDivergedError", "canonical_kind", "dumps_model", "fit_classifier",
    "fit_regressor_nn", "load_model", "loads_model", "make_classifier", "mse_loss_and_grad",
    "predict", "predict_reg", "save_model",
]
