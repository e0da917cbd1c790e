from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y


class NotEnoughClassesError(ValueError):
    pass


class LabelClassifier(ClassifierMixin, BaseEstimator):
    """Shared input handling: labels are encoded as indices into ``classes_``
    (sorted), and every argmax tie resolves to the smallest class index."""

    kind = None

    def _validate_fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        if X.shape[1] == 0:
            raise ValueError("X has no features")
        self.classes_, y_idx = np.unique(y, return_inverse=True)
        if len(self.classes_) < 2:
            raise NotEnoughClassesError("need at least two classes to fit a classifier")
        self.n_features_in_ = X.shape[1]
        return X, y_idx

    def _validate_predict(self, X):
        check_is_fitted(self, "classes_")
        X = check_array(X, dtype=np.float64, ensure_min_samples=0)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, model expects {self.n_features_in_}")
        return X

    def decision_function(self, X):
        raise NotImplementedError

    def predict(self, X):
        X = self._validate_predict(X)
        if X.shape[0] == 0:
            return self.classes_[:0]
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]


def log_softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))
