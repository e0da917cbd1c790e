from __future__ import annotations

import numpy as np

from ._base import LabelClassifier


class GaussianNB(LabelClassifier):
    """Gaussian naive Bayes; per-class feature variances are floored at ``var_floor``."""

    kind = "GNB"

    def __init__(self, var_floor=1e-9):
        self.var_floor = var_floor

    def fit(self, X, y):
        X, y_idx = self._validate_fit(X, y)
        k = len(self.classes_)
        self.theta_ = np.array([X[y_idx == c].mean(axis=0) for c in range(k)])
        self.var_ = np.maximum(np.array([X[y_idx == c].var(axis=0) for c in range(k)]),
                               self.var_floor)
        self.class_prior_ = np.bincount(y_idx, minlength=k) / len(y_idx)
        return self

    def joint_log_likelihood(self, X):
        ll = -0.5 * (np.log(2.0 * np.pi * self.var_)[None, :, :]
                     + (X[:, None, :] - self.theta_[None, :, :]) ** 2 / self.var_[None, :, :])
        return ll.sum(axis=2) + np.log(self.class_prior_)

    def decision_function(self, X):
        return self.joint_log_likelihood(X)
