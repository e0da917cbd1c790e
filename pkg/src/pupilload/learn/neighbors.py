from __future__ import annotations

import numpy as np

from ._base import LabelClassifier


class KNearestNeighbors(LabelClassifier):
    """Majority vote among the ``n_neighbors`` closest training rows (Euclidean).

    With ``n_neighbors=1`` a distance tie between training rows of different
    classes goes to the smallest class index, as does any tied vote.
    """

    kind = "KNN"

    def __init__(self, n_neighbors=1):
        self.n_neighbors = n_neighbors

    def fit(self, X, y):
        X, y_idx = self._validate_fit(X, y)
        if not 1 <= self.n_neighbors <= X.shape[0]:
            raise ValueError(f"n_neighbors must lie in [1, {X.shape[0]}]")
        self.fit_X_ = X
        self.fit_y_ = y_idx
        return self

    def decision_function(self, X):
        k = len(self.classes_)
        votes = np.zeros((X.shape[0], k))
        for start in range(0, X.shape[0], 512):
            block = X[start:start + 512]
            dist = ((block[:, None, :] - self.fit_X_[None, :, :]) ** 2).sum(axis=2)
            if self.n_neighbors == 1:
                nearest = dist == dist.min(axis=1, keepdims=True)
                # lowest class index among all equidistant nearest rows
                cls = np.where(nearest, self.fit_y_[None, :], k).min(axis=1)
                votes[start + np.arange(len(block)), cls] = 1.0
            else:
                order = np.argsort(dist, axis=1, kind="stable")[:, :self.n_neighbors]
                labels = self.fit_y_[order]
                for c in range(k):
                    votes[start:start + len(block), c] = (labels == c).sum(axis=1)
        return votes
