"""CART decision trees (Gini impurity) and a bootstrap random forest."""

from __future__ import annotations

import math

import numpy as np

from ._base import LabelClassifier


def _gini_split(x, y, n_classes, min_leaf):
    """Best threshold on one feature: returns (weighted child impurity, threshold) or None.

    The threshold is the largest value sent left (``x <= threshold``), so the
    split depends only on the ordering of ``x``.
    """
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    n = len(xs)
    valid = np.nonzero(xs[:-1] < xs[1:])[0]
    valid = valid[(valid + 1 >= min_leaf) & (n - valid - 1 >= min_leaf)]
    if valid.size == 0:
        return None
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), ys] = 1.0
    left = np.cumsum(onehot, axis=0)[valid]
    total = onehot.sum(axis=0)
    right = total - left
    n_left = (valid + 1).astype(float)
    n_right = n - n_left
    gini_left = 1.0 - np.sum(left ** 2, axis=1) / n_left ** 2
    gini_right = 1.0 - np.sum(right ** 2, axis=1) / n_right ** 2
    impurity = (n_left * gini_left + n_right * gini_right) / n
    best = int(np.argmin(impurity))
    return impurity[best], xs[valid[best]]


class DecisionTree(LabelClassifier):
    """Gini CART tree grown until leaves are pure or hold ``min_samples_leaf`` samples.

    ``max_features`` features ("sqrt", an int or None for all) are drawn at
    random per node; if none of them admits a split the remaining ones are tried.
    """

    kind = "TREE"

    def __init__(self, max_features=None, min_samples_leaf=1, max_depth=None, random_state=0):
        self.max_features = max_features
        self.min_samples_leaf = min_samples_leaf
        self.max_depth = max_depth
        self.random_state = random_state

    def _n_candidates(self, d):
        if self.max_features is None:
            return d
        if self.max_features == "sqrt":
            return max(1, int(math.sqrt(d)))
        return max(1, min(d, int(self.max_features)))

    def fit(self, X, y, sample_indices=None):
        X, y_idx = self._validate_fit(X, y)
        self._grow(X, y_idx, len(self.classes_), sample_indices)
        return self

    def _grow(self, X, y_idx, n_classes, sample_indices=None):
        rng = np.random.default_rng(self.random_state)
        d = X.shape[1]
        n_try = self._n_candidates(d)
        feature, threshold, left, right, counts = [], [], [], [], []

        def new_node(idx):
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            counts.append(np.bincount(y_idx[idx], minlength=n_classes))
            return len(feature) - 1

        root_idx = np.arange(len(y_idx)) if sample_indices is None else np.asarray(sample_indices)
        stack = [(new_node(root_idx), root_idx, 0)]
        while stack:
            node, idx, depth = stack.pop()
            c = counts[node]
            if np.count_nonzero(c) <= 1 or len(idx) < 2 * self.min_samples_leaf:
                continue
            if self.max_depth is not None and depth >= self.max_depth:
                continue
            perm = rng.permutation(d)
            best = None
            for group in (perm[:n_try], perm[n_try:]):
                for f in group:
                    found = _gini_split(X[idx, f], y_idx[idx], n_classes, self.min_samples_leaf)
                    if found is not None and (best is None or found[0] < best[0]):
                        best = (found[0], f, found[1])
                if best is not None:
                    break
            if best is None:
                continue
            _, f, thr = best
            go_left = X[idx, f] <= thr
            feature[node], threshold[node] = int(f), float(thr)
            li, ri = idx[go_left], idx[~go_left]
            left[node] = new_node(li)
            right[node] = new_node(ri)
            stack.append((right[node], ri, depth + 1))
            stack.append((left[node], li, depth + 1))

        self.feature_ = np.array(feature, dtype=np.int64)
        self.threshold_ = np.array(threshold, dtype=np.float64)
        self.children_left_ = np.array(left, dtype=np.int64)
        self.children_right_ = np.array(right, dtype=np.int64)
        self.value_ = np.array(counts, dtype=np.float64)
        return self

    def apply(self, X):
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.children_left_[node] >= 0
        while active.any():
            rows = np.nonzero(active)[0]
            n = node[rows]
            go_left = X[rows, self.feature_[n]] <= self.threshold_[n]
            node[rows] = np.where(go_left, self.children_left_[n], self.children_right_[n])
            active = self.children_left_[node] >= 0
        return node

    def predict_proba(self, X):
        X = self._validate_predict(X)
        v = self.value_[self.apply(X)]
        return v / v.sum(axis=1, keepdims=True)

    def decision_function(self, X):
        return self.predict_proba(X)


class RandomForest(LabelClassifier):
    """Bagged Gini trees with ``sqrt(D)`` candidate features per split; predicts the
    class with the highest mean tree probability.

    Parameters
    ----------
    n_estimators : int
        Number of trees.
    max_features : "sqrt", int or None
        Candidate features per split.
    min_samples_leaf : int
        Minimum samples in a leaf.
    bootstrap : bool
        Draw a bootstrap sample for every tree.
    random_state : int
        Seed for bootstrap draws and feature sampling.
    """

    kind = "RF"

    def __init__(self, n_estimators=10, max_features="sqrt", min_samples_leaf=1, bootstrap=True,
                 random_state=0):
        self.n_estimators = n_estimators
        self.max_features = max_features
        self.min_samples_leaf = min_samples_leaf
        self.bootstrap = bootstrap
        self.random_state = random_state

    def fit(self, X, y):
        X, y_idx = self._validate_fit(X, y)
        n = X.shape[0]
        self.estimators_ = []
        for ss in np.random.SeedSequence(self.random_state).spawn(self.n_estimators):
            tree_seed, boot_seed = ss.generate_state(2).tolist()
            tree = DecisionTree(self.max_features, self.min_samples_leaf, random_state=tree_seed)
            tree.classes_ = self.classes_
            tree.n_features_in_ = self.n_features_in_
            idx = (np.random.default_rng(boot_seed).integers(0, n, n) if self.bootstrap
                   else np.arange(n))
            tree._grow(X, y_idx, len(self.classes_), np.sort(idx))
            self.estimators_.append(tree)
        return self

    def predict_proba(self, X):
        X = self._validate_predict(X)
        return np.mean([t.predict_proba(X) for t in self.estimators_], axis=0)

    def decision_function(self, X):
        return self.predict_proba(X)
