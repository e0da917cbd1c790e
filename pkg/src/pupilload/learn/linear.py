"""Linear classifiers: multinomial logistic regression, one-vs-rest linear SVM and LDA."""

from __future__ import annotations

import numpy as np

from ._base import LabelClassifier, log_softmax


class LogisticRegressionGD(LabelClassifier):
    """Multinomial logistic regression fitted by full-batch gradient descent.

    Weights start at zero; optimization stops after ``max_iter`` steps or once
    the gradient norm drops below ``tol``.
    """

    kind = "LR"

    def __init__(self, learning_rate=0.5, max_iter=3000, alpha=0.0, tol=1e-7):
        self.learning_rate = learning_rate
        self.max_iter = max_iter
        self.alpha = alpha
        self.tol = tol

    def fit(self, X, y):
        X, y_idx = self._validate_fit(X, y)
        n, d = X.shape
        k = len(self.classes_)
        target = np.zeros((n, k))
        target[np.arange(n), y_idx] = 1.0
        w = np.zeros((d, k))
        b = np.zeros(k)
        for it in range(1, self.max_iter + 1):
            p = np.exp(log_softmax(X @ w + b))
            err = (p - target) / n
            gw = X.T @ err + self.alpha * w
            gb = err.sum(axis=0)
            w -= self.learning_rate * gw
            b -= self.learning_rate * gb
            if np.sqrt(np.sum(gw ** 2) + np.sum(gb ** 2)) < self.tol:
                break
        self.n_iter_ = it
        self.coef_, self.intercept_ = w, b
        return self

    def decision_function(self, X):
        return X @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        X = self._validate_predict(X)
        return np.exp(log_softmax(self.decision_function(X)))


class LinearSVM(LabelClassifier):
    """One-vs-rest linear SVM: hinge loss with L2 penalty, subgradient descent.

    Each binary problem minimizes ``0.5 |w|^2 + C * sum(hinge)`` (scaled by
    ``1 / (C n)``) with step ``learning_rate / sqrt(t)``; the iterate with
    the lowest objective is kept. The intercept is not penalized.
    """

    kind = "SVM"

    def __init__(self, C=1.0, learning_rate=1.0, max_iter=2000):
        self.C = C
        self.learning_rate = learning_rate
        self.max_iter = max_iter

    def fit(self, X, y):
        X, y_idx = self._validate_fit(X, y)
        n, d = X.shape
        lam = 1.0 / (self.C * n)
        coefs, intercepts = [], []
        for c in range(len(self.classes_)):
            s = np.where(y_idx == c, 1.0, -1.0)
            w, b = np.zeros(d), 0.0
            best = (np.inf, w.copy(), b)
            for t in range(1, self.max_iter + 1):
                margin = s * (X @ w + b)
                viol = margin < 1.0
                obj = 0.5 * lam * (w @ w) + np.mean(np.maximum(0.0, 1.0 - margin))
                if obj < best[0]:
                    best = (obj, w.copy(), b)
                gw = lam * w - (s[viol] @ X[viol]) / n
                gb = -s[viol].sum() / n
                eta = self.learning_rate / np.sqrt(t)
                w = w - eta * gw
                b = b - eta * gb
            margin = s * (X @ w + b)
            obj = 0.5 * lam * (w @ w) + np.mean(np.maximum(0.0, 1.0 - margin))
            if obj < best[0]:
                best = (obj, w, b)
            coefs.append(best[1])
            intercepts.append(best[2])
        self.coef_ = np.array(coefs).T
        self.intercept_ = np.array(intercepts)
        return self

    def decision_function(self, X):
        return X @ self.coef_ + self.intercept_


class LinearDiscriminant(LabelClassifier):
    """Linear discriminant analysis with pooled covariance plus ``ridge`` on the diagonal."""

    kind = "DA"

    def __init__(self, ridge=1e-6):
        self.ridge = ridge

    def fit(self, X, y):
        X, y_idx = self._validate_fit(X, y)
        n, d = X.shape
        k = len(self.classes_)
        self.means_ = np.array([X[y_idx == c].mean(axis=0) for c in range(k)])
        self.priors_ = np.bincount(y_idx, minlength=k) / n
        centered = X - self.means_[y_idx]
        cov = centered.T @ centered / max(n - k, 1) + self.ridge * np.eye(d)
        self.coef_ = np.linalg.solve(cov, self.means_.T)
        self.intercept_ = -0.5 * np.sum(self.means_.T * self.coef_, axis=0) + np.log(self.priors_)
        return self

    def decision_function(self, X):
        return X @ self.coef_ + self.intercept_
