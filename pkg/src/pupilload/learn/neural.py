"""One-hidden-layer regression network (sigmoid hidden units, linear output)."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y


class TrainingDivergedError(FloatingPointError):
    pass


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def unpack(theta, n_features, hidden):
    d, h = n_features, hidden
    w1 = theta[:d * h].reshape(d, h)
    b1 = theta[d * h:d * h + h]
    w2 = theta[d * h + h:d * h + 2 * h]
    b2 = theta[d * h + 2 * h]
    return w1, b1, w2, b2


def n_params(n_features, hidden):
    return n_features * hidden + 2 * hidden + 1


def forward(theta, X, hidden):
    w1, b1, w2, b2 = unpack(theta, X.shape[1], hidden)
    return _sigmoid(X @ w1 + b1) @ w2 + b2


def mse_loss_and_grad(theta, X, y, hidden):
    """Mean squared error of the network on (X, y) and its gradient w.r.t. the flat parameters."""
    n, d = X.shape
    w1, b1, w2, b2 = unpack(theta, d, hidden)
    a = _sigmoid(X @ w1 + b1)
    resid = a @ w2 + b2 - y
    loss = float(np.mean(resid ** 2))
    g_out = 2.0 * resid / n
    g_w2 = a.T @ g_out
    g_b2 = g_out.sum()
    g_hidden = np.outer(g_out, w2) * a * (1.0 - a)
    g_w1 = X.T @ g_hidden
    g_b1 = g_hidden.sum(axis=0)
    return loss, np.concatenate([g_w1.ravel(), g_b1, g_w2, [g_b2]])


class NeuralRegressor(RegressorMixin, BaseEstimator):
    """D -> hidden -> 1 network trained by full-batch gradient descent on MSE.

    Inputs and target are standardized with training statistics before
    training; predictions are mapped back to target units. Initial weights are
    uniform in [-0.5, 0.5].
    """

    kind = "NN-reg"

    def __init__(self, hidden=5, epochs=2000, learning_rate=0.01, random_state=0):
        self.hidden = hidden
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64, y_numeric=True)
        if X.shape[0] < 2:
            raise ValueError("need at least two samples")
        if self.hidden < 1:
            raise ValueError("hidden must be >= 1")
        self.n_features_in_ = X.shape[1]
        self.x_mean_ = X.mean(axis=0)
        sd = X.std(axis=0)
        self.x_scale_ = np.where(sd > 0, sd, 1.0)
        self.y_mean_ = float(y.mean())
        ysd = float(y.std())
        self.y_scale_ = ysd if ysd > 0 else 1.0
        Xs = (X - self.x_mean_) / self.x_scale_
        ys = (y - self.y_mean_) / self.y_scale_

        rng = np.random.default_rng(self.random_state)
        theta = rng.uniform(-0.5, 0.5, n_params(X.shape[1], self.hidden))
        self.loss_curve_ = []
        for epoch in range(1, self.epochs + 1):
            with np.errstate(over="ignore", invalid="ignore"):  # divergence is checked below
                loss, grad = mse_loss_and_grad(theta, Xs, ys, self.hidden)
            if not np.isfinite(loss) or not np.all(np.isfinite(grad)):
                raise TrainingDivergedError(f"non-finite loss at epoch {epoch}")
            theta -= self.learning_rate * grad
            self.loss_curve_.append(loss)
        self.loss_curve_ = np.array(self.loss_curve_)
        self.coefs_ = theta
        return self

    def predict(self, X):
        check_is_fitted(self, "coefs_")
        X = check_array(X, dtype=np.float64, ensure_min_samples=0)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, model expects {self.n_features_in_}")
        if X.shape[0] == 0:
            return np.zeros(0)
        Xs = (X - self.x_mean_) / self.x_scale_
        return forward(self.coefs_, Xs, self.hidden) * self.y_scale_ + self.y_mean_
