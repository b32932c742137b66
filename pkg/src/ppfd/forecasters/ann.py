"""Shallow feed-forward network: ``w`` inputs, 5 sigmoid units, 1 linear output."""
from __future__ import annotations

import numpy as np
from scipy.optimize import minimize
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .windows import WindowDataset, lagged_windows, make_windows

__all__ = [
    "AnnTrainingError",
    "AnnRegressor",
    "AnnForecaster",
    "ann_fit",
    "ann_predict",
    "loss_and_grad",
    "pack",
    "unpack",
]

HIDDEN_UNITS = 5


class AnnTrainingError(RuntimeError):
    pass


def sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def pack(W1, b1, W2, b2):
    return np.concatenate([W1.ravel(), b1, W2, [b2]])


def unpack(theta, n_inputs, n_hidden=HIDDEN_UNITS):
    i = n_inputs * n_hidden
    W1 = theta[:i].reshape(n_inputs, n_hidden)
    b1 = theta[i:i + n_hidden]
    W2 = theta[i + n_hidden:i + 2 * n_hidden]
    return W1, b1, W2, float(theta[-1])


def forward(X, W1, b1, W2, b2):
    h = sigmoid(X @ W1 + b1)
    return h @ W2 + b2, h


def loss_and_grad(theta, X, y, n_hidden=HIDDEN_UNITS):
    """Mean squared error and its gradient with respect to the packed weights."""
    W1, b1, W2, b2 = unpack(theta, X.shape[1], n_hidden)
    out, h = forward(X, W1, b1, W2, b2)
    err = out - y
    loss = float(np.mean(err ** 2))
    d_out = 2.0 * err / y.size
    d_h = np.outer(d_out, W2) * h * (1.0 - h)
    grad = pack(X.T @ d_h, d_h.sum(axis=0), h.T @ d_out, d_out.sum())
    return loss, grad


class AnnRegressor(RegressorMixin, BaseEstimator):
    """Full-batch gradient descent on mean squared error.

    Parameters
    ----------
    learning_rate : float, default=0.05
    epochs : int, default=2000
        Zero returns the seeded initial weights untouched.
    init_scale : float, default=0.5
        Weights and biases start uniform in ``[-init_scale, init_scale]``.
    random_state : int, default=0
    """

    def __init__(self, learning_rate=0.05, epochs=2000, init_scale=0.5,
                 random_state=0, solver="gd"):
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.init_scale = init_scale
        self.random_state = random_state
        self.solver = solver

    def _init_weights(self, n_inputs):
        rng = np.random.default_rng(self.random_state)
        size = n_inputs * HIDDEN_UNITS + 2 * HIDDEN_UNITS + 1
        return rng.uniform(-self.init_scale, self.init_scale, size)

    def fit(self, X, y):
        if self.solver not in ("gd", "lbfgs"):
            raise ValueError(f"solver must be 'gd' or 'lbfgs', got "
                             f"{self.solver!r}")
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        theta = self._init_weights(X.shape[1])
        loss = np.nan
        self.loss_curve_ = []
        if self.solver == "lbfgs" and self.epochs > 0:
            res = minimize(loss_and_grad, theta, args=(X, y), jac=True,
                           method="L-BFGS-B",
                           options={"maxiter": int(self.epochs)})
            theta = res.x
            if not np.isfinite(res.fun):
                raise AnnTrainingError(f"non-finite loss: {res.message}")
        for epoch in range(int(self.epochs) if self.solver == "gd" else 0):
            with np.errstate(over="ignore", invalid="ignore"):
                loss, grad = loss_and_grad(theta, X, y)
            if not (np.isfinite(loss) and np.isfinite(grad).all()):
                raise AnnTrainingError(
                    f"non-finite loss at epoch {epoch} "
                    f"(learning_rate={self.learning_rate})")
            theta -= self.learning_rate * grad
            if epoch % 100 == 0:
                self.loss_curve_.append(loss)
        self.n_features_in_ = X.shape[1]
        self.coefs_ = theta
        self.loss_ = float(loss_and_grad(theta, X, y)[0])
        return self

    @property
    def weights(self):
        check_is_fitted(self, "coefs_")
        return unpack(self.coefs_, self.n_features_in_)

    def predict(self, X):
        check_is_fitted(self, "coefs_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected windows of length "
                             f"{self.n_features_in_}, got {X.shape[1]}")
        return forward(X, *self.weights)[0]


class AnnForecaster(BaseEstimator):
    """One-step-ahead forecaster over a sliding window of the series."""

    def __init__(self, window=7, learning_rate=0.05, epochs=2000,
                 init_scale=0.5, random_state=0, solver="gd"):
        self.window = window
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.init_scale = init_scale
        self.random_state = random_state
        self.solver = solver

    @property
    def min_history(self):
        return self.window

    def fit(self, series):
        data = make_windows(series, self.window)
        self.regressor_ = AnnRegressor(
            self.learning_rate, self.epochs, self.init_scale,
            self.random_state, self.solver).fit(data.inputs, data.targets)
        return self

    def predict(self, series, start):
        """Forecasts for indices ``start .. len(series) - 1`` from prior values."""
        check_is_fitted(self, "regressor_")
        x = np.asarray(series, dtype=float)
        return self.regressor_.predict(
            lagged_windows(x, self.window, start, x.size))


def ann_fit(data: WindowDataset, learning_rate=0.05, epochs=2000,
            init_scale=0.5, seed=0) -> AnnRegressor:
    if len(data) == 0:
        raise ValueError("empty dataset")
    return AnnRegressor(learning_rate, epochs, init_scale, seed).fit(
        data.inputs, data.targets)


def ann_predict(model: AnnRegressor, window) -> float:
    window = np.asarray(window, dtype=float).ravel()
    return float(model.predict(window[None, :])[0])
