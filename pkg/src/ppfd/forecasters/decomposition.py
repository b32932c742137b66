"""Forecasting on the normalized (optionally deseasonalized) series.

``NormalizedForecaster`` is the plain baseline: the raw series goes through
the [1, 2] / relative-change / max-abs pipeline and a base model forecasts the
next normalized value. ``PPFDForecaster`` first strips the ``n_components``
strongest sinusoids, forecasts what remains the same way, and adds the
extrapolated sinusoids back.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, clone
from sklearn.utils.validation import check_is_fitted

from ..scaling import fit_forward, forward_array, invert_array
from ..spectral import (dft, idft, remove_components, seasonal_values,
                        top_components)
from .ann import AnnForecaster
from .arima import ArimaForecaster

__all__ = [
    "NormalizedForecaster",
    "PPFDForecaster",
    "make_base",
    "ppfd_fit",
    "ppfd_forecast_step",
]


def make_base(kind, **params):
    if kind == "ann":
        return AnnForecaster(**params)
    if kind == "arima":
        return ArimaForecaster(**params)
    raise ValueError(f"unknown base model {kind!r}")


class NormalizedForecaster(BaseEstimator):
    """Base model fitted on the normalized series (no seasonal removal)."""

    def __init__(self, estimator=None):
        self.estimator = estimator

    def _deseasonalize(self, x):
        self.sinusoids_ = []
        return x

    def seasonal(self, t):
        check_is_fitted(self, "sinusoids_")
        return seasonal_values(self.sinusoids_, t)

    def fit(self, series):
        x = np.asarray(series, dtype=float).ravel()
        x_prime = self._deseasonalize(x)
        y, self.scaling_ = fit_forward(x_prime)
        base = AnnForecaster() if self.estimator is None else self.estimator
        self.estimator_ = clone(base).fit(y.values)
        self.n_train_ = x.size
        return self

    @property
    def min_history(self):
        check_is_fitted(self, "estimator_")
        return self.estimator_.min_history + 1

    def predict(self, series, start):
        """One-step forecasts for ``start .. len(series) - 1``.

        The forecast at ``t`` uses only ``series[:t]``; the value at the last
        index is never read.
        """
        check_is_fitted(self, "estimator_")
        x = np.asarray(series, dtype=float).ravel()
        stop = x.size
        if start < self.min_history:
            raise ValueError(f"need {self.min_history} past values, "
                             f"first target index {start}")
        if start >= stop:
            return np.zeros(0)
        t = np.arange(stop)
        seasonal = self.seasonal(t)
        x_prime = x[:stop - 1] - seasonal[:stop - 1]
        # y[i] is the normalized change into index i + 1
        y = np.concatenate([forward_array(x_prime, self.scaling_), [0.0]])
        y_hat = self.estimator_.predict(y, start - 1)
        x_prime_hat = invert_array(y_hat, x_prime[start - 1:stop - 1],
                                   self.scaling_)
        return seasonal[start:stop] + x_prime_hat


class PPFDForecaster(NormalizedForecaster):
    """Fourier decomposition forecaster.

    Parameters
    ----------
    n_components : int, default=3
        Number of highest-amplitude sinusoids extracted from training data.
    estimator : forecaster, default=None
        Model for the normalized residual; ``AnnForecaster()`` when None.
    """

    def __init__(self, n_components=3, estimator=None):
        super().__init__(estimator=estimator)
        self.n_components = n_components

    def _deseasonalize(self, x):
        if self.n_components < 1:
            raise ValueError("n_components must be >= 1")
        spectrum = dft(x)
        self.sinusoids_ = top_components(spectrum, self.n_components)
        self.spectrum_ = spectrum
        return idft(remove_components(spectrum, self.sinusoids_)).values


def ppfd_fit(training, c: int, base_kind: str = "ann", **config):
    return PPFDForecaster(c, make_base(base_kind, **config)).fit(training)


def ppfd_forecast_step(model: NormalizedForecaster, observed_history,
                       t_next: int) -> float:
    x = np.asarray(observed_history, dtype=float).ravel()
    if x.size < t_next:
        raise ValueError(f"history ends before index {t_next - 1}")
    x = np.concatenate([x[:t_next], [np.nan]])
    return float(model.predict(x, t_next)[0])
