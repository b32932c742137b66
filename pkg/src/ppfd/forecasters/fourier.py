from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..series import TimeSeries
from ..spectral import Sinusoid, dft, seasonal_values

__all__ = ["FourierForecaster", "fourier_sum_forecast"]


class FourierForecaster(BaseEstimator):
    """Extrapolates every positive-frequency sinusoid plus the mean.

    The forecast never looks at observations after training; it is the
    periodic continuation of the training window.
    """

    @property
    def min_history(self):
        return 0

    def fit(self, series):
        x = np.asarray(series, dtype=float).ravel()
        if x.size < 2:
            raise ValueError("need at least two values")
        spectrum = dft(x)
        n = spectrum.n
        amp = spectrum.amplitudes()
        phase = np.angle(spectrum.coeffs[:n // 2 + 1])
        sinusoids = []
        for k in range(1, n // 2 + 1):
            ph = float(phase[k])
            if 2 * k == n:
                ph = np.pi if spectrum.coeffs[k].real < 0 else 0.0
            sinusoids.append(Sinusoid(k, n, float(amp[k]), ph))
        self.mean_ = float(spectrum.coeffs[0].real / n)
        self.sinusoids_ = sinusoids
        self.n_train_ = n
        self.n_components_ = math.ceil(n / 2)
        return self

    def forecast(self, t):
        check_is_fitted(self, "sinusoids_")
        return self.mean_ + seasonal_values(self.sinusoids_, t)

    def predict(self, series, start):
        stop = np.asarray(series).size
        return self.forecast(np.arange(start, stop))


def fourier_sum_forecast(training, horizon) -> TimeSeries:
    """Sum of all training sinusoids over the index range ``horizon``."""
    model = FourierForecaster().fit(training)
    t = np.asarray(horizon)
    out = model.forecast(t)
    if isinstance(training, TimeSeries):
        return training.with_values(out, start=int(t[0]))
    return TimeSeries(out, origin=int(t[0]))
