"""ARIMA(p, 1, q) fitted by conditional sum of squares.

The differenced series ``d`` follows

    d_t = mu + sum_i phi_i d_{t-i} + sum_j theta_j e_{t-j} + e_t

with pre-sample errors set to zero. Coefficients are optimized with BFGS in an
unconstrained space that maps onto the stationary / invertible region through
partial autocorrelations.
"""
from __future__ import annotations

import itertools
import warnings

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

__all__ = [
    "ArimaError",
    "ArimaForecaster",
    "arima_fit",
    "arima_select",
    "arima_predict",
]

_PRECISION_LOSS = 2


class ArimaError(RuntimeError):
    pass


def _pacf_to_coefs(u):
    """Map unconstrained reals to coefficients of a stationary AR polynomial."""
    r = np.tanh(u)
    phi = np.zeros(0)
    for k in range(r.size):
        phi = np.concatenate([phi - r[k] * phi[::-1], [r[k]]])
    return phi


def _split(theta, p, q):
    ar = _pacf_to_coefs(theta[1:1 + p])
    ma = -_pacf_to_coefs(theta[1 + p:1 + p + q])
    return theta[0], ar, ma


def _ar_part(d, mu, ar):
    """``mu + sum_i ar_i d_{t-i}`` for every t; entries t < p are undefined."""
    p = ar.size
    out = np.full(d.size, mu, dtype=float)
    for i in range(1, min(p, d.size - 1) + 1):
        out[i:] += ar[i - 1] * d[:-i]
    return out


def _residuals(d, mu, ar, ma):
    p = ar.size
    a = d[p:] - _ar_part(d, mu, ar)[p:]
    if ma.size:
        return lfilter([1.0], np.concatenate([[1.0], ma]), a)
    return a


def _ma_part(e, ma):
    """``sum_j ma_j e_{t-j}`` aligned with ``e``."""
    out = np.zeros(e.size)
    for j in range(1, ma.size + 1):
        if j < e.size:
            out[j:] += ma[j - 1] * e[:-j]
    return out


def _check_roots(ar):
    if ar.size:
        roots = np.roots(np.concatenate([-ar[::-1], [1.0]]))
        if np.any(np.abs(roots) <= 1.0):
            warnings.warn("fitted AR polynomial has roots on or inside the "
                          "unit circle", RuntimeWarning, stacklevel=3)


class ArimaForecaster(BaseEstimator):
    """ARIMA with one order of differencing.

    Parameters
    ----------
    order : tuple of (p, q) or None
        Fixed orders. ``None`` selects them by AIC over the grid
        ``0..max_p`` x ``0..max_q``.
    max_p, max_q : int, default=5
    maxiter : int, default=2000
        BFGS iteration cap per fit.
    """

    def __init__(self, order=None, max_p=5, max_q=5, maxiter=2000):
        self.order = order
        self.max_p = max_p
        self.max_q = max_q
        self.maxiter = maxiter

    @property
    def min_history(self):
        check_is_fitted(self, "ar_coefs_")
        return self.p_ + 1

    def fit(self, series):
        z = np.asarray(series, dtype=float).ravel()
        if self.order is None:
            p, q = arima_select(z, self.max_p, self.max_q, self.maxiter)
        else:
            p, q = (int(v) for v in self.order)
        return self._fit_order(z, p, q)

    def _fit_order(self, z, p, q):
        if p < 0 or q < 0:
            raise ValueError("orders must be non-negative")
        if z.size <= p + q + 2:
            raise ArimaError(
                f"series of length {z.size} too short for ARIMA({p},1,{q})")
        d = np.diff(z)
        scale = np.std(d)
        if not scale > 0:
            scale = max(float(np.abs(d).max()), 1.0)
        ds = d / scale
        n_eff = ds.size - p

        def objective(theta):
            e = _residuals(ds, *_split(theta, p, q))
            sse = float(e @ e)
            return sse / n_eff if np.isfinite(sse) else 1e300

        theta0 = np.zeros(1 + p + q)
        theta0[0] = ds.mean()
        if p + q == 0:
            theta = theta0
            nit = 0
        else:
            res = minimize(objective, theta0, method="BFGS",
                           options={"maxiter": self.maxiter, "gtol": 1e-8})
            if not res.success and res.status != _PRECISION_LOSS:
                raise ArimaError(
                    f"ARIMA({p},1,{q}) did not converge after {res.nit} "
                    f"iterations ({res.nfev} evaluations): {res.message}")
            theta, nit = res.x, res.nit
        mu, ar, ma = _split(theta, p, q)
        _check_roots(ar)
        e = _residuals(d, mu * scale, ar, ma)
        sse = float(e @ e)
        self.p_, self.q_ = p, q
        self.intercept_ = float(mu * scale)
        self.ar_coefs_ = ar
        self.ma_coefs_ = ma
        self.sse_ = sse
        self.n_iter_ = int(nit)
        self.aic_ = _aic(sse, e.size, p, q)
        self.residuals_ = e[e.size - q:] if q else np.zeros(0)
        return self

    def predict(self, series, start):
        """One-step forecasts for indices ``start .. len(series) - 1``.

        Residuals are regenerated by running the recursion over the supplied
        history, so each forecast at ``t`` depends on ``series[:t]`` only.
        """
        check_is_fitted(self, "ar_coefs_")
        z = np.asarray(series, dtype=float).ravel()
        if start < self.p_ + 1:
            raise ArimaError(
                f"need {self.p_ + 1} past values, first target index {start}")
        stop = z.size
        # residuals up to d index stop-2 only use z[:stop-1]
        d = np.diff(z[:stop - 1])
        p = self.p_
        e = np.zeros(d.size)
        if d.size > p:
            e[p:] = _residuals(d, self.intercept_, self.ar_coefs_,
                               self.ma_coefs_)
        # forecast of d_{t-1} for series index t uses d and e strictly before it
        d_ext = np.concatenate([d, [0.0]])
        e_ext = np.concatenate([e, [0.0]])
        drift = (_ar_part(d_ext, self.intercept_, self.ar_coefs_)
                 + _ma_part(e_ext, self.ma_coefs_))
        idx = np.arange(start, stop)
        return z[idx - 1] + drift[idx - 1]

    def to_params(self):
        return {"p": self.p_, "d": 1, "q": self.q_,
                "ar_coeffs": self.ar_coefs_.tolist(),
                "ma_coeffs": self.ma_coefs_.tolist(),
                "intercept": self.intercept_,
                "residual_history": self.residuals_.tolist()}


def _aic(sse, n, p, q):
    n = max(n, 1)
    return n * np.log(max(sse, np.finfo(float).tiny) / n) + 2 * (p + q + 1)


def arima_fit(series, p: int, q: int, maxiter=2000) -> ArimaForecaster:
    model = ArimaForecaster(order=(p, q), maxiter=maxiter)
    return model.fit(series)


def arima_select(series, p_max: int, q_max: int, maxiter=2000):
    """Grid-search ``(p, q)`` by AIC; ties favour fewer, then AR-light, terms."""
    if p_max < 0 or q_max < 0:
        raise ValueError("grid bounds must be non-negative")
    z = np.asarray(series, dtype=float).ravel()
    grid = sorted(itertools.product(range(p_max + 1), range(q_max + 1)),
                  key=lambda pq: (pq[0] + pq[1], pq[0]))
    best, best_aic, failures = None, np.inf, []
    for p, q in grid:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                model = ArimaForecaster((p, q), maxiter=maxiter)._fit_order(
                    z, p, q)
        except ArimaError as exc:
            failures.append(str(exc))
            continue
        if model.aic_ < best_aic:
            best, best_aic = (p, q), model.aic_
    if best is None:
        raise ArimaError("every ARIMA fit failed: " + "; ".join(failures))
    return best


def arima_predict(model: ArimaForecaster, history) -> float:
    """Forecast the value immediately after ``history``."""
    z = np.asarray(history, dtype=float).ravel()
    if z.size < model.min_history:
        raise ArimaError(
            f"history of length {z.size} shorter than {model.min_history}")
    return float(model.predict(np.concatenate([z, [np.nan]]), z.size)[0])
