"""Squared-error metrics with an asymmetric (sign-weighted) variant."""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .peaks import PeakSet

__all__ = ["MetricReport", "mse", "wse", "report", "average_reports",
           "minmax_normalize"]


@dataclass(frozen=True)
class MetricReport:
    rmse: float
    rwse: float
    peak_rmse: float
    peak_rwse: float
    under_predicted: int
    over_predicted: int
    n_total: int
    n_peaks: int
    alpha: float

    def to_dict(self):
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, float) and not np.isfinite(v):
                d[k] = None
        return d

    @classmethod
    def from_dict(cls, d):
        kw = {}
        for f in fields(cls):
            v = d[f.name]
            if f.type == "int":
                kw[f.name] = int(v)
            else:
                kw[f.name] = float("nan") if v is None else float(v)
        return cls(**kw)


def _pair(actual, forecast):
    a = np.asarray(actual, dtype=float).ravel()
    f = np.asarray(forecast, dtype=float).ravel()
    if a.size != f.size:
        raise ValueError(f"length mismatch: {a.size} actual vs {f.size} "
                         "forecast")
    if a.size == 0:
        raise ValueError("empty series")
    return a, f


def _check_alpha(alpha):
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")


def mse(actual, forecast) -> float:
    a, f = _pair(actual, forecast)
    return float(np.mean((f - a) ** 2))


def wse(actual, forecast, alpha: float = 0.2) -> float:
    """Mean squared error with over-predictions (``forecast >= actual``)
    weighted by ``alpha`` and under-predictions by one."""
    _check_alpha(alpha)
    a, f = _pair(actual, forecast)
    err = f - a
    weight = np.where(err >= 0, alpha, 1.0)
    return float(np.mean(weight * err ** 2))


def minmax_normalize(actual, forecast):
    """Scale both series by the actual series' own min and max."""
    a, f = _pair(actual, forecast)
    lo, hi = a.min(), a.max()
    span = hi - lo if hi > lo else 1.0
    return (a - lo) / span, (f - lo) / span


def report(actual, forecast, peaks: PeakSet, alpha: float = 0.2,
           normalize: bool = True) -> MetricReport:
    """Whole-series and peak-only errors plus under/over counts at peaks.

    With ``normalize`` the error values are computed after min-max scaling
    both series to the actual series' range; counts are unaffected.
    """
    _check_alpha(alpha)
    a, f = _pair(actual, forecast)
    if normalize:
        a, f = minmax_normalize(a, f)
    idx = np.asarray(peaks.indices if isinstance(peaks, PeakSet) else peaks,
                     dtype=np.intp)
    if idx.size and (idx.min() < 0 or idx.max() >= a.size):
        raise ValueError("peak index outside the series")
    if idx.size:
        pa, pf = a[idx], f[idx]
        peak_rmse = np.sqrt(mse(pa, pf))
        peak_rwse = np.sqrt(wse(pa, pf, alpha))
        under = int(np.count_nonzero(pf < pa))
    else:
        peak_rmse = peak_rwse = float("nan")
        under = 0
    return MetricReport(
        rmse=float(np.sqrt(mse(a, f))),
        rwse=float(np.sqrt(wse(a, f, alpha))),
        peak_rmse=float(peak_rmse),
        peak_rwse=float(peak_rwse),
        under_predicted=under,
        over_predicted=int(idx.size - under),
        n_total=int(a.size),
        n_peaks=int(idx.size),
        alpha=float(alpha),
    )


def average_reports(reports) -> MetricReport:
    """Arithmetic mean of error fields, sums of counts."""
    reports = list(reports)
    if not reports:
        raise ValueError("no reports to average")
    alphas = {r.alpha for r in reports}
    if len(alphas) > 1:
        raise ValueError(f"reports use different alpha values {alphas}")

    def mean(name):
        vals = np.array([getattr(r, name) for r in reports], dtype=float)
        vals = vals[np.isfinite(vals)]
        return float(np.mean(vals)) if vals.size else float("nan")

    def total(name):
        return int(sum(getattr(r, name) for r in reports))

    return MetricReport(
        rmse=mean("rmse"), rwse=mean("rwse"), peak_rmse=mean("peak_rmse"),
        peak_rwse=mean("peak_rwse"),
        under_predicted=total("under_predicted"),
        over_predicted=total("over_predicted"),
        n_total=total("n_total"), n_peaks=total("n_peaks"),
        alpha=reports[0].alpha)
