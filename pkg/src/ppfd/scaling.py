"""Min-max to [1, 2], local (relative-change) normalization, max-abs scaling.

A deseasonalized series ``x'`` is mapped as

    s_t = (x'_t - min) / (max - min) + 1
    l_t = (s_t - s_{t-1}) / s_{t-1}
    y_t = l_t / max|l|

with all constants taken from the training data. The first sample is
consumed by the relative change, so ``y`` is one shorter than ``x'``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .series import TimeSeries

__all__ = [
    "ScalingError",
    "ScalingState",
    "LocalNormScaler",
    "fit_forward",
    "apply_forward",
    "invert_step",
]


class ScalingError(ValueError):
    pass


# spans below this fraction of the magnitude are round-off, not signal
_ZERO_RANGE_RTOL = 1e-12


@dataclass
class ScalingState:
    x_min: float
    x_max: float
    l_max_abs: float
    s_prev: float
    # apply_forward calls whose value fell outside [x_min, x_max]
    n_out_of_range: int = 0

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ScalingError("zero range: x_max must exceed x_min")
        if not self.l_max_abs > 0:
            raise ScalingError("l_max_abs must be positive")

    @property
    def span(self):
        return self.x_max - self.x_min

    def scale(self, x):
        return (np.asarray(x, dtype=float) - self.x_min) / self.span + 1.0

    def unscale(self, s):
        return (np.asarray(s, dtype=float) - 1.0) * self.span + self.x_min

    def copy(self):
        return replace(self)

    def to_dict(self):
        return {"x_min": self.x_min, "x_max": self.x_max,
                "l_max_abs": self.l_max_abs, "s_prev": self.s_prev}

    @classmethod
    def from_dict(cls, d):
        return cls(float(d["x_min"]), float(d["x_max"]),
                   float(d["l_max_abs"]), float(d["s_prev"]))


def _relative_change(s):
    prev = s[:-1]
    if np.any(prev <= 0):
        raise ScalingError(
            "scaled value <= 0; input lies more than one training range "
            "below the training minimum")
    return (s[1:] - prev) / prev


def fit_forward(series) -> tuple[TimeSeries, ScalingState]:
    """Fit the constants on ``series`` and return its normalized form."""
    x = np.asarray(series, dtype=float).ravel()
    if x.size < 2:
        raise ScalingError("need at least two values")
    x_min, x_max = float(x.min()), float(x.max())
    if not x_max - x_min > _ZERO_RANGE_RTOL * max(abs(x_min), abs(x_max)):
        raise ScalingError("zero range: series is constant")
    s = (x - x_min) / (x_max - x_min) + 1.0
    l = _relative_change(s)
    l_max_abs = float(np.abs(l).max())
    state = ScalingState(x_min, x_max, l_max_abs, float(s[-1]))
    y = l / l_max_abs
    if isinstance(series, TimeSeries):
        return series.with_values(y, start=1), state
    return TimeSeries(y, origin=1), state


def apply_forward(value: float, state: ScalingState) -> float:
    """Normalize one new observation with frozen constants; advances ``s_prev``."""
    s = float(state.scale(value))
    if not state.x_min <= value <= state.x_max:
        state.n_out_of_range += 1
    if state.s_prev <= 0:
        raise ScalingError("s_prev <= 0")
    y = (s - state.s_prev) / state.s_prev / state.l_max_abs
    state.s_prev = s
    return y


def invert_step(y_next: float, state: ScalingState) -> float:
    """Map a forecast ``y`` back to ``x'`` given ``state.s_prev``. Pure."""
    if state.s_prev <= 0:
        raise ScalingError(f"cannot invert from s_prev={state.s_prev}")
    s_next = state.s_prev * (1.0 + y_next * state.l_max_abs)
    return float(state.unscale(s_next))


def forward_array(x, state: ScalingState) -> np.ndarray:
    """Vectorized :func:`apply_forward` over a contiguous run; no mutation."""
    return _relative_change(state.scale(x)) / state.l_max_abs


def invert_array(y, x_prev, state: ScalingState) -> np.ndarray:
    """Vectorized :func:`invert_step`, ``x_prev`` being the preceding ``x'``."""
    s_prev = state.scale(x_prev)
    if np.any(s_prev <= 0):
        raise ScalingError("s_prev <= 0")
    return state.unscale(s_prev * (1.0 + np.asarray(y) * state.l_max_abs))


class LocalNormScaler(TransformerMixin, BaseEstimator):
    """Transformer wrapper around the three-stage normalization.

    ``transform`` maps ``n`` values to ``n - 1``. ``inverse_transform`` needs
    the preceding raw value of every output position.
    """

    def fit(self, X, y=None):
        _, self.state_ = fit_forward(np.asarray(X, dtype=float).ravel())
        return self

    def transform(self, X):
        check_is_fitted(self, "state_")
        return forward_array(np.asarray(X, dtype=float).ravel(), self.state_)

    def inverse_transform(self, Y, previous):
        check_is_fitted(self, "state_")
        return invert_array(np.asarray(Y, dtype=float).ravel(),
                            np.asarray(previous, dtype=float).ravel(),
                            self.state_)
