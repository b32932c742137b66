"""Noise-free synthetic traffic: linear trend plus weekly/monthly/yearly sines."""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta

import numpy as np

from .series import TimeSeries

__all__ = ["SynthSpec", "generate", "summary"]


@dataclass(frozen=True)
class SynthSpec:
    n: int = 7500
    slope: float = 100_000.0
    intercept: float = 1_000_000_000.0
    components: tuple = field(default=((7.0, 80_000_000.0),
                                       (30.0, 72_000_000.0),
                                       (365.0, 56_000_000.0)))

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        comps = tuple((float(p), float(a)) for p, a in self.components)
        for period, amp in comps:
            if period <= 1:
                raise ValueError(f"period must exceed 1, got {period}")
            if amp < 0:
                raise ValueError(f"amplitude must be >= 0, got {amp}")
        object.__setattr__(self, "components", comps)


def generate(spec: SynthSpec = SynthSpec(), seed=None, origin=None,
             step=None) -> TimeSeries:
    """``slope * t + intercept + sum_j A_j sin(2 pi t / P_j)``, ``t = 0 .. n-1``.

    ``seed`` is accepted for interface stability; the series is deterministic.
    """
    t = np.arange(spec.n, dtype=float)
    values = spec.slope * t + spec.intercept
    for period, amp in spec.components:
        values = values + amp * np.sin(2 * np.pi * t / period)
    if origin is None:
        origin = datetime(2000, 1, 1)
    if step is None:
        step = timedelta(days=1)
    return TimeSeries(values, origin, step)


def summary(series) -> dict:
    x = np.asarray(series, dtype=float)
    return {"n": int(x.size), "mean": float(x.mean()), "min": float(x.min()),
            "median": float(np.median(x)), "max": float(x.max())}
