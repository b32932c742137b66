"""Local maxima of a series (no height, prominence or distance filters)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

__all__ = ["PeakSet", "find_peaks"]


@dataclass(frozen=True)
class PeakSet:
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.intp).ravel()
        if idx.size and np.any(np.diff(idx) <= 0):
            raise ValueError("peak indices must be strictly increasing")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    def __len__(self):
        return self.indices.size

    def __iter__(self):
        return iter(self.indices.tolist())


def find_peaks(series) -> PeakSet:
    """Strict local maxima; a flat top reports its left-biased midpoint.

    Endpoints are never peaks, and neither is a plateau touching an endpoint.
    """
    x = np.asarray(series, dtype=float).ravel()
    if x.size < 3:
        return PeakSet(np.zeros(0, dtype=np.intp))
    idx, _ = signal.find_peaks(x)
    return PeakSet(idx)
