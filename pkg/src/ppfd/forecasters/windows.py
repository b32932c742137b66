from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

__all__ = ["WindowDataset", "make_windows", "lagged_windows"]


@dataclass(frozen=True)
class WindowDataset:
    """Supervised pairs: ``inputs[i] = x[i : i + w]``, ``targets[i] = x[i + w]``."""

    window_size: int
    inputs: np.ndarray
    targets: np.ndarray

    def __len__(self):
        return self.targets.size


def make_windows(series, w: int) -> WindowDataset:
    x = np.asarray(series, dtype=float).ravel()
    if w < 1:
        raise ValueError(f"window size must be >= 1, got {w}")
    if x.size <= w:
        raise ValueError(
            f"series of length {x.size} too short for window {w}")
    inputs = sliding_window_view(x, w)[:-1]
    return WindowDataset(w, np.array(inputs), x[w:].copy())


def lagged_windows(x, w, start, stop):
    """Windows ``x[t - w : t]`` for ``t`` in ``start .. stop - 1``."""
    if start < w:
        raise ValueError(f"need {w} past values; first target index {start}")
    return sliding_window_view(np.asarray(x, dtype=float)[:stop - 1], w)[
        start - w:stop - w]
