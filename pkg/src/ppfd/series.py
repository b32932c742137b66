"""Uniformly sampled univariate series, gap handling and CSV ingestion."""
from __future__ import annotations

import csv
import re
from dataclasses import InitVar, dataclass, field
from datetime import datetime, timedelta
from pathlib import Path
from typing import Sequence, Union

import numpy as np

Instant = Union[datetime, int]
Duration = Union[timedelta, int]

__all__ = [
    "TimeSeries",
    "GapReport",
    "SeriesError",
    "from_samples",
    "linear_interpolate",
    "truncate_after",
    "read_csv",
    "write_csv",
    "parse_duration",
    "parse_instant",
]


class SeriesError(ValueError):
    """Raised for malformed, off-grid or otherwise unusable input series."""


@dataclass(frozen=True)
class TimeSeries:
    """Immutable, uniformly sampled series.

    Sample ``t`` sits at ``origin + t * step``. ``origin``/``step`` are either
    ``datetime``/``timedelta`` or plain integers (index mode).
    """

    values: np.ndarray
    origin: Instant = 0
    step: Duration = 1
    allow_gaps: InitVar[bool] = False

    def __post_init__(self, allow_gaps):
        arr = np.array(self.values, dtype=float).ravel()
        if arr.size == 0:
            raise SeriesError("series must contain at least one value")
        bad = ~np.isfinite(arr)
        if allow_gaps:
            bad &= ~np.isnan(arr)
        if bad.any():
            raise SeriesError(
                f"non-finite value at index {int(np.flatnonzero(bad)[0])}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if isinstance(self.step, timedelta):
            if self.step <= timedelta(0):
                raise SeriesError("step must be positive")
        elif self.step <= 0:
            raise SeriesError("step must be positive")

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def timestamp(self, t):
        return self.origin + t * self.step

    def with_values(self, values, start=0):
        """New series on the same grid, beginning at index ``start``."""
        return TimeSeries(values, self.timestamp(start), self.step)

    def slice(self, start, stop):
        return self.with_values(self.values[start:stop], start)


@dataclass(frozen=True)
class GapReport:
    """Missing grid slots as sorted, disjoint ``(start, length)`` runs."""

    gaps: tuple = field(default_factory=tuple)

    def __post_init__(self):
        gaps = tuple((int(s), int(n)) for s, n in self.gaps)
        end = -1
        for s, n in gaps:
            if n < 1 or s <= end:
                raise SeriesError(f"invalid gap run ({s}, {n})")
            end = s + n - 1
        object.__setattr__(self, "gaps", gaps)

    def __len__(self):
        return len(self.gaps)

    def __bool__(self):
        return bool(self.gaps)

    @property
    def missing(self):
        """Total number of missing samples."""
        return sum(n for _, n in self.gaps)

    @classmethod
    def from_mask(cls, mask):
        mask = np.asarray(mask, dtype=bool)
        if not mask.any():
            return cls()
        edges = np.diff(np.concatenate([[0], mask.astype(np.int8), [0]]))
        starts = np.flatnonzero(edges == 1)
        stops = np.flatnonzero(edges == -1)
        return cls(tuple(zip(starts.tolist(), (stops - starts).tolist())))

    def mask(self, n):
        out = np.zeros(n, dtype=bool)
        for s, k in self.gaps:
            out[s:s + k] = True
        return out


def _grid_offset(ts, origin, step):
    delta = ts - origin
    k, rem = divmod(delta, step)
    if rem != type(rem)(0):
        return None
    return int(k)


def from_samples(timestamps: Sequence[Instant], values: Sequence[float],
                 step: Duration) -> tuple[TimeSeries, GapReport]:
    """Place timestamped samples on the uniform grid anchored at the first one.

    Missing grid slots become gaps; their placeholders must be filled with
    :func:`linear_interpolate` before any numeric use.
    """
    if len(timestamps) != len(values):
        raise SeriesError(
            f"{len(timestamps)} timestamps but {len(values)} values")
    if len(timestamps) == 0:
        raise SeriesError("no samples")
    origin = timestamps[0]
    offsets = []
    for prev, ts in zip([None, *timestamps[:-1]], timestamps):
        if prev is not None:
            if ts == prev:
                raise SeriesError(f"duplicate timestamp {ts}")
            if ts < prev:
                raise SeriesError(f"timestamps not increasing at {ts}")
        k = _grid_offset(ts, origin, step)
        if k is None:
            raise SeriesError(f"off-grid timestamp {ts} (step {step})")
        offsets.append(k)
    n = offsets[-1] + 1
    grid = np.full(n, np.nan)
    grid[offsets] = np.asarray(values, dtype=float)
    if not np.isfinite(grid[offsets]).all():
        raise SeriesError("sample values must be finite")
    missing = np.ones(n, dtype=bool)
    missing[offsets] = False
    return (TimeSeries(grid, origin, step, allow_gaps=True),
            GapReport.from_mask(missing))


def linear_interpolate(series: TimeSeries, gaps: GapReport) -> TimeSeries:
    """Fill interior gaps linearly between their known neighbours."""
    n = len(series)
    if not gaps:
        return series
    mask = gaps.mask(n)
    if mask[0] or mask[-1]:
        raise SeriesError("leading or trailing gap cannot be interpolated")
    known = np.flatnonzero(~mask)
    values = np.array(series.values)
    values[mask] = np.interp(np.flatnonzero(mask), known, values[known])
    return TimeSeries(values, series.origin, series.step)


def truncate_after(series: TimeSeries, cutoff: Instant) -> TimeSeries:
    """Keep the prefix of samples whose timestamp is at or before ``cutoff``."""
    if cutoff < series.origin:
        raise SeriesError(
            f"cutoff {cutoff} precedes series origin {series.origin}")
    k = (cutoff - series.origin) // series.step
    return series.slice(0, min(int(k) + 1, len(series)))


_DURATION_RE = re.compile(
    r"^\s*(\d+(?:\.\d+)?)\s*(s|sec|min|m|h|d|w)?\s*$", re.IGNORECASE)
_UNITS = {"s": "seconds", "sec": "seconds", "min": "minutes", "m": "minutes",
          "h": "hours", "d": "days", "w": "weeks"}


def parse_duration(text: str) -> timedelta:
    """Parse ``"1d"``, ``"1h"``, ``"30min"``, ``"3600"`` (seconds)."""
    m = _DURATION_RE.match(text)
    if not m:
        raise SeriesError(f"cannot parse duration {text!r}")
    unit = _UNITS[(m.group(2) or "s").lower()]
    delta = timedelta(**{unit: float(m.group(1))})
    if delta <= timedelta(0):
        raise SeriesError(f"duration must be positive: {text!r}")
    return delta


def parse_instant(text: str) -> Instant:
    text = text.strip()
    if re.fullmatch(r"\d+", text):
        return int(text)
    try:
        return datetime.fromisoformat(text)
    except ValueError as exc:
        raise SeriesError(f"cannot parse timestamp {text!r}") from exc


def read_csv(path, step: Duration | None = None) -> tuple[TimeSeries, GapReport]:
    """Read a ``timestamp,value`` CSV.

    Timestamps are ISO-8601 or non-negative integer indices; the two modes
    cannot be mixed. In ISO mode ``step`` defaults to the smallest spacing
    between consecutive rows. In integer mode the grid unit is one index and
    any ``timedelta`` step is ignored here.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != [
                "timestamp", "value"]:
            raise SeriesError(f"{path}: expected header 'timestamp,value'")
        stamps, values = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) < 2:
                raise SeriesError(f"{path}:{lineno}: expected two columns")
            try:
                stamps.append(parse_instant(row[0]))
                values.append(float(row[1]))
            except (SeriesError, ValueError) as exc:
                raise SeriesError(f"{path}:{lineno}: {exc}") from exc
    if not stamps:
        raise SeriesError(f"{path}: no data rows")
    kinds = {type(s) for s in stamps}
    if len(kinds) > 1:
        raise SeriesError(f"{path}: mixed integer and ISO timestamps")
    if isinstance(stamps[0], int):
        if not isinstance(step, int):
            step = 1
    elif step is None:
        diffs = [b - a for a, b in zip(stamps, stamps[1:])]
        positive = [d for d in diffs if d > timedelta(0)]
        step = min(positive) if positive else timedelta(days=1)
    return from_samples(stamps, values, step)


def write_csv(series: TimeSeries, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["timestamp", "value"])
        for t, v in enumerate(series.values):
            ts = series.timestamp(t)
            stamp = ts.isoformat() if isinstance(ts, datetime) else str(ts)
            text = repr(float(v))
            writer.writerow([stamp, text[:-2] if text.endswith(".0") else text])
