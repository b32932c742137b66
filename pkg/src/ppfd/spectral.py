"""Discrete Fourier analysis and seasonal sinusoid extraction.

The transform is delegated to :mod:`numpy.fft` (pocketfft), which is exact for
every length: power-of-two sizes use radix-2/4 passes and other sizes use
mixed-radix or Bluestein kernels, never zero padding.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .series import TimeSeries

__all__ = [
    "Spectrum",
    "Sinusoid",
    "SpectrumError",
    "dft",
    "idft",
    "top_components",
    "sinusoid_series",
    "seasonal_values",
    "remove_components",
    "write_spectrum_csv",
]


class SpectrumError(ValueError):
    pass


@dataclass(frozen=True)
class Spectrum:
    """DFT coefficients of a length-``n`` real series."""

    coeffs: np.ndarray
    step: object = 1
    origin: object = 0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise SpectrumError("empty spectrum")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self):
        return self.coeffs.size

    def amplitudes(self):
        """One-sided amplitudes for bins ``0 .. n // 2``."""
        n = self.n
        half = n // 2
        amp = np.abs(self.coeffs[:half + 1]) / n
        amp[1:half + 1] *= 2.0
        if n % 2 == 0:
            amp[half] /= 2.0
        return amp

    def is_conjugate_symmetric(self, rtol=1e-9):
        c = self.coeffs
        mirrored = np.conj(c[::-1][:-1])
        scale = max(np.abs(c).max(), np.finfo(float).tiny)
        return bool(np.all(np.abs(c[1:] - mirrored) <= rtol * scale))


@dataclass(frozen=True, order=False)
class Sinusoid:
    """A real cosine ``amplitude * cos(2*pi*frequency*t + phase)``.

    ``bin`` is the DFT bin of a length-``n`` transform the component came
    from, so ``frequency == bin / n`` cycles per sample.
    """

    bin: int
    n: int
    amplitude: float
    phase: float = 0.0
    frequency: float = field(init=False)

    def __post_init__(self):
        if not 1 <= self.bin <= self.n // 2:
            raise SpectrumError(
                f"bin {self.bin} outside 1..{self.n // 2} for n={self.n}")
        if self.amplitude < 0:
            raise SpectrumError("amplitude must be non-negative")
        object.__setattr__(self, "frequency", self.bin / self.n)

    @property
    def period(self):
        return self.n / self.bin

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.amplitude * np.cos(2 * np.pi * self.frequency * t
                                       + self.phase)

    def to_dict(self):
        return {"bin": self.bin, "n": self.n, "amplitude": self.amplitude,
                "phase": self.phase}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["bin"]), int(d["n"]), float(d["amplitude"]),
                   float(d["phase"]))


def _values(series):
    if isinstance(series, TimeSeries):
        return series.values, series.step, series.origin
    return np.asarray(series, dtype=float).ravel(), 1, 0


def dft(series) -> Spectrum:
    """Forward transform, ``coeff[k] = sum_t x_t exp(-2 pi i k t / N)``."""
    x, step, origin = _values(series)
    if x.size == 0:
        raise SpectrumError("cannot transform an empty series")
    if not np.isfinite(x).all():
        raise SpectrumError("series contains non-finite values")
    return Spectrum(np.fft.fft(x), step=step, origin=origin)


def idft(spectrum: Spectrum) -> TimeSeries:
    """Inverse transform; the imaginary residue must be numerical noise."""
    z = np.fft.ifft(spectrum.coeffs)
    scale = np.abs(z.real).max()
    residue = np.abs(z.imag).max()
    if residue > 1e-8 * max(scale, 1.0):
        raise SpectrumError(
            f"inverse transform is not real (imaginary residue {residue:.3g});"
            " spectrum lacks conjugate symmetry")
    return TimeSeries(z.real, spectrum.origin, spectrum.step)


def _sinusoid_at(spectrum, k):
    n = spectrum.n
    c = spectrum.coeffs[k]
    if 2 * k == n:
        amp = abs(c) / n
        # Nyquist coefficient is real for real input; phase is 0 or pi.
        phase = np.pi if c.real < 0 else 0.0
    else:
        amp = 2.0 * abs(c) / n
        phase = float(np.angle(c))
        if phase <= -np.pi:
            phase = np.pi
    return Sinusoid(k, n, float(amp), float(phase))


def top_components(spectrum: Spectrum, c: int) -> list[Sinusoid]:
    """The ``c`` largest-amplitude sinusoids, excluding the zero frequency.

    Only bins ``1 .. n // 2`` are ranked; equal amplitudes go to the lower bin.
    """
    half = spectrum.n // 2
    if not 1 <= c <= half:
        raise SpectrumError(f"c must be in 1..{half}, got {c}")
    amp = spectrum.amplitudes()[1:]
    bins = np.arange(1, half + 1)
    order = np.lexsort((bins, -amp))[:c]
    return [_sinusoid_at(spectrum, int(bins[i])) for i in order]


def seasonal_values(sinusoids: Iterable[Sinusoid], t) -> np.ndarray:
    """Sum of the given sinusoids evaluated at integer indices ``t``."""
    t = np.asarray(t, dtype=float)
    total = np.zeros(t.shape)
    for s in sinusoids:
        total += s(t)
    return total


def sinusoid_series(s: Sinusoid, t_start: int, t_end: int) -> TimeSeries:
    """Sample ``s`` at ``t_start .. t_end`` inclusive."""
    if t_end < t_start:
        raise SpectrumError("t_end precedes t_start")
    return TimeSeries(s(np.arange(t_start, t_end + 1)), origin=t_start)


def remove_components(spectrum: Spectrum,
                      sinusoids: Sequence[Sinusoid]) -> Spectrum:
    """Zero each sinusoid's bin and its conjugate partner."""
    n = spectrum.n
    coeffs = np.array(spectrum.coeffs)
    for s in sinusoids:
        k = s.bin if isinstance(s, Sinusoid) else int(s)
        if k == 0:
            raise SpectrumError("the zero-frequency bin cannot be removed")
        if not 1 <= k <= n // 2:
            raise SpectrumError(f"bin {k} outside 1..{n // 2}")
        coeffs[k] = 0.0
        coeffs[(n - k) % n] = 0.0
    return Spectrum(coeffs, spectrum.step, spectrum.origin)


def write_spectrum_csv(spectrum: Spectrum, path) -> None:
    """Dump ``bin,frequency,amplitude,phase`` for bins ``0 .. n // 2``."""
    n = spectrum.n
    amp = spectrum.amplitudes()
    phase = np.angle(spectrum.coeffs[:n // 2 + 1])
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["bin", "frequency", "amplitude", "phase"])
        for k in range(n // 2 + 1):
            w.writerow([k, repr(k / n), repr(float(amp[k])),
                        repr(float(phase[k]))])
