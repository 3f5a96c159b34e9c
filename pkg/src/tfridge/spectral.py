"""One-sided DFT magnitude on an angular-frequency axis, plus peak picking."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TimeSeries
from .exceptions import InvalidParameter


@dataclass(frozen=True, eq=False)
class Spectrum:
    freqs: np.ndarray
    mags: np.ndarray

    def __post_init__(self):
        freqs = np.array(self.freqs, dtype=float)
        mags = np.array(self.mags, dtype=float)
        if freqs.shape != mags.shape or freqs.ndim != 1:
            raise InvalidParameter("freqs and mags must be 1-d arrays of equal length")
        if np.any(freqs < 0) or np.any(np.diff(freqs) <= 0):
            raise InvalidParameter("freqs must be nonnegative and strictly increasing")
        if np.any(mags < 0):
            raise InvalidParameter("mags must be nonnegative")
        freqs.flags.writeable = False
        mags.flags.writeable = False
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "mags", mags)

    @property
    def bin_width(self) -> float:
        return float(self.freqs[1] - self.freqs[0])


def _padded_fft(signal: TimeSeries, zero_pad_factor: int, window: str | None):
    if int(zero_pad_factor) != zero_pad_factor or zero_pad_factor < 1:
        raise InvalidParameter(f"zero_pad_factor must be an integer >= 1, got {zero_pad_factor!r}")
    x = signal.values
    if window == "hann":
        x = x * np.hanning(x.size)
    elif window is not None:
        raise InvalidParameter(f"unknown window {window!r}; only 'hann' is supported")
    n_fft = int(zero_pad_factor) * x.size
    return np.fft.fft(x, n_fft) * signal.grid.dt, n_fft


def dft_magnitude(signal: TimeSeries, zero_pad_factor: int = 4, window: str | None = None) -> Spectrum:
    """Magnitude of the sampled Fourier integral ``dt * |DFT|`` for ``0 <= omega <= pi/dt``.

    Bins sit at ``omega_m = 2 pi m / (N' dt)`` with ``N' = zero_pad_factor * n``.
    No window is applied unless ``window="hann"``.
    """
    spec, n_fft = _padded_fft(signal, zero_pad_factor, window)
    half = n_fft // 2 + 1
    freqs = 2.0 * np.pi * np.arange(half) / (n_fft * signal.grid.dt)
    return Spectrum(freqs, np.abs(spec[:half]))


def parseval_defect(signal: TimeSeries, zero_pad_factor: int = 4) -> float:
    """Relative mismatch between time-domain and two-sided spectral energy."""
    spec, n_fft = _padded_fft(signal, zero_pad_factor, None)
    dt = signal.grid.dt
    d_omega = 2.0 * np.pi / (n_fft * dt)
    e_time = np.sum(signal.values ** 2) * dt
    e_freq = np.sum(np.abs(spec) ** 2) * d_omega / (2.0 * np.pi)
    if e_time == 0:
        return abs(e_freq)
    return abs(e_freq - e_time) / e_time


def local_maxima(mags: np.ndarray) -> np.ndarray:
    """Indices of interior local maxima (plateaus report their left-most sample)."""
    m = np.asarray(mags)
    if m.size < 3:
        return np.empty(0, dtype=int)
    left = m[1:-1] > m[:-2]
    right = m[1:-1] >= m[2:]
    return np.flatnonzero(left & right) + 1


def top_peaks(spectrum: Spectrum, k: int, min_separation: float = 0.0) -> list[tuple[float, float]]:
    """The ``k`` largest local maxima at least ``min_separation`` apart.

    Peaks are taken greedily in order of decreasing magnitude, ties going to the
    lower frequency. Zero-magnitude maxima are never reported.
    """
    if k < 1:
        raise InvalidParameter(f"k must be >= 1, got {k!r}")
    idx = local_maxima(spectrum.mags)
    idx = idx[spectrum.mags[idx] > 0]
    order = sorted(idx, key=lambda i: (-spectrum.mags[i], spectrum.freqs[i]))
    chosen: list[int] = []
    for i in order:
        if all(abs(spectrum.freqs[i] - spectrum.freqs[j]) >= min_separation for j in chosen):
            chosen.append(i)
            if len(chosen) == k:
                break
    return [(float(spectrum.freqs[i]), float(spectrum.mags[i])) for i in chosen]
