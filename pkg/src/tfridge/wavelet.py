"""Continuous wavelet transform with the analytic Morlet wavelet.

Frequencies are angular throughout; a scale ``s`` maps to ``omega0 / s``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .core import ComplexSeries, TimeGrid, TimeSeries, check_time_series
from .exceptions import (
    AtomExceedsGrid,
    BandOutOfRange,
    DimensionMismatch,
    InvalidParameter,
    ScaleTooSmall,
    TooFewVoices,
)

# Gaussian envelope below exp(-72) ~ 5e-32 is dropped from the sampled kernel.
_KERNEL_HALF_WIDTH = 12.0
# Half-width (in scales) of the support used for strict atom containment.
_ATOM_SUPPORT = 5.0
COI_FACTOR = math.sqrt(2.0)


@dataclass(frozen=True)
class MorletParams:
    omega0: float = 6.0

    def __post_init__(self):
        if not self.omega0 >= 5.0:
            raise InvalidParameter(f"omega0 must be >= 5 (admissibility), got {self.omega0!r}")


def morlet(x, omega0: float = 6.0):
    """Mother wavelet ``pi^(-1/4) exp(i omega0 x) exp(-x^2/2)``."""
    x = np.asarray(x, dtype=float)
    return np.pi ** -0.25 * np.exp(1j * omega0 * x - 0.5 * x * x)


def min_scale(dt: float, omega0: float) -> float:
    """Smallest scale whose oscillation is sampled at least twice per period."""
    return omega0 * dt / np.pi


def _check_scale(s: float, dt: float, omega0: float):
    if not s >= min_scale(dt, omega0) * (1 - 1e-12):
        raise ScaleTooSmall(
            f"scale {s!r} is below {min_scale(dt, omega0)!r}, the Nyquist limit for dt={dt!r}"
        )


@dataclass(frozen=True, eq=False)
class ScaleBank:
    """Strictly increasing scales with their peak angular frequencies ``omega0 / s``."""

    scales: np.ndarray
    omega0: float = 6.0

    def __post_init__(self):
        scales = np.array(self.scales, dtype=float)
        if scales.ndim != 1 or scales.size < 1:
            raise InvalidParameter("scales must be a nonempty 1-d array")
        if np.any(~np.isfinite(scales)) or np.any(scales <= 0):
            raise InvalidParameter("scales must be finite and positive")
        if np.any(np.diff(scales) <= 0):
            raise InvalidParameter("scales must be strictly increasing")
        scales.flags.writeable = False
        object.__setattr__(self, "scales", scales)

    @property
    def freqs(self) -> np.ndarray:
        return self.omega0 / self.scales

    def __len__(self):
        return self.scales.size

    def check_grid(self, grid: TimeGrid):
        """Raise if any scale is unresolvable or too long for ``grid``."""
        _check_scale(self.scales[0], grid.dt, self.omega0)
        if 2 * _ATOM_SUPPORT * self.scales[-1] > 4 * grid.duration:
            raise BandOutOfRange(
                f"largest scale {self.scales[-1]!r} gives an atom longer than 4x the signal"
            )


def make_scale_bank(f_min: float, f_max: float, n_voices: int, grid: TimeGrid,
                    params: MorletParams = MorletParams()) -> ScaleBank:
    """Log-spaced bank from ``f_max`` down to ``f_min`` with ``n_voices`` per octave.

    ``f_min`` itself is included only when it falls on the log grid.
    """
    if int(n_voices) != n_voices or n_voices < 1:
        raise TooFewVoices(f"n_voices must be a positive integer, got {n_voices!r}")
    n_voices = int(n_voices)
    nyquist = np.pi / grid.dt
    if not (0 < f_min < f_max) or f_max > nyquist * (1 + 1e-12):
        raise BandOutOfRange(
            f"need 0 < f_min < f_max <= pi/dt = {nyquist!r}; got f_min={f_min!r}, f_max={f_max!r}"
        )
    count = int(math.floor(n_voices * math.log2(f_max / f_min) + 1e-9)) + 1
    freqs = f_max * 2.0 ** (-np.arange(count) / n_voices)
    bank = ScaleBank(params.omega0 / freqs, params.omega0)
    bank.check_grid(grid)
    return bank


def morlet_atom(u: float, s: float, grid: TimeGrid, params: MorletParams = MorletParams(),
                strict: bool = False) -> ComplexSeries:
    """Samples of the translated, dilated atom ``s^(-1/2) psi((t - u)/s)`` on ``grid``."""
    _check_scale(s, grid.dt, params.omega0)
    if strict and (u - _ATOM_SUPPORT * s < grid.t0 or u + _ATOM_SUPPORT * s > grid.t_end):
        raise AtomExceedsGrid(f"atom at u={u!r}, s={s!r} is not contained in the grid")
    x = (grid.times - u) / s
    return ComplexSeries(grid, morlet(x, params.omega0) / math.sqrt(s))


def cone_of_influence(grid: TimeGrid, scales: np.ndarray) -> np.ndarray:
    """Per-time index of the largest trustworthy scale (``-1`` when none is).

    A scale is trusted at ``t`` when ``sqrt(2) * s`` fits between ``t`` and the
    nearer edge of the grid.
    """
    t = grid.times
    edge = np.minimum(t - grid.t0, grid.t_end - t)
    return np.searchsorted(COI_FACTOR * np.asarray(scales), edge, side="right") - 1


@dataclass(frozen=True, eq=False)
class Scalogram:
    """``|CWT|`` on (frequency, time), rows ordered by increasing scale.

    ``coefs`` holds the complex coefficients when they were requested.
    """

    grid: TimeGrid
    freqs: np.ndarray
    mags: np.ndarray
    coi: np.ndarray
    omega0: float = 6.0
    coefs: np.ndarray | None = None

    def __post_init__(self):
        freqs = np.array(self.freqs, dtype=float)
        mags = np.array(self.mags, dtype=float)
        coi = np.array(self.coi, dtype=int)
        if mags.shape != (freqs.size, self.grid.n):
            raise DimensionMismatch(
                f"mags shape {mags.shape} != ({freqs.size}, {self.grid.n})"
            )
        if coi.shape != (self.grid.n,):
            raise DimensionMismatch(f"coi must have length {self.grid.n}")
        if np.any(mags < 0) or not np.all(np.isfinite(mags)):
            raise InvalidParameter("mags must be finite and nonnegative")
        for arr in (freqs, mags, coi):
            arr.flags.writeable = False
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "mags", mags)
        object.__setattr__(self, "coi", coi)

    @property
    def scales(self) -> np.ndarray:
        return self.omega0 / self.freqs

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def coi_mask(self) -> np.ndarray:
        """Boolean ``[n_freqs, n_times]`` mask of trustworthy bins."""
        return np.arange(self.freqs.size)[:, None] <= self.coi[None, :]


def _n_workers(n_jobs: int | None) -> int:
    if n_jobs is None:
        env = os.environ.get("TFRIDGE_THREADS")
        n_jobs = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(n_jobs))


def _kernel_fft(s: float, dt: float, n: int, n_fft: int, omega0: float) -> np.ndarray:
    # h[m] = dt * conj(psi_s(-m dt)), laid out circularly so that
    # ifft(F * fft(h))[i] = sum_j f[j] conj(psi_s(t_j - t_i)) dt.
    half = min(n - 1, int(math.ceil(_KERNEL_HALF_WIDTH * s / dt)))
    m = np.arange(-half, half + 1)
    x = m * dt / s
    vals = dt / math.sqrt(s) * np.pi ** -0.25 * np.exp(1j * omega0 * x - 0.5 * x * x)
    h = np.zeros(n_fft, dtype=complex)
    h[m % n_fft] = vals
    return np.fft.fft(h)


def cwt(signal: TimeSeries, bank: ScaleBank, params: MorletParams | None = None, *,
        return_coefs: bool = False, n_jobs: int | None = None) -> Scalogram:
    """Continuous wavelet transform evaluated at every grid time and bank scale.

    Each scale is a linear convolution done by FFT on a zero-padded buffer of
    the next power of two ``>= 2n``; the result equals the Riemann sum of the
    defining integral at every sample, edges included. Rows are computed
    independently so the output does not depend on ``n_jobs``.
    """
    omega0 = bank.omega0 if params is None else params.omega0
    if params is not None and params.omega0 != bank.omega0:
        raise InvalidParameter("bank and params disagree on omega0")
    grid = signal.grid
    bank.check_grid(grid)
    n = grid.n
    n_fft = 1 << int(math.ceil(math.log2(2 * n)))
    f_hat = np.fft.fft(signal.values, n_fft)
    out = np.empty((len(bank), n), dtype=complex)

    def row(k):
        out[k] = np.fft.ifft(f_hat * _kernel_fft(bank.scales[k], grid.dt, n, n_fft, omega0))[:n]

    workers = min(_n_workers(n_jobs), len(bank))
    if workers == 1:
        for k in range(len(bank)):
            row(k)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(row, range(len(bank))))
    return Scalogram(
        grid=grid,
        freqs=bank.freqs,
        mags=np.abs(out),
        coi=cone_of_influence(grid, bank.scales),
        omega0=omega0,
        coefs=out if return_coefs else None,
    )


def cwt_direct(signal: TimeSeries, bank: ScaleBank) -> np.ndarray:
    """Complex CWT by explicit quadrature against each sampled atom. O(K n^2)."""
    grid = signal.grid
    params = MorletParams(bank.omega0)
    out = np.empty((len(bank), grid.n), dtype=complex)
    for k, s in enumerate(bank.scales):
        for i, u in enumerate(grid.times):
            atom = morlet_atom(u, s, grid, params).values
            out[k, i] = np.sum(signal.values * np.conj(atom)) * grid.dt
    return out


class CWT(TransformerMixin, BaseEstimator):
    """Scikit-learn style wrapper: ``fit`` builds the scale bank, ``transform`` returns a Scalogram.

    Parameters
    ----------
    f_min, f_max : float, optional
        Angular frequency band. Defaults: ``f_max = pi / (2 dt)`` and
        ``f_min`` such that the longest atom spans a tenth of the signal.
    voices : int
        Scales per octave.
    omega0 : float
        Morlet center frequency.
    dt : float, optional
        Sample step, required only when raw arrays are passed.
    return_coefs : bool
        Keep complex coefficients on the returned scalogram.
    n_jobs : int, optional
        Worker threads (defaults to ``TFRIDGE_THREADS`` or the CPU count).
    """

    def __init__(self, f_min=None, f_max=None, voices=16, omega0=6.0, dt=None,
                 return_coefs=False, n_jobs=None):
        self.f_min = f_min
        self.f_max = f_max
        self.voices = voices
        self.omega0 = omega0
        self.dt = dt
        self.return_coefs = return_coefs
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        ts = check_time_series(X, self.dt)
        params = MorletParams(self.omega0)
        f_max = np.pi / (2 * ts.grid.dt) if self.f_max is None else self.f_max
        f_min = 10 * self.omega0 / ts.grid.duration if self.f_min is None else self.f_min
        self.bank_ = make_scale_bank(f_min, f_max, self.voices, ts.grid, params)
        self.dt_ = ts.grid.dt
        return self

    def transform(self, X) -> Scalogram:
        check_is_fitted(self, "bank_")
        ts = check_time_series(X, self.dt)
        if not math.isclose(ts.grid.dt, self.dt_, rel_tol=1e-12):
            raise InvalidParameter(f"fitted for dt={self.dt_!r}, got dt={ts.grid.dt!r}")
        return cwt(ts, self.bank_, MorletParams(self.omega0),
                   return_coefs=self.return_coefs, n_jobs=self.n_jobs)
