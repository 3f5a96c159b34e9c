"""Uniform time grids and the sampled-signal containers built on them.

Every container is immutable: the value arrays are copied on construction
and flagged read-only, so instances can be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NonFiniteValue, NonPositiveStep, TooFewSamples, DimensionMismatch


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid ``t_i = t0 + i * dt`` for ``i = 0 .. n-1``."""

    t0: float
    dt: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise NonPositiveStep(f"dt must be > 0, got {self.dt!r}")
        if not math.isfinite(self.t0):
            raise NonFiniteValue(f"t0 must be finite, got {self.t0!r}")
        if int(self.n) != self.n or self.n < 2:
            raise TooFewSamples(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def from_span(cls, t0: float, t_end: float, dt: float) -> "TimeGrid":
        """Grid covering ``[t0, t_end]`` with step ``dt`` (end point included)."""
        if not dt > 0:
            raise NonPositiveStep(f"dt must be > 0, got {dt!r}")
        return cls(t0, dt, int(round((t_end - t0) / dt)) + 1)

    def time(self, i):
        return self.t0 + np.asarray(i) * self.dt

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.n) * self.dt

    @property
    def t_end(self) -> float:
        return self.t0 + (self.n - 1) * self.dt

    @property
    def duration(self) -> float:
        return (self.n - 1) * self.dt

    def index_of(self, t: float) -> int:
        """Nearest sample index to time ``t``, clipped to the grid."""
        return int(np.clip(round((t - self.t0) / self.dt), 0, self.n - 1))


def _frozen(values, dtype, grid: TimeGrid, what: str) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.shape[0] != grid.n:
        raise DimensionMismatch(f"{what} has {arr.shape[0]} samples but grid.n = {grid.n}")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise NonFiniteValue(f"{what}[{bad[0]}] is not finite ({arr[bad[0]]!r})")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Real signal sampled on a :class:`TimeGrid`."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, float, self.grid, "values"))

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    def __len__(self):
        return self.grid.n

    def value_at(self, i: int) -> float:
        return float(self.values[i])


@dataclass(frozen=True, eq=False)
class ComplexSeries:
    """Complex signal sampled on a :class:`TimeGrid` (e.g. a wavelet atom)."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, complex, self.grid, "values"))

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    def __len__(self):
        return self.grid.n


def make_time_series(t0: float, dt: float, values) -> TimeSeries:
    """Validate raw samples and wrap them in a :class:`TimeSeries`.

    Raises
    ------
    NonPositiveStep
        If ``dt <= 0``.
    TooFewSamples
        If fewer than two samples are given.
    NonFiniteValue
        If any sample (or ``t0``) is NaN or infinite; the message names the index.
    """
    arr = np.asarray(values, dtype=float)
    if not (math.isfinite(dt) and dt > 0):
        raise NonPositiveStep(f"dt must be > 0, got {dt!r}")
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise TooFewSamples(f"values must hold at least 2 samples, got shape {arr.shape}")
    return TimeSeries(TimeGrid(t0, dt, arr.shape[0]), arr)


def check_time_series(X, dt: float | None = None, t0: float = 0.0) -> TimeSeries:
    """Coerce estimator input to a :class:`TimeSeries`.

    Accepts a ``TimeSeries`` as is, or a 1-d array-like together with ``dt``.
    """
    if isinstance(X, TimeSeries):
        return X
    if dt is None:
        raise TypeError("a raw array input needs an explicit sample step `dt`")
    return make_time_series(t0, dt, X)
