"""Ridge reading on scalograms: dominant frequencies per time and relaxation fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .core import TimeGrid, TimeSeries
from .exceptions import BadThreshold, FitDiverged, FrequencyOutOfBand, WindowTooShort
from .wavelet import Scalogram

NOISE_FLOOR = 1e-3
MIN_FIT_POINTS = 16
_GRID_POINTS = 64
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class RidgeTrack:
    """Per-column ridge entries plus the single columnwise peak.

    Entries are stored flat: entry ``j`` sits at column ``time_idx[j]`` with
    frequency ``freq[j]`` and magnitude ``mag[j]``; entries are sorted by time,
    then by decreasing frequency. ``peak_freq``/``peak_mag`` are NaN for
    columns that carry no entries.
    """

    grid: TimeGrid
    time_idx: np.ndarray
    freq: np.ndarray
    mag: np.ndarray
    peak_freq: np.ndarray
    peak_mag: np.ndarray

    def __post_init__(self):
        for name in ("time_idx", "freq", "mag", "peak_freq", "peak_mag"):
            arr = np.array(getattr(self, name), dtype=int if name == "time_idx" else float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def times(self) -> np.ndarray:
        return self.grid.time(self.time_idx)

    def entries(self, i: int) -> list[tuple[float, float]]:
        lo, hi = np.searchsorted(self.time_idx, [i, i + 1])
        return list(zip(self.freq[lo:hi].tolist(), self.mag[lo:hi].tolist()))

    def __len__(self):
        return self.time_idx.size


def _local_max_mask(mags: np.ndarray) -> np.ndarray:
    """Local maxima along axis 0; endpoints need only beat their single neighbour."""
    rising = np.ones(mags.shape, dtype=bool)
    rising[1:] = mags[1:] > mags[:-1]
    falling = np.ones(mags.shape, dtype=bool)
    falling[:-1] = mags[:-1] >= mags[1:]
    return rising & falling


def dominant_frequencies(scal: Scalogram, threshold: float = 0.2,
                         respect_coi: bool = True) -> RidgeTrack:
    """Local maxima within ``threshold`` of each column's global maximum.

    A local maximum is kept when ``mag >= (1 - threshold) * column_max``. With
    ``respect_coi`` on, only bins inside the cone of influence are reported and
    a column whose global maximum falls outside the cone is left empty. Columns
    whose maximum is below ``1e-3`` of the scalogram maximum are left empty.
    """
    if not (0 < threshold <= 1) or not math.isfinite(threshold):
        raise BadThreshold(f"threshold must lie in (0, 1], got {threshold!r}")
    mags = scal.mags
    n_freq, n_time = mags.shape
    arg = np.argmax(mags, axis=0)
    col_max = mags[arg, np.arange(n_time)]
    trusted = scal.coi_mask if respect_coi else np.ones(mags.shape, dtype=bool)

    ref = mags[trusted].max() if trusted.any() else 0.0
    valid = (col_max > 0) & (col_max >= NOISE_FLOOR * ref)
    if respect_coi:
        valid &= arg <= scal.coi

    keep = _local_max_mask(mags) & trusted & valid[None, :]
    keep &= mags >= (1.0 - threshold) * col_max[None, :]
    k_idx, t_idx = np.nonzero(keep.T)[::-1]
    # nonzero on the transpose yields time-major order with increasing k,
    # i.e. decreasing frequency within a column.
    peak_freq = np.where(valid, scal.freqs[arg], np.nan)
    peak_mag = np.where(valid, col_max, np.nan)
    return RidgeTrack(scal.grid, t_idx, scal.freqs[k_idx], mags[k_idx, t_idx],
                      peak_freq, peak_mag)


def nearest_bin(freqs: np.ndarray, omega: float) -> int:
    lo, hi = freqs.min(), freqs.max()
    if not (lo * (1 - 1e-9) <= omega <= hi * (1 + 1e-9)):
        raise FrequencyOutOfBand(f"omega={omega!r} lies outside the band [{lo!r}, {hi!r}]")
    return int(np.argmin(np.abs(np.log(freqs / omega))))


def band_amplitude(scal: Scalogram, omega_center: float) -> TimeSeries:
    """Scalogram row at the bin nearest ``omega_center`` (log distance)."""
    return TimeSeries(scal.grid, scal.mags[nearest_bin(scal.freqs, omega_center)])


@dataclass(frozen=True)
class RelaxationFit:
    """``omega(t) = omega_inf + lambda_est * exp(-rate_est * t)``."""

    omega_inf: float
    lambda_est: float
    rate_est: float
    rms_residual: float

    def predict(self, t):
        return self.omega_inf + self.lambda_est * np.exp(-self.rate_est * np.asarray(t))


def _linear_part(tau: np.ndarray, y: np.ndarray, rate: float):
    basis = np.column_stack([np.ones_like(tau), np.exp(-rate * tau)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    resid = y - basis @ coef
    return coef, float(resid @ resid)


def fit_exponential(t, y, t_start: float | None = None, t_end: float | None = None,
                    tol: float = 1e-12) -> RelaxationFit:
    """Least-squares fit of ``y ~ c + A exp(-r t)``.

    ``r`` is located on a 64-point log grid over ``[1/T, 1000/T]`` (``T`` the
    window length), with ``(c, A)`` solved linearly at every trial rate, then
    refined by golden-section search between the best point's neighbours.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    t_start = t.min() if t_start is None else t_start
    t_end = t.max() if t_end is None else t_end
    sel = (t >= t_start) & (t <= t_end) & np.isfinite(y)
    t, y = t[sel], y[sel]
    if t.size < MIN_FIT_POINTS:
        raise WindowTooShort(f"need >= {MIN_FIT_POINTS} points in [{t_start}, {t_end}], got {t.size}")
    span = t_end - t_start
    if not span > 0:
        raise WindowTooShort("t_end must exceed t_start")
    tau = t - t_start
    rates = np.logspace(math.log10(1.0 / span), math.log10(1000.0 / span), _GRID_POINTS)
    costs = np.array([_linear_part(tau, y, r)[1] for r in rates])
    best = int(np.argmin(costs))
    a = rates[max(best - 1, 0)]
    b = rates[min(best + 1, rates.size - 1)]

    def cost(r):
        return _linear_part(tau, y, r)[1]

    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = cost(c), cost(d)
    while b - a > tol * b:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = cost(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = cost(d)
    rate = 0.5 * (a + b)
    if costs[best] < cost(rate):
        rate = rates[best]
    (omega_inf, amp), ssr = _linear_part(tau, y, rate)
    # the fit was anchored at t_start; report the amplitude at t = 0
    try:
        lam = amp * math.exp(rate * t_start) if amp != 0 else 0.0
    except OverflowError:
        raise FitDiverged(f"amplitude at t=0 overflows for rate={rate!r}") from None
    fit = RelaxationFit(float(omega_inf), float(lam), float(rate), math.sqrt(ssr / t.size))
    if not all(map(math.isfinite, (fit.omega_inf, fit.lambda_est, fit.rate_est, fit.rms_residual))):
        raise FitDiverged(f"relaxation fit produced non-finite parameters: {fit}")
    return fit


def fit_relaxation(track: RidgeTrack, t_start: float, t_end: float) -> RelaxationFit:
    """Fit the peak track on ``[t_start, t_end]`` to an exponential approach."""
    return fit_exponential(track.grid.times, track.peak_freq, t_start, t_end)


class RidgeExtractor(TransformerMixin, BaseEstimator):
    """Stateless transformer mapping a :class:`Scalogram` to a :class:`RidgeTrack`."""

    def __init__(self, threshold=0.2, respect_coi=True):
        self.threshold = threshold
        self.respect_coi = respect_coi

    def fit(self, X=None, y=None):
        if not (0 < self.threshold <= 1):
            raise BadThreshold(f"threshold must lie in (0, 1], got {self.threshold!r}")
        self.is_fitted_ = True
        return self

    def transform(self, X: Scalogram) -> RidgeTrack:
        return dominant_frequencies(X, self.threshold, self.respect_coi)

    def __sklearn_is_fitted__(self):
        return True


class RelaxationFitter(RegressorMixin, BaseEstimator):
    """Regressor for ``omega(t) = omega_inf + A exp(-r t)`` with ``X`` the times.

    Attributes
    ----------
    omega_inf_, amplitude_, rate_, rms_residual_ : float
    """

    def __init__(self, t_start=None, t_end=None):
        self.t_start = t_start
        self.t_end = t_end

    def fit(self, X, y):
        X, y = check_X_y(np.asarray(X, dtype=float).reshape(len(y), -1), y, ensure_min_samples=2)
        fit = fit_exponential(X[:, 0], y, self.t_start, self.t_end)
        self.omega_inf_ = fit.omega_inf
        self.amplitude_ = fit.lambda_est
        self.rate_ = fit.rate_est
        self.rms_residual_ = fit.rms_residual
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "rate_")
        X = check_array(np.asarray(X, dtype=float).reshape(-1, 1))
        return self.omega_inf_ + self.amplitude_ * np.exp(-self.rate_ * X[:, 0])
