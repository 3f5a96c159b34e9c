"""CSV/JSON artifact formats. Floats are written with ``repr`` so they round-trip exactly."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from ..core import TimeGrid, TimeSeries
from ..exceptions import ConfigError, NonUniformGrid, TooFewSamples
from ..ridge import RelaxationFit, RidgeTrack
from ..spectral import Spectrum
from ..wavelet import Scalogram, cone_of_influence

UNIFORM_TOL = 1e-6  # allowed time-column deviation, in units of dt


def atomic_write(path: Path, text: str):
    """Write via a temporary sibling file and rename, so readers never see partial output."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(values) -> str:
    return ",".join(map(repr, np.asarray(values, dtype=float).tolist()))


def _two_columns(header: str, a, b) -> str:
    rows = [header]
    rows.extend(f"{x!r},{y!r}" for x, y in zip(np.asarray(a, float).tolist(),
                                               np.asarray(b, float).tolist()))
    return "\n".join(rows) + "\n"


def _read_table(path: Path, header: str) -> np.ndarray:
    path = Path(path)
    with open(path) as fh:
        first = fh.readline().strip()
    if first != header:
        raise ConfigError(f"{path}: expected header {header!r}, found {first!r}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data


def grid_from_times(t: np.ndarray) -> TimeGrid:
    """Recover a uniform grid from a time column, rejecting non-uniform sampling."""
    t = np.asarray(t, dtype=float)
    if t.size < 2:
        raise TooFewSamples(f"need at least 2 samples, got {t.size}")
    dt = (t[-1] - t[0]) / (t.size - 1)
    if not dt > 0:
        raise NonUniformGrid("time column must be strictly increasing")
    dev = np.max(np.abs(t - (t[0] + np.arange(t.size) * dt)))
    if dev > UNIFORM_TOL * dt:
        worst = int(np.argmax(np.abs(t - (t[0] + np.arange(t.size) * dt))))
        raise NonUniformGrid(
            f"time column is not uniformly sampled (row {worst + 1} deviates by {dev:.3g}, dt={dt:.6g})"
        )
    return TimeGrid(float(t[0]), float(dt), t.size)


def write_time_series(path: Path, ts: TimeSeries):
    atomic_write(path, _two_columns("t,value", ts.grid.times, ts.values))


def read_time_series(path: Path) -> TimeSeries:
    data = _read_table(path, "t,value")
    if data.shape[1] != 2:
        raise ConfigError(f"{path}: expected 2 columns, found {data.shape[1]}")
    return TimeSeries(grid_from_times(data[:, 0]), data[:, 1])


def write_spectrum(path: Path, spec: Spectrum):
    atomic_write(path, _two_columns("omega,mag", spec.freqs, spec.mags))


def read_spectrum(path: Path) -> Spectrum:
    data = _read_table(path, "omega,mag")
    return Spectrum(data[:, 0], data[:, 1])


def write_scalogram(path: Path, scal: Scalogram):
    lines = ["t," + _fmt(scal.grid.times)]
    for f, row in zip(scal.freqs.tolist(), scal.mags):
        lines.append(f"{f!r}," + _fmt(row))
    atomic_write(path, "\n".join(lines) + "\n")


def read_scalogram(path: Path, omega0: float = 6.0) -> Scalogram:
    path = Path(path)
    with open(path) as fh:
        head = fh.readline().strip().split(",")
    if head[0] != "t":
        raise ConfigError(f"{path}: first row must start with 't'")
    grid = grid_from_times(np.array(head[1:], dtype=float))
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    freqs = data[:, 0]
    return Scalogram(grid, freqs, data[:, 1:], cone_of_influence(grid, omega0 / freqs), omega0)


def write_ridge(path: Path, track: RidgeTrack):
    rows = ["t,omega,mag"]
    rows.extend(f"{t!r},{f!r},{m!r}" for t, f, m in zip(track.times.tolist(), track.freq.tolist(),
                                                       track.mag.tolist()))
    atomic_write(path, "\n".join(rows) + "\n")


def read_ridge(path: Path, grid: TimeGrid) -> RidgeTrack:
    """Rebuild a track; the peak of each column is its largest-magnitude entry."""
    data = _read_table(path, "t,omega,mag")
    if data.size == 0:
        data = np.empty((0, 3))
    idx = np.rint((data[:, 0] - grid.t0) / grid.dt).astype(int)
    peak_freq = np.full(grid.n, np.nan)
    peak_mag = np.full(grid.n, np.nan)
    for i, f, m in zip(idx, data[:, 1], data[:, 2]):
        if not m <= peak_mag[i]:
            peak_freq[i], peak_mag[i] = f, m
    return RidgeTrack(grid, idx, data[:, 1], data[:, 2], peak_freq, peak_mag)


def fit_to_dict(fit: RelaxationFit) -> dict:
    return {"omega_inf": fit.omega_inf, "amplitude": fit.lambda_est,
            "rate": fit.rate_est, "rms_residual": fit.rms_residual}


def write_json(path: Path, obj: dict):
    atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_fit(path: Path) -> RelaxationFit:
    obj = json.loads(Path(path).read_text())
    return RelaxationFit(obj["omega_inf"], obj["amplitude"], obj["rate"], obj["rms_residual"])
