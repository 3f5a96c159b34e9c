"""Signal acquisition and the spectrum / scalogram / ridge / fit analysis chain."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import TimeSeries
from ..dimer import CoherenceTrace, evolve
from ..exceptions import ConfigError, WindowTooShort
from ..ridge import RelaxationFit, RidgeTrack, dominant_frequencies, fit_relaxation
from ..spectral import Spectrum, dft_magnitude
from ..synth import gen_lineshape_signal, gen_toy_signal
from ..wavelet import CWT, Scalogram
from .config import CwtParams, RunConfig
from .formats import read_time_series


@dataclass
class Analysis:
    signal: TimeSeries
    spectrum: Spectrum
    scalogram: Scalogram
    ridge: RidgeTrack
    fit: RelaxationFit | None = None
    fit_window: tuple[float, float] | None = None


def simulate(config: RunConfig) -> CoherenceTrace:
    if config.source != "dimer":
        raise ConfigError("sim-dimer needs a dimer source in the configuration")
    return evolve(config.dimer)


def acquire_signal(config: RunConfig) -> tuple[TimeSeries, dict]:
    """Build the configured signal; the dict carries source diagnostics."""
    if config.source == "toy":
        return gen_toy_signal(config.toy, config.grid), {}
    if config.source == "lineshape":
        return gen_lineshape_signal(config.lineshape, config.grid), {}
    if config.source == "dimer":
        trace = simulate(config)
        return TimeSeries(trace.grid, trace.values), dict(trace.diagnostics)
    try:
        return read_time_series(config.input_csv), {}
    except FileNotFoundError:
        raise ConfigError(f"input_csv not found: {config.input_csv}") from None


def scalogram_of(signal: TimeSeries, params: CwtParams, return_coefs: bool = False) -> Scalogram:
    est = CWT(f_min=params.f_min, f_max=params.f_max, voices=params.voices,
              omega0=params.omega0, return_coefs=return_coefs)
    return est.fit(signal).transform(signal)


def default_fit_window(track: RidgeTrack) -> tuple[float, float]:
    """First to last time with a defined peak track."""
    defined = np.flatnonzero(np.isfinite(track.peak_freq))
    if defined.size == 0:
        raise WindowTooShort("peak track is empty; nothing to fit")
    return float(track.grid.time(defined[0])), float(track.grid.time(defined[-1]))


def analyze(signal: TimeSeries, config: RunConfig, do_fit: bool = False) -> Analysis:
    spectrum = dft_magnitude(signal)
    scal = scalogram_of(signal, config.cwt)
    track = dominant_frequencies(scal, config.ridge.threshold, config.ridge.respect_coi)
    result = Analysis(signal, spectrum, scal, track)
    if do_fit:
        t0, t1 = default_fit_window(track)
        window = (config.fit.t_start if config.fit.t_start is not None else t0,
                  config.fit.t_end if config.fit.t_end is not None else t1)
        result.fit = fit_relaxation(track, *window)
        result.fit_window = window
    return result
