"""Morlet scalograms, ridge tracking and relaxation fits for oscillatory signals."""

from .core import TimeGrid, TimeSeries, make_time_series
from .dimer import DimerParams, evolve
from .exceptions import NumericalError, TFRidgeError, ValidationError
from .ridge import RelaxationFitter, RidgeExtractor, dominant_frequencies, fit_relaxation
from .spectral import dft_magnitude
from .synth import LineshapeParams, ToyParams, gen_lineshape_signal, gen_toy_signal
from .wavelet import CWT, MorletParams, cwt, make_scale_bank

__version__ = "0.1.0"

__all__ = [
    "CWT",
    "DimerParams",
    "LineshapeParams",
    "MorletParams",
    "NumericalError",
    "RelaxationFitter",
    "RidgeExtractor",
    "TFRidgeError",
    "TimeGrid",
    "TimeSeries",
    "ToyParams",
    "ValidationError",
    "cwt",
    "dft_magnitude",
    "dominant_frequencies",
    "evolve",
    "fit_relaxation",
    "gen_lineshape_signal",
    "gen_toy_signal",
    "make_scale_bank",
    "make_time_series",
]
