"""Closed-form test signals: Gaussian-windowed tones and the Stokes-shift lineshape."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import TimeGrid, TimeSeries
from .exceptions import InvalidParameter


@dataclass(frozen=True)
class ToyComponent:
    omega: float
    mu: float
    sigma: float

    def __post_init__(self):
        if not self.omega > 0:
            raise InvalidParameter(f"omega must be > 0, got {self.omega!r}")
        if not self.sigma > 0:
            raise InvalidParameter(f"sigma must be > 0, got {self.sigma!r}")


@dataclass(frozen=True)
class ToyParams:
    components: tuple[ToyComponent, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise InvalidParameter("toy signal needs at least one component")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_arrays(cls, omegas: Sequence[float], mus: Sequence[float], sigmas) -> "ToyParams":
        sigmas = np.broadcast_to(np.asarray(sigmas, dtype=float), (len(omegas),))
        return cls(tuple(ToyComponent(float(w), float(m), float(s))
                         for w, m, s in zip(omegas, mus, sigmas)))


@dataclass(frozen=True)
class LineshapeParams:
    """Parameters of ``exp(-g_re t) sin(omega_eg t + lambda_/omega_d (1 - exp(-omega_d t)))``.

    ``lambda_`` is the reorganization energy (Stokes shift). It appears as
    ``"lambda"`` (or its alias ``"S"``) in configuration files.
    """

    omega_eg: float = 3.0
    lambda_: float = 2.0
    omega_d: float = 0.05
    g_re: float = 0.0

    def __post_init__(self):
        if not self.omega_eg > 0:
            raise InvalidParameter(f"omega_eg must be > 0, got {self.omega_eg!r}")
        if not self.lambda_ >= 0:
            raise InvalidParameter(f"lambda must be >= 0, got {self.lambda_!r}")
        if not self.omega_d > 0:
            raise InvalidParameter(f"omega_d must be > 0, got {self.omega_d!r}")
        if not self.g_re >= 0:
            raise InvalidParameter(f"g_re must be >= 0, got {self.g_re!r}")


PAPER_A = ToyParams.from_arrays((20.0, 50.0, 80.0), (20.0, 80.0, 170.0), 4.0)
PAPER_B = ToyParams.from_arrays((20.0, 50.0, 80.0), (20.0, 25.0, 170.0), 4.0)
TOY_GRID = TimeGrid.from_span(0.0, 250.0, 0.005)
LINESHAPE_GRID = TimeGrid.from_span(0.0, 400.0, 0.01)


def gen_toy_signal(params: ToyParams, grid: TimeGrid = TOY_GRID) -> TimeSeries:
    """Sum of Gaussian-windowed sines, ``sum_i sin(w_i t) exp(-((t - mu_i)/sigma_i)^2 / 2)``."""
    t = grid.times
    out = np.zeros_like(t)
    for c in params.components:
        out += np.sin(c.omega * t) * np.exp(-0.5 * ((t - c.mu) / c.sigma) ** 2)
    return TimeSeries(grid, out)


def gen_lineshape_signal(params: LineshapeParams, grid: TimeGrid = LINESHAPE_GRID) -> TimeSeries:
    """Real part of the linear response of a chromophore in an overdamped bath.

    The damping enters as ``exp(-g_re * t)`` so that ``g_re >= 0`` decays.
    """
    t = grid.times
    shift = params.lambda_ / params.omega_d * -np.expm1(-params.omega_d * t)
    values = np.exp(-params.g_re * t) * np.sin(params.omega_eg * t + shift)
    return TimeSeries(grid, values)


def lineshape_instant_freq(params: LineshapeParams, t):
    """Analytic instantaneous angular frequency ``omega_eg + lambda * exp(-omega_d t)``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise InvalidParameter("instantaneous frequency is defined for t >= 0 only")
    out = params.omega_eg + params.lambda_ * np.exp(-params.omega_d * t)
    return float(out) if out.ndim == 0 else out
