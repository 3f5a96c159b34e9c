import numpy as np
import pytest

from tfridge.core import TimeGrid, make_time_series


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def tone(omega, t_end=50.0, dt=0.01, t0=0.0):
    grid = TimeGrid.from_span(t0, t_end, dt)
    return make_time_series(t0, dt, np.sin(omega * grid.times))
