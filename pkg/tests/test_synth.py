import mpmath
import numpy as np
import pytest

from tfridge.core import TimeGrid
from tfridge.exceptions import InvalidParameter
from tfridge.synth import (
    LINESHAPE_GRID,
    PAPER_A,
    PAPER_B,
    TOY_GRID,
    LineshapeParams,
    ToyComponent,
    ToyParams,
    gen_lineshape_signal,
    gen_toy_signal,
    lineshape_instant_freq,
)


def test_toy_wide_envelope_is_plain_sine():
    params = ToyParams((ToyComponent(20.0, 0.0, 1e6),))
    ts = gen_toy_signal(params, TimeGrid.from_span(0.0, 10.0, 0.005))
    assert np.max(np.abs(ts.values - np.sin(20 * ts.grid.times))) < 1e-6


def test_toy_formula():
    params = ToyParams.from_arrays([3.0, 7.0], [1.0, 4.0], [0.5, 2.0])
    grid = TimeGrid.from_span(0.0, 6.0, 0.01)
    t = grid.times
    expected = (np.sin(3 * t) * np.exp(-0.5 * ((t - 1) / 0.5) ** 2)
                + np.sin(7 * t) * np.exp(-0.5 * ((t - 4) / 2.0) ** 2))
    assert np.allclose(gen_toy_signal(params, grid).values, expected, atol=1e-14)


def test_toy_bound():
    for params in (PAPER_A, PAPER_B):
        ts = gen_toy_signal(params, TOY_GRID)
        assert np.all(np.abs(ts.values) <= len(params.components))


def test_toy_validation():
    with pytest.raises(InvalidParameter):
        ToyComponent(20.0, 0.0, 0.0)
    with pytest.raises(InvalidParameter):
        ToyComponent(-1.0, 0.0, 1.0)
    with pytest.raises(InvalidParameter):
        ToyParams(())


def test_reference_toy_parameters():
    assert [c.omega for c in PAPER_A.components] == [20.0, 50.0, 80.0]
    assert [c.mu for c in PAPER_A.components] == [20.0, 80.0, 170.0]
    assert [c.mu for c in PAPER_B.components] == [20.0, 25.0, 170.0]
    assert TOY_GRID.n == 50001


def test_lineshape_undamped_envelope():
    ts = gen_lineshape_signal(LineshapeParams(), LINESHAPE_GRID)
    assert np.all(np.abs(ts.values) <= 1.0)
    late = ts.values[ts.grid.times > 200]
    for chunk in np.array_split(late, 10):
        assert np.max(np.abs(chunk)) >= 0.99


def test_lineshape_no_shift_is_sine():
    p = LineshapeParams(omega_eg=3.0, lambda_=0.0)
    ts = gen_lineshape_signal(p, TimeGrid.from_span(0.0, 50.0, 0.01))
    assert np.array_equal(ts.values, np.sin(3.0 * ts.grid.times))


def test_lineshape_damped_value_high_precision():
    p = LineshapeParams(g_re=0.05)
    grid = TimeGrid.from_span(0.0, 40.0, 0.01)
    ts = gen_lineshape_signal(p, grid)
    mpmath.mp.dps = 40
    ref = mpmath.exp(-1) * mpmath.sin(60 + 40 * (1 - mpmath.exp(-1)))
    assert abs(ts.values[grid.index_of(20.0)] - float(ref)) < 1e-12


def test_lineshape_damped_bound():
    p = LineshapeParams(g_re=0.01)
    ts = gen_lineshape_signal(p, LINESHAPE_GRID)
    assert np.all(np.abs(ts.values) <= np.exp(-0.01 * ts.grid.times) + 1e-15)


def test_instant_freq():
    p = LineshapeParams()
    assert lineshape_instant_freq(p, 0.0) == 5.0
    assert lineshape_instant_freq(p, 20.0) == pytest.approx(3 + 2 * np.exp(-1), abs=1e-12)
    assert lineshape_instant_freq(p, 1e4) == pytest.approx(3.0)
    t = np.linspace(0, 300, 500)
    assert np.all(np.diff(lineshape_instant_freq(p, t)) < 0)
    flat = lineshape_instant_freq(LineshapeParams(lambda_=0.0), t)
    assert np.all(flat == 3.0)
    with pytest.raises(InvalidParameter):
        lineshape_instant_freq(p, -1.0)


def test_instant_freq_matches_phase_derivative():
    p = LineshapeParams()
    grid = TimeGrid.from_span(0.0, 100.0, 0.001)
    t = grid.times
    phase = p.omega_eg * t + p.lambda_ / p.omega_d * (1 - np.exp(-p.omega_d * t))
    deriv = np.gradient(phase, grid.dt)
    assert np.max(np.abs(deriv[1:-1] - lineshape_instant_freq(p, t[1:-1]))) < 1e-6


@pytest.mark.parametrize("kw", [{"omega_d": 0.0}, {"g_re": -0.1}, {"omega_eg": 0.0}, {"lambda_": -1.0}])
def test_lineshape_validation(kw):
    with pytest.raises(InvalidParameter):
        LineshapeParams(**kw)
