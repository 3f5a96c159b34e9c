import numpy as np
import pytest

from tfridge.core import make_time_series
from tfridge.exceptions import InvalidParameter
from tfridge.spectral import Spectrum, dft_magnitude, local_maxima, parseval_defect, top_peaks
from tfridge.synth import PAPER_A, TOY_GRID, gen_toy_signal


def test_axis_and_one_sided_length():
    ts = make_time_series(0.0, 0.1, np.ones(10))
    spec = dft_magnitude(ts, zero_pad_factor=3)
    assert spec.freqs.size == 30 // 2 + 1
    assert spec.freqs[0] == 0.0
    assert spec.bin_width == pytest.approx(2 * np.pi / (30 * 0.1))
    assert spec.freqs[-1] == pytest.approx(np.pi / 0.1)


def test_matches_naive_dft():
    rng = np.random.default_rng(1)
    ts = make_time_series(0.0, 0.2, rng.normal(size=37))
    spec = dft_magnitude(ts, zero_pad_factor=2)
    n = 74
    m = np.arange(spec.freqs.size)
    j = np.arange(37)
    naive = np.abs(np.exp(-2j * np.pi * np.outer(m, j) / n) @ ts.values) * 0.2
    assert np.allclose(spec.mags, naive, rtol=1e-12, atol=1e-13)


def test_tone_on_exact_bin():
    # 64 full periods of a tone over 1024 samples
    dt = 0.01
    n = 1024
    omega = 2 * np.pi * 64 / (n * dt)
    ts = make_time_series(0.0, dt, np.sin(omega * dt * np.arange(n)))
    spec = dft_magnitude(ts, zero_pad_factor=1)
    assert spec.freqs[np.argmax(spec.mags)] == pytest.approx(omega, rel=1e-12)
    spec4 = dft_magnitude(ts)
    assert spec4.freqs[np.argmax(spec4.mags)] == pytest.approx(omega, rel=1e-12)


def test_parseval(rng):
    ts = make_time_series(0.0, 0.05, rng.normal(size=500))
    assert parseval_defect(ts) < 1e-6
    assert parseval_defect(ts, zero_pad_factor=1) < 1e-6


def test_hann_option():
    ts = make_time_series(0.0, 0.1, np.ones(64))
    windowed = dft_magnitude(ts, window="hann")
    assert windowed.mags[0] < dft_magnitude(ts).mags[0]
    with pytest.raises(InvalidParameter):
        dft_magnitude(ts, window="kaiser")
    with pytest.raises(InvalidParameter):
        dft_magnitude(ts, zero_pad_factor=0)


def test_toy_a_top_peaks():
    spec = dft_magnitude(gen_toy_signal(PAPER_A, TOY_GRID))
    peaks = top_peaks(spec, 3, 5.0)
    found = sorted(f for f, _ in peaks)
    for f, target in zip(found, (20.0, 50.0, 80.0)):
        assert abs(f - target) <= spec.bin_width


def test_flat_zero_spectrum():
    spec = Spectrum(np.arange(10.0), np.zeros(10))
    assert top_peaks(spec, 3) == []


def test_tie_break_lower_frequency():
    freqs = np.arange(0.0, 41.0)
    mags = np.zeros_like(freqs)
    mags[10] = mags[30] = 1.0
    spec = Spectrum(freqs, mags)
    assert top_peaks(spec, 1) == [(10.0, 1.0)]
    assert top_peaks(spec, 5) == [(10.0, 1.0), (30.0, 1.0)]


def test_separation_and_order():
    freqs = np.arange(0.0, 20.0)
    mags = np.array([0, 3, 0, 5, 0, 1, 0, 4, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0], float)
    spec = Spectrum(freqs, mags)
    assert [f for f, _ in top_peaks(spec, 3, 3.0)] == [3.0, 7.0, 14.0]
    with pytest.raises(InvalidParameter):
        top_peaks(spec, 0)


def test_local_maxima_plateau():
    assert list(local_maxima([0, 1, 1, 0, 2, 0])) == [1, 4]
    assert list(local_maxima([1, 0])) == []


def test_spectrum_invariants():
    with pytest.raises(InvalidParameter):
        Spectrum(np.array([0.0, 0.0]), np.array([1.0, 1.0]))
    with pytest.raises(InvalidParameter):
        Spectrum(np.array([0.0, 1.0]), np.array([1.0, -1.0]))
