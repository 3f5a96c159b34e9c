import numpy as np
import pytest
from sklearn.base import clone

from tfridge.core import TimeGrid, make_time_series
from tfridge.exceptions import (
    AtomExceedsGrid,
    BandOutOfRange,
    InvalidParameter,
    ScaleTooSmall,
    TooFewVoices,
)
from tfridge.synth import PAPER_A, TOY_GRID
from tfridge.wavelet import (
    CWT,
    MorletParams,
    ScaleBank,
    cone_of_influence,
    cwt,
    cwt_direct,
    make_scale_bank,
    min_scale,
    morlet,
    morlet_atom,
)

from .conftest import tone

GRID = TimeGrid.from_span(0.0, 40.0, 0.01)


def test_morlet_normalized():
    x = np.linspace(-12, 12, 24001)
    assert np.sum(np.abs(morlet(x)) ** 2) * (x[1] - x[0]) == pytest.approx(1.0, abs=1e-12)


def test_omega0_lower_bound():
    with pytest.raises(InvalidParameter):
        MorletParams(4.9)


@pytest.mark.parametrize("s", [0.1, 0.5, 1.0, 3.0])
def test_atom_norm_independent_of_scale(s):
    atom = morlet_atom(20.0, s, GRID)
    norm = np.sqrt(np.sum(np.abs(atom.values) ** 2) * GRID.dt)
    assert abs(norm - 1.0) < 1e-3


def test_atom_mean_zero():
    atom = morlet_atom(20.0, 1.0, GRID)
    assert abs(np.sum(atom.values) * GRID.dt) < 1e-5


def test_atom_translation_is_sample_shift():
    a0 = morlet_atom(10.0, 0.8, GRID).values
    a1 = morlet_atom(20.0, 0.8, GRID).values
    m = 1000
    assert np.allclose(a1[m:], a0[:-m], rtol=0, atol=1e-12)


def test_atom_errors():
    with pytest.raises(ScaleTooSmall):
        morlet_atom(20.0, 0.5 * min_scale(GRID.dt, 6.0), GRID)
    with pytest.raises(AtomExceedsGrid):
        morlet_atom(1.0, 1.0, GRID, strict=True)
    morlet_atom(1.0, 1.0, GRID)


def test_scale_bank_octaves():
    grid = TimeGrid.from_span(0.0, 100.0, 0.01)
    bank = make_scale_bank(1.0, 8.0, 1, grid)
    assert np.allclose(bank.freqs, [8, 4, 2, 1])
    assert np.allclose(bank.scales, [0.75, 1.5, 3, 6])


def test_scale_bank_errors():
    grid = TimeGrid.from_span(0.0, 100.0, 0.01)
    with pytest.raises(BandOutOfRange):
        make_scale_bank(1.0, 1.01 * np.pi / 0.01, 8, grid)
    with pytest.raises(BandOutOfRange):
        make_scale_bank(5.0, 1.0, 8, grid)
    with pytest.raises(BandOutOfRange):
        make_scale_bank(0.01, 1.0, 8, grid)  # longest atom too long for the record
    with pytest.raises(TooFewVoices):
        make_scale_bank(1.0, 8.0, 0, grid)
    with pytest.raises(InvalidParameter):
        ScaleBank(np.array([2.0, 1.0]))


def test_toy_bank_density():
    bank = make_scale_bank(5.0, 120.0, 16, TOY_GRID)
    f = bank.freqs
    assert f.max() >= 80 and f.min() <= 20
    assert np.count_nonzero((f >= 20) & (f <= 40)) >= 16
    assert np.all(np.diff(bank.scales) > 0)


def test_cone_of_influence():
    grid = TimeGrid.from_span(0.0, 10.0, 1.0)
    scales = np.array([1.0, 2.0, 3.0])
    coi = cone_of_influence(grid, scales)
    edge = np.minimum(grid.times, 10.0 - grid.times)
    for i, d in enumerate(edge):
        trusted = np.flatnonzero(np.sqrt(2) * scales <= d)
        assert coi[i] == (trusted.max() if trusted.size else -1)


def _random_bank(rng, grid):
    f_max = rng.uniform(0.4, 0.9) * np.pi / grid.dt
    return make_scale_bank(f_max / 8, f_max, 4, grid)


def test_fft_matches_direct_quadrature(rng):
    grid = TimeGrid(0.0, 0.05, 300)
    sig = make_time_series(0.0, 0.05, rng.normal(size=300))
    bank = _random_bank(rng, grid)
    fast = cwt(sig, bank, return_coefs=True)
    slow = cwt_direct(sig, bank)
    mask = fast.coi_mask
    err = np.max(np.abs(fast.coefs - slow)[mask]) / np.max(np.abs(slow)[mask])
    assert err < 1e-6
    # the convolution is exact everywhere, not only inside the cone
    assert np.max(np.abs(fast.coefs - slow)) < 1e-10


def test_complex_linearity(rng):
    grid = TimeGrid(0.0, 0.02, 1000)
    f = rng.normal(size=grid.n)
    g = rng.normal(size=grid.n)
    a, b = 1.7, -0.6
    bank = make_scale_bank(5.0, 100.0, 8, grid)

    def coefs(x):
        return cwt(make_time_series(0.0, 0.02, x), bank, return_coefs=True).coefs

    lhs = coefs(a * f + b * g)
    rhs = a * coefs(f) + b * coefs(g)
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_shift_covariance():
    grid = TimeGrid(0.0, 0.01, 4000)
    t = grid.times
    x = np.sin(9 * t) * np.exp(-0.5 * ((t - 15) / 2.0) ** 2)
    m = 300
    bank = make_scale_bank(3.0, 40.0, 8, grid)
    c0 = cwt(make_time_series(0.0, 0.01, x), bank, return_coefs=True).coefs
    c1 = cwt(make_time_series(0.0, 0.01, np.roll(x, m)), bank, return_coefs=True).coefs
    assert np.max(np.abs(c1[:, 500 + m:3500] - c0[:, 500:3500 - m])) < 1e-8


def test_sinusoid_peaks_at_nearest_bin():
    sig = tone(7.3, t_end=80.0)
    bank = make_scale_bank(2.0, 20.0, 16, sig.grid)
    scal = cwt(sig, bank)
    nearest = np.argmin(np.abs(np.log(bank.freqs / 7.3)))
    cols = np.flatnonzero(scal.coi >= nearest)
    arg = np.argmax(scal.mags[:, cols], axis=0)
    assert np.all(np.abs(arg - nearest) <= 1)


def test_zero_signal():
    sig = make_time_series(0.0, 0.01, np.zeros(1000))
    scal = cwt(sig, make_scale_bank(5.0, 50.0, 4, sig.grid))
    assert not scal.mags.any()


def test_determinism_across_workers():
    sig = tone(11.0, t_end=30.0)
    bank = make_scale_bank(3.0, 60.0, 12, sig.grid)
    ref = cwt(sig, bank, return_coefs=True, n_jobs=1)
    for jobs in (2, 4, 7):
        out = cwt(sig, bank, return_coefs=True, n_jobs=jobs)
        assert out.coefs.tobytes() == ref.coefs.tobytes()


def test_threads_env(monkeypatch):
    sig = tone(11.0, t_end=10.0)
    bank = make_scale_bank(3.0, 60.0, 4, sig.grid)
    monkeypatch.setenv("TFRIDGE_THREADS", "3")
    a = cwt(sig, bank).mags
    monkeypatch.setenv("TFRIDGE_THREADS", "1")
    assert a.tobytes() == cwt(sig, bank).mags.tobytes()


def test_toy_blobs():
    from tfridge.synth import gen_toy_signal

    sig = gen_toy_signal(PAPER_A, TOY_GRID)
    scal = CWT(5.0, 120.0, 16).fit(sig).transform(sig)
    for mu, omega in ((20, 20), (80, 50), (170, 80)):
        i = TOY_GRID.index_of(mu)
        k = np.argmax(scal.mags[:, i])
        assert abs(scal.freqs[k] / omega - 1) < 0.05


class TestEstimator:
    def test_params_roundtrip(self):
        est = CWT(f_min=2.0, voices=8)
        assert est.get_params()["voices"] == 8
        twin = clone(est)
        assert twin.get_params() == est.get_params()
        assert twin.set_params(omega0=7.0).omega0 == 7.0

    def test_raw_array_input(self):
        x = np.sin(5 * np.arange(2000) * 0.01)
        est = CWT(f_min=2.0, f_max=20.0, dt=0.01)
        scal = est.fit_transform(x)
        assert scal.mags.shape == (len(est.bank_), 2000)

    def test_default_band(self):
        sig = tone(5.0, t_end=60.0)
        est = CWT().fit(sig)
        assert est.bank_.freqs[0] == pytest.approx(np.pi / (2 * 0.01))
        assert est.bank_.freqs[-1] >= 10 * 6.0 / 60.0

    def test_dt_mismatch(self):
        est = CWT(f_min=2.0, f_max=20.0).fit(tone(5.0, dt=0.01))
        with pytest.raises(InvalidParameter):
            est.transform(tone(5.0, dt=0.02))

    def test_unfitted(self):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            CWT().transform(tone(5.0))
