import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst
from hypothesis.extra.numpy import arrays

import oracles
from netstate.errors import InvalidInputError
from netstate.timefreq import (KernelParams, Signal, Tfd, ambiguity, freq_axis, phase,
                               rid_rihaczek)

finite = hst.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_zero_signal_ambiguity_is_zero():
    a = ambiguity(np.zeros(8))
    assert a.shape == (8, 8)
    assert not np.any(a)


def test_impulse_ambiguity():
    s = np.zeros(4)
    s[0] = 1.0
    a = ambiguity(s)
    np.testing.assert_allclose(a[:, 0], 1.0, atol=1e-15)
    assert np.abs(a[:, 1:]).max() <= 1e-15


def test_complex_exponential_against_double_loop():
    n, fs, f0 = 64, 64.0, 5.0
    u = np.arange(n)
    s = np.exp(2j * np.pi * f0 * u / fs)
    a = ambiguity(s)
    assert np.abs(a - oracles.ambiguity(s)).max() <= 1e-12
    # a stationary tone has all its ambiguity on the theta = 0 row
    assert np.abs(a[0]).min() > 0.99 * n
    assert np.abs(a[1:]).max() <= 1e-9


@pytest.mark.parametrize("n", [5, 8, 13, 16])
def test_ambiguity_matches_oracle(rng, n):
    s = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    assert np.abs(ambiguity(s) - oracles.ambiguity(s)).max() <= 1e-12


@pytest.mark.parametrize("n", [7, 8, 15, 16])
def test_ambiguity_conjugate_symmetry(rng, n):
    s = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    a = ambiguity(s)
    idx = np.arange(n)
    if n % 2 == 0:
        # the Nyquist row/column has no signed mirror on an even grid
        idx = idx[idx != n // 2]
    neg = (-idx) % n
    assert np.abs(a[np.ix_(neg, neg)] - np.conj(a[np.ix_(idx, idx)])).max() <= 1e-10


def test_short_signal_rejected():
    with pytest.raises(InvalidInputError):
        ambiguity(np.zeros(1))
    with pytest.raises(InvalidInputError):
        Signal(np.zeros(1), fs=10)
    with pytest.raises(InvalidInputError):
        Signal(np.zeros(4), fs=0)
    with pytest.raises(InvalidInputError):
        KernelParams(0.0)


def test_zero_signal_tfd_is_zero():
    tfd = rid_rihaczek(Signal(np.zeros(16), fs=100.0))
    assert isinstance(tfd, Tfd)
    assert tfd.values.shape == (16, 9)
    assert not np.any(tfd.values)


@pytest.mark.parametrize("n", [8, 11, 32])
def test_infinite_spread_is_plain_rihaczek(rng, n):
    s = rng.standard_normal(n)
    c = rid_rihaczek(s, KernelParams(math.inf)).values
    assert np.abs(c - oracles.rihaczek(s)).max() <= 1e-10


@pytest.mark.parametrize("n,sigma", [(8, 0.01), (12, 1.0), (16, 0.5), (31, 0.01), (32, 10.0)])
def test_tfd_matches_quadruple_sum_oracle(rng, n, sigma):
    s = rng.standard_normal(n)
    c = rid_rihaczek(s, KernelParams(sigma)).values
    assert np.abs(c - oracles.rid_rihaczek(s, sigma)).max() <= 1e-9


@pytest.mark.parametrize("tone", ["cos", "exp"])
def test_pure_tone_energy_peaks_at_tone_bin(tone):
    n, fs = 64, 64.0
    f0 = fs / 8
    u = np.arange(n)
    s = np.cos(2 * np.pi * f0 * u / fs) if tone == "cos" else np.exp(2j * np.pi * f0 * u / fs)
    tfd = rid_rihaczek(Signal(s, fs=fs), KernelParams(0.01))
    target = int(np.argmin(np.abs(tfd.freq_axis_hz - f0)))
    peaks = np.argmax(np.abs(tfd.values), axis=1)
    assert np.all(peaks[1:-1] == target)


@pytest.mark.parametrize("c", [0.0, 1.0, 2.0])
def test_quadratic_scaling(rng, c):
    s = rng.standard_normal(24)
    base = np.abs(rid_rihaczek(s).values)
    scaled = np.abs(rid_rihaczek(c * s).values)
    np.testing.assert_allclose(scaled, c * c * base, rtol=1e-10, atol=1e-12 * base.max())


def test_freq_axis_within_nyquist():
    for n, fs in [(8, 100.0), (9, 100.0), (200, 100.0)]:
        f = freq_axis(n, fs)
        assert f[0] == 0 and f[-1] <= fs / 2
        assert np.all(np.diff(f) > 0)


def test_phase_conventions():
    vals = np.array([[1 + 0j, 1j, 0j, -1 + 0j, complex(-1, -0.0)]])
    np.testing.assert_array_equal(phase(vals), [[0.0, np.pi / 2, 0.0, np.pi, np.pi]])


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, hst.integers(2, 24), elements=finite))
def test_phase_range(s):
    ph = phase(rid_rihaczek(s))
    assert np.all(ph > -np.pi) and np.all(ph <= np.pi)
