import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst
from hypothesis.extra.numpy import arrays

import oracles
from netstate.connectivity import (BandSpec, MultiTrialRecording, band_average, band_mask,
                                   build_tensor, decimate_time, plv_from_phases, plv_pair,
                                   subject_graphs)
from netstate.errors import (EmptyBandError, GeometryMismatchError, InvalidInputError,
                             InvalidPairError)
from netstate.timefreq import KernelParams, freq_axis


def recording(rng, L=3, N=4, n=32, fs=32.0):
    return MultiTrialRecording(rng.standard_normal((L, N, n)), fs=fs)


def test_single_trial_plv_is_one(rng):
    p = plv_pair(recording(rng, L=1), 0, 1)
    np.testing.assert_allclose(p, 1.0, atol=1e-15)


def test_identical_channels_plv_is_one(rng):
    data = rng.standard_normal((5, 2, 16))
    data[:, 1] = data[:, 0]
    np.testing.assert_array_equal(plv_pair(MultiTrialRecording(data, fs=16.0), 0, 1), 1.0)


def test_injected_phases_match_direct_sum(rng):
    ph_i = rng.uniform(-np.pi, np.pi, (3, 7, 5))
    ph_j = rng.uniform(-np.pi, np.pi, (3, 7, 5))
    got = plv_from_phases(ph_i, ph_j)
    assert np.abs(got - oracles.plv(list(ph_i), list(ph_j))).max() <= 1e-12


def test_absolute_difference_is_used():
    # differences +a and -a give the same |d|, hence perfect locking
    a = 2.0
    ph_i = np.array([[a], [0.0]])
    ph_j = np.array([[0.0], [a]])
    assert plv_from_phases(ph_i, ph_j)[0] == pytest.approx(1.0, abs=1e-15)


def test_plv_pair_against_oracle(rng):
    rec = recording(rng)
    for i, j in [(0, 1), (2, 3)]:
        got = plv_pair(rec, i, j, KernelParams(0.5))
        ph = [[oracles.phase(oracles.rid_rihaczek(rec.data[k, c], 0.5)) for c in (i, j)]
              for k in range(rec.n_trials)]
        want = oracles.plv([p[0] for p in ph], [p[1] for p in ph])
        assert np.abs(got - want).max() <= 1e-9


def test_plv_pair_symmetric_and_bounded(rng):
    rec = recording(rng, L=4, N=3, n=20, fs=20.0)
    p01 = plv_pair(rec, 0, 1)
    np.testing.assert_array_equal(p01, plv_pair(rec, 1, 0))
    assert p01.min() >= 0 and p01.max() <= 1


def test_plv_pair_errors(rng):
    rec = recording(rng)
    with pytest.raises(InvalidPairError):
        plv_pair(rec, 1, 1)
    with pytest.raises(InvalidInputError):
        plv_pair(rec, 0, 9)


def test_band_average_examples():
    freqs = np.array([0.0, 1.0, 2.0, 3.0, 4.0, 5.0])
    const = np.full((3, 6), 0.5)
    np.testing.assert_allclose(band_average(const, BandSpec(1, 4), freqs), 0.5)
    rows = np.tile([0.0, 0.2, 0.4, 0.6, 0.8, 0.0], (2, 1))
    np.testing.assert_allclose(band_average(rows, BandSpec(1, 4), freqs), 0.5)
    one = band_average(rows, BandSpec(2.5, 3.5), freqs)
    np.testing.assert_array_equal(one, rows[:, 3])


def test_band_edges_inclusive():
    freqs = freq_axis(200, 100.0)
    mask = band_mask(freqs, BandSpec(4, 8))
    assert freqs[mask][0] == 4.0 and freqs[mask][-1] == 8.0
    assert mask.sum() == 9


def test_empty_band_and_bad_band():
    with pytest.raises(EmptyBandError):
        band_mask(np.array([0.0, 10.0, 20.0]), BandSpec(4, 8))
    with pytest.raises(InvalidInputError):
        BandSpec(8, 4)
    with pytest.raises(InvalidInputError):
        BandSpec(4, 80).check(100.0)


def test_recording_validation(rng):
    with pytest.raises(InvalidInputError):
        MultiTrialRecording(rng.standard_normal((2, 1, 8)), fs=8.0)
    with pytest.raises(InvalidInputError):
        MultiTrialRecording(rng.standard_normal((2, 2, 8)), fs=8.0, channel_labels=("a", "a"))
    rec = MultiTrialRecording(rng.standard_normal((2, 2, 4)), fs=1000.0, t0_ms=-2.0)
    np.testing.assert_allclose(rec.time_axis_ms, [-2.0, -1.0, 0.0, 1.0])


def test_smallest_tensor_is_mirrored(rng):
    t = build_tensor([recording(rng, N=2, n=16, fs=16.0)], BandSpec(2, 6))
    assert t.values.shape == (2, 2, 16, 1)
    np.testing.assert_array_equal(t.values[0, 1], t.values[1, 0])
    np.testing.assert_array_equal(t.values[0, 0], 0.0)


def test_identical_subjects_identical_slices(rng):
    rec = recording(rng)
    t = build_tensor([rec, rec], BandSpec(4, 12))
    np.testing.assert_array_equal(t.values[..., 0], t.values[..., 1])


def test_tensor_against_direct_oracle(rng):
    recs = [recording(rng, L=3, N=4, n=32, fs=32.0) for _ in range(2)]
    band, sigma = BandSpec(3, 9), 0.7
    got = build_tensor(recs, band, KernelParams(sigma)).values
    want = oracles.graph_tensor([r.data for r in recs], 32.0, (3, 9), sigma)
    assert np.abs(got - want).max() <= 1e-9


def test_self_loop_option(rng):
    t = build_tensor([recording(rng)], BandSpec(4, 12), self_loops="one")
    np.testing.assert_array_equal(t.values[2, 2], 1.0)
    with pytest.raises(InvalidInputError):
        build_tensor([recording(rng)], BandSpec(4, 12), self_loops="two")


def test_coupled_pair_beats_independent_pair(rng):
    L, n, fs, f0 = 20, 64, 64.0, 8.0
    u = np.arange(n)
    data = np.empty((L, 4, n))
    for k in range(L):
        common = rng.uniform(-np.pi, np.pi)
        data[k, 0] = np.cos(2 * np.pi * f0 * u / fs + common)
        data[k, 1] = np.cos(2 * np.pi * f0 * u / fs + common)
        data[k, 2:] = np.cos(2 * np.pi * f0 * u / fs + rng.uniform(-np.pi, np.pi, (2, 1)))
    data += 0.3 * rng.standard_normal(data.shape)
    rec = MultiTrialRecording(data, fs=fs)
    band, sigma = BandSpec(6, 10), 0.01
    g = subject_graphs(rec, band, KernelParams(sigma))
    assert g[0, 1].mean() > g[2, 3].mean()
    sub = [data[:5, [0, 1, 2, 3]]]
    want = oracles.graph_tensor(sub, fs, (6, 10), sigma)[..., 0]
    got = subject_graphs(MultiTrialRecording(sub[0], fs=fs), band, KernelParams(sigma))
    assert np.abs(got - want).max() <= 1e-9


def test_geometry_mismatch_names_subject(rng):
    a = recording(rng)
    b = MultiTrialRecording(rng.standard_normal((3, 4, 30)), fs=32.0, subject_id="s07")
    with pytest.raises(GeometryMismatchError, match="s07"):
        build_tensor([a, b], BandSpec(4, 8))


def test_threads_do_not_change_tensor(rng):
    recs = [recording(rng, L=4, N=5, n=40, fs=40.0) for _ in range(4)]
    one = build_tensor(recs, BandSpec(4, 10), threads=1).values
    many = build_tensor(recs, BandSpec(4, 10), threads=3).values
    assert one.tobytes() == many.tobytes()


def test_decimation_mean_pools_and_trims():
    v = np.arange(2 * 2 * 7 * 1, dtype=float).reshape(2, 2, 7, 1)
    pooled, t = decimate_time(v, 3, np.arange(7.0))
    assert pooled.shape == (2, 2, 2, 1)
    np.testing.assert_allclose(pooled[..., 0, 0], v[..., :3, 0].mean(axis=-1))
    np.testing.assert_allclose(t, [1.0, 4.0])
    with pytest.raises(InvalidInputError):
        decimate_time(v, 8, np.arange(7.0))


@settings(max_examples=25, deadline=None)
@given(arrays(np.float64, hst.tuples(hst.integers(1, 4), hst.just(3), hst.integers(8, 20)),
              elements=hst.floats(-5, 5, allow_nan=False)))
def test_tensor_invariants(data):
    t = build_tensor([MultiTrialRecording(data, fs=20.0)], BandSpec(0, 10)).values
    assert t.min() >= 0 and t.max() <= 1
    np.testing.assert_array_equal(t, t.transpose(1, 0, 2, 3))
    np.testing.assert_array_equal(t[[0, 1, 2], [0, 1, 2]], 0.0)
