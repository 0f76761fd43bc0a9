"""Phase locking values and the node x node x time x subject graph tensor."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (EmptyBandError, GeometryMismatchError, InvalidInputError,
                     InvalidPairError)
from .timefreq import KernelParams, freq_axis, kernel_weights, phase, tfd_batch


@dataclass(frozen=True)
class MultiTrialRecording:
    """Real signals indexed (trial, channel, sample)."""

    data: np.ndarray
    fs: float
    t0_ms: float = 0.0
    channel_labels: tuple = None
    subject_id: str = ""

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 3:
            raise InvalidInputError(f"recording must be 3-D (trial, channel, sample), got {data.ndim}-D")
        n_trials, n_chan, n = data.shape
        if n_trials < 1 or n_chan < 2 or n < 2:
            raise InvalidInputError(f"recording shape {data.shape} too small")
        if not self.fs > 0:
            raise InvalidInputError(f"sampling rate must be positive, got {self.fs}")
        labels = self.channel_labels
        if labels is None:
            labels = tuple(f"ch{i + 1}" for i in range(n_chan))
        labels = tuple(str(x) for x in labels)
        if len(labels) != n_chan:
            raise InvalidInputError(f"{len(labels)} channel labels for {n_chan} channels")
        if len(set(labels)) != n_chan:
            raise InvalidInputError("channel labels must be unique")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "channel_labels", labels)

    @property
    def n_trials(self):
        return self.data.shape[0]

    @property
    def n_channels(self):
        return self.data.shape[1]

    @property
    def n_samples(self):
        return self.data.shape[2]

    @property
    def time_axis_ms(self):
        return self.t0_ms + 1000.0 * np.arange(self.n_samples) / self.fs


@dataclass(frozen=True)
class BandSpec:
    omega_a_hz: float = 4.0
    omega_b_hz: float = 8.0

    def __post_init__(self):
        if not 0 <= self.omega_a_hz < self.omega_b_hz:
            raise InvalidInputError(
                f"band needs 0 <= low < high, got [{self.omega_a_hz}, {self.omega_b_hz}]")

    def check(self, fs):
        if self.omega_b_hz > fs / 2:
            raise InvalidInputError(
                f"band upper edge {self.omega_b_hz} Hz exceeds Nyquist {fs / 2} Hz")


@dataclass
class ConnectivityTensor:
    """Band-averaged PLV graphs, ``values[i, j, t, s]``."""

    values: np.ndarray
    node_labels: tuple
    time_axis_ms: np.ndarray
    subject_ids: tuple
    config: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.values.shape


def band_mask(freqs, band):
    """Boolean mask of bins whose centre lies in the closed band."""
    freqs = np.asarray(freqs)
    mask = (freqs >= band.omega_a_hz) & (freqs <= band.omega_b_hz)
    if not mask.any():
        raise EmptyBandError(
            f"no frequency bin inside [{band.omega_a_hz}, {band.omega_b_hz}] Hz")
    return mask


def trial_phases(rec, kernel=KernelParams(), channels=None, freq_bins=None):
    """Time-frequency phase for every trial, shape (L, len(channels), T, F)."""
    if channels is None:
        channels = np.arange(rec.n_channels)
    n = rec.n_samples
    weights = kernel_weights(n, kernel.sigma_cw)
    out = []
    for k in range(rec.n_trials):
        tfd = tfd_batch(rec.data[k, channels], weights=weights)
        if freq_bins is not None:
            tfd = tfd[:, :, freq_bins]
        out.append(phase(tfd))
    return np.stack(out)


def plv_from_phases(phase_i, phase_j):
    """PLV of two channels from per-trial phase arrays of shape (L, ...)."""
    phase_i = np.asarray(phase_i, dtype=np.float64)
    phase_j = np.asarray(phase_j, dtype=np.float64)
    if phase_i.shape != phase_j.shape:
        raise InvalidInputError("phase arrays differ in shape")
    shape = phase_i.shape[1:]
    stacked = np.stack([phase_i.reshape(len(phase_i), -1),
                        phase_j.reshape(len(phase_j), -1)], axis=1)
    return kernels.plv_all_pairs(stacked)[0, 1].reshape(shape)


def plv_pair(rec, i, j, kernel=KernelParams()):
    """PLV between channels i and j over the full (time, frequency) grid."""
    for c in (i, j):
        if not 0 <= c < rec.n_channels:
            raise InvalidInputError(f"channel {c} out of range 0..{rec.n_channels - 1}")
    if i == j:
        raise InvalidPairError(f"PLV needs two distinct channels, got {i} twice")
    ph = trial_phases(rec, kernel, channels=[i, j])
    return plv_from_phases(ph[:, 0], ph[:, 1])


def band_average(plv, band, freqs):
    """Mean of PLV rows over the in-band frequency columns."""
    mask = band_mask(freqs, band)
    return np.asarray(plv)[..., mask].mean(axis=-1)


def subject_graphs(rec, band, kernel=KernelParams(), self_loops="zero"):
    """Band-averaged PLV graphs of one subject, shape (N, N, T)."""
    band.check(rec.fs)
    mask = band_mask(freq_axis(rec.n_samples, rec.fs), band)
    ph = trial_phases(rec, kernel, freq_bins=mask)
    n_trials, n_chan, n_time, n_band = ph.shape
    plv = kernels.plv_all_pairs(ph.reshape(n_trials, n_chan, n_time * n_band))
    g = plv.reshape(n_chan, n_chan, n_time, n_band).mean(axis=-1)
    diag = 0.0 if self_loops == "zero" else 1.0
    idx = np.arange(n_chan)
    g[idx, idx, :] = diag
    return g


def decimate_time(values, factor, time_axis_ms):
    """Mean-pool the time mode (axis 2) in blocks of ``factor`` bins.

    Trailing bins that do not fill a block are dropped.
    """
    factor = int(factor)
    if factor < 1:
        raise InvalidInputError(f"decimation factor must be >= 1, got {factor}")
    if factor == 1:
        return values, np.asarray(time_axis_ms)
    n_keep = values.shape[2] // factor
    if n_keep == 0:
        raise InvalidInputError("decimation factor exceeds the number of time bins")
    trimmed = values[:, :, : n_keep * factor]
    shape = trimmed.shape[:2] + (n_keep, factor) + trimmed.shape[3:]
    pooled = trimmed.reshape(shape).mean(axis=3)
    times = np.asarray(time_axis_ms)[: n_keep * factor].reshape(n_keep, factor).mean(axis=1)
    return pooled, times


def build_tensor(recs, band, kernel=KernelParams(), self_loops="zero",
                 decimate=None, threads=1):
    """Stack per-subject graphs into a :class:`ConnectivityTensor`."""
    recs = list(recs)
    if not recs:
        raise InvalidInputError("no recordings given")
    if self_loops not in ("zero", "one"):
        raise InvalidInputError(f"self_loops must be 'zero' or 'one', got {self_loops!r}")
    ref = recs[0]
    for s, rec in enumerate(recs[1:], start=1):
        if (rec.n_channels, rec.n_samples, rec.fs, rec.t0_ms) != (
                ref.n_channels, ref.n_samples, ref.fs, ref.t0_ms):
            raise GeometryMismatchError(
                f"subject {rec.subject_id or s} has geometry "
                f"(N={rec.n_channels}, n={rec.n_samples}, fs={rec.fs}, t0={rec.t0_ms}); "
                f"expected (N={ref.n_channels}, n={ref.n_samples}, fs={ref.fs}, t0={ref.t0_ms})")

    def work(rec):
        return subject_graphs(rec, band, kernel, self_loops)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            graphs = list(pool.map(work, recs))
    else:
        graphs = [work(rec) for rec in recs]
    values = np.stack(graphs, axis=-1)
    times = ref.time_axis_ms
    if decimate:
        values, times = decimate_time(values, decimate, times)
    subject_ids = tuple(rec.subject_id or f"s{s + 1}" for s, rec in enumerate(recs))
    return ConnectivityTensor(values=values, node_labels=ref.channel_labels,
                              time_axis_ms=np.asarray(times, dtype=float),
                              subject_ids=subject_ids)
