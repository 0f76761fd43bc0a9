"""Reduced-interference Rihaczek time-frequency distribution and its phase.

Discretisation
--------------
For an n-sample trial the ambiguity plane is an n x n grid.  Lag-frequency
``theta_p = 2*pi*p/n`` and lag ``tau_m`` (integer samples) both use signed FFT
ordering.  Samples are treated as one period of a periodic sequence, so the
local product ``s(u + tau/2) s*(u - tau/2)`` is evaluated on the half-shifted
grid ``u = v + tau/2`` with ``v`` running over all n samples.  With the kernel
set to one this reduces exactly to the DFT form of the Rihaczek distribution,
``s(t) conj(S[q]) exp(-2j*pi*q*t/n)``.

The distribution is ``C[t, q] = (1/n) sum_{p,m} Phi(p, m) A(p, m)
exp(-j(theta_p t + tau_m omega_q))`` with ``omega_q = 2*pi*q/n``.  Only bins
with ``0 <= f_q <= fs/2`` are returned.
"""
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InvalidInputError

DEFAULT_SIGMA_CW = 0.01


@dataclass(frozen=True)
class Signal:
    samples: np.ndarray
    fs: float = 1.0
    t0_ms: float = 0.0

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.ndim != 1 or samples.size < 2:
            raise InvalidInputError("signal needs at least 2 samples")
        if not self.fs > 0:
            raise InvalidInputError(f"sampling rate must be positive, got {self.fs}")
        object.__setattr__(self, "samples", samples)


@dataclass(frozen=True)
class KernelParams:
    sigma_cw: float = DEFAULT_SIGMA_CW

    def __post_init__(self):
        if not self.sigma_cw > 0:
            raise InvalidInputError(f"sigma_cw must be positive, got {self.sigma_cw}")


@dataclass(frozen=True)
class Tfd:
    values: np.ndarray
    fs: float
    freq_axis_hz: np.ndarray = field(repr=False)

    @property
    def n_time(self):
        return self.values.shape[0]

    @property
    def n_freq(self):
        return self.values.shape[1]


def _as_samples(signal):
    if isinstance(signal, Signal):
        return signal.samples
    samples = np.asarray(signal)
    if samples.ndim != 1 or samples.size < 2:
        raise InvalidInputError("signal needs at least 2 samples")
    return samples


def lag_frequencies(n):
    """Signed lag-frequency axis ``theta_p`` in radians per sample."""
    return 2.0 * np.pi * np.fft.fftfreq(n)


def freq_axis(n, fs):
    """Centre frequencies (Hz) of the retained non-negative bins."""
    return np.arange(n // 2 + 1) * (fs / n)


def ambiguity(signal):
    """Discrete ambiguity function ``A[p, m]`` (rows: lag-frequency, cols: lag)."""
    s = _as_samples(signal)
    n = s.size
    prod = kernels.lag_products(s[None, :])[0]
    theta = lag_frequencies(n)
    tau = kernels.lag_grid(n)
    shift = np.exp(0.5j * np.outer(theta, tau))
    return n * np.fft.ifft(prod, axis=0) * shift


def kernel_weights(n, sigma_cw):
    """Choi-Williams kernel times the Rihaczek kernel on the n x n grid.

    The Rihaczek factor is squared here because it also absorbs the
    half-lag phase carried by :func:`ambiguity`.
    """
    theta = lag_frequencies(n)
    tt = np.outer(theta, kernels.lag_grid(n).astype(float))
    return np.exp(-(tt * tt) / sigma_cw) * np.exp(1j * tt)


def tfd_batch(samples, sigma_cw=DEFAULT_SIGMA_CW, weights=None):
    """Distributions for a batch of equal-length signals.

    ``samples`` has shape (batch, n); returns complex (batch, n, n//2 + 1).
    """
    samples = np.atleast_2d(samples)
    n = samples.shape[-1]
    if n < 2:
        raise InvalidInputError("signal needs at least 2 samples")
    if weights is None:
        weights = kernel_weights(n, sigma_cw)
    # n * ifft gives the unnormalised ambiguity sum; the 1/n in C cancels it
    amb = np.fft.ifft(kernels.lag_products(samples), axis=1)
    amb *= weights
    full = np.fft.fft2(amb, axes=(1, 2))
    return full[:, :, : n // 2 + 1]


def rid_rihaczek(signal, kernel=KernelParams()):
    """RID-Rihaczek distribution of one signal."""
    if isinstance(signal, Signal):
        fs = signal.fs
    else:
        fs = 1.0
    s = _as_samples(signal)
    values = tfd_batch(s[None, :], kernel.sigma_cw)[0]
    return Tfd(values=values, fs=fs, freq_axis_hz=freq_axis(s.size, fs))


def phase(tfd):
    """Entrywise argument in (-pi, pi]; exactly-zero entries map to 0."""
    values = tfd.values if isinstance(tfd, Tfd) else np.asarray(tfd)
    out = np.angle(values)
    out[out == -np.pi] = np.pi
    out[values == 0] = 0.0
    return out
