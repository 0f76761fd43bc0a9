"""NumPy implementations of the hot kernels.

These are the reference versions; ``_ckernels`` mirrors them loop for loop.
"""
import numpy as np


def lag_grid(n):
    """Signed integer lags in FFT order, e.g. ``[0, 1, 2, -2, -1]`` for n=5."""
    return np.rint(np.fft.fftfreq(n) * n).astype(np.int64)


def lag_products(s):
    """Periodic local autocorrelation ``K[b, v, m] = s[b, v + tau_m] * conj(s[b, v])``.

    ``s`` has shape (batch, n); sample indices wrap modulo n.
    """
    s = np.asarray(s, dtype=np.complex128)
    n = s.shape[-1]
    idx = (np.arange(n)[:, None] + lag_grid(n)[None, :]) % n
    return s[:, idx] * np.conj(s)[:, :, None]


def plv_all_pairs(phase):
    """Phase locking value for every channel pair.

    Parameters
    ----------
    phase : ndarray, shape (L, N, M)
        Phase in radians per trial, channel and flattened time-frequency bin.

    Returns
    -------
    ndarray, shape (N, N, M)
        ``|mean_k exp(j |phase_i - phase_j|)|``, symmetric, ones on the diagonal.
    """
    phase = np.ascontiguousarray(phase, dtype=np.float64)
    n_trials, n_chan, m = phase.shape
    c = np.cos(phase)
    s = np.sin(phase)
    out = np.empty((n_chan, n_chan, m))
    for i in range(n_chan):
        out[i, i] = 1.0
        if i + 1 == n_chan:
            break
        re = np.zeros((n_chan - i - 1, m))
        im = np.zeros((n_chan - i - 1, m))
        for k in range(n_trials):
            ci, si, pi = c[k, i], s[k, i], phase[k, i]
            cj, sj, pj = c[k, i + 1:], s[k, i + 1:], phase[k, i + 1:]
            # cos|d| = cos d, sin|d| = sign(d) sin d
            cd = ci * cj + si * sj
            sd = si * cj - ci * sj
            re += cd
            im += np.where(pi - pj < 0.0, -sd, sd)
        val = np.minimum(np.sqrt(re * re + im * im) / n_trials, 1.0)
        out[i, i + 1:] = val
        out[i + 1:, i] = val
    return out
