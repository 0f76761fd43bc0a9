"""Direct, slow reference implementations used as test oracles.

Nothing here calls into ``netstate``; every quantity is written out from
its defining sum so the package code is checked against an independent
evaluation.
"""
import cmath
import math

import numpy as np


def signed_lag(m, n):
    """Lag in samples for FFT-ordered index m (``n//2`` maps to ``-n//2`` when n is even)."""
    return m if m < n - n // 2 else m - n


def ambiguity(s):
    """A[p, m] = sum_v s[v + tau] conj(s[v]) exp(j theta_p (v + tau/2)), indices mod n."""
    s = [complex(v) for v in s]
    n = len(s)
    out = np.zeros((n, n), dtype=complex)
    for p in range(n):
        theta = 2 * math.pi * signed_lag(p, n) / n
        for m in range(n):
            tau = signed_lag(m, n)
            acc = 0j
            for v in range(n):
                acc += s[(v + tau) % n] * s[v].conjugate() * cmath.exp(1j * theta * (v + tau / 2))
            out[p, m] = acc
    return out


def rid_rihaczek(s, sigma_cw):
    """C[t, q] = (1/n) sum_{p,m} Phi(p, m) A(p, m) exp(-j(theta_p t + tau_m omega_q)).

    Phi = exp(-(theta tau)^2 / sigma) exp(j theta tau / 2).  Only q = 0..n//2
    is returned.  The outer sums are evaluated as explicit matrix products
    over the exponential bases, not through an FFT.
    """
    n = len(s)
    a = ambiguity(s)
    lag = np.array([signed_lag(m, n) for m in range(n)], dtype=float)
    theta = 2 * np.pi * lag / n
    tt = np.outer(theta, lag)
    if math.isinf(sigma_cw):
        cw = np.ones_like(tt)
    else:
        cw = np.exp(-(tt ** 2) / sigma_cw)
    phi = cw * np.exp(0.5j * tt)
    t = np.arange(n)
    q = np.arange(n // 2 + 1)
    omega = 2 * np.pi * q / n
    e_t = np.exp(-1j * np.outer(t, theta))         # (t, p)
    e_q = np.exp(-1j * np.outer(lag, omega))       # (m, q)
    return e_t @ (phi * a) @ e_q / n


def rihaczek(s):
    """Plain discrete Rihaczek distribution s(t) conj(S[q]) exp(-j 2 pi q t / n)."""
    s = np.asarray(s, dtype=complex)
    n = s.size
    spec = np.array([sum(s[u] * cmath.exp(-2j * math.pi * q * u / n) for u in range(n))
                     for q in range(n)])
    t = np.arange(n)
    q = np.arange(n // 2 + 1)
    return s[:, None] * np.conj(spec[q])[None, :] * np.exp(-2j * np.pi * np.outer(t, q) / n)


def phase(c):
    out = np.angle(c)
    out[out == -np.pi] = np.pi
    out[c == 0] = 0.0
    return out


def plv(phases_i, phases_j):
    """|(1/L) sum_k exp(j |phi_i^k - phi_j^k|)| for lists of per-trial phase arrays."""
    acc = np.zeros(np.shape(phases_i[0]), dtype=complex)
    for pi, pj in zip(phases_i, phases_j):
        acc += np.exp(1j * np.abs(np.asarray(pi) - np.asarray(pj)))
    return np.abs(acc / len(phases_i))


def graph_tensor(recordings, fs, band, sigma_cw, self_loop=0.0):
    """Band-averaged PLV tensor (N, N, T, S) straight from the definitions.

    ``recordings`` is a list of (L, N, n) arrays.
    """
    n_subj = len(recordings)
    n_trials, n_chan, n = recordings[0].shape
    freqs = np.arange(n // 2 + 1) * fs / n
    inband = [q for q, f in enumerate(freqs) if band[0] <= f <= band[1]]
    out = np.zeros((n_chan, n_chan, n, n_subj))
    for s, data in enumerate(recordings):
        ph = [[phase(rid_rihaczek(data[k, i], sigma_cw)) for i in range(n_chan)]
              for k in range(n_trials)]
        for i in range(n_chan):
            out[i, i, :, s] = self_loop
            for j in range(i + 1, n_chan):
                p = plv([ph[k][i] for k in range(n_trials)], [ph[k][j] for k in range(n_trials)])
                g = sum(p[:, q] for q in inband) / len(inband)
                out[i, j, :, s] = g
                out[j, i, :, s] = g
    return out


def unfold(x, mode):
    """Kolda-Bader unfolding by explicit index arithmetic (earliest mode fastest)."""
    shape = x.shape
    others = [k for k in range(x.ndim) if k != mode]
    cols = int(np.prod([shape[k] for k in others]))
    out = np.zeros((shape[mode], cols))
    for idx in np.ndindex(*shape):
        col, stride = 0, 1
        for k in others:
            col += idx[k] * stride
            stride *= shape[k]
        out[idx[mode], col] = x[idx]
    return out


def mode_singular_values(x):
    return [np.linalg.svd(unfold(x, k), compute_uv=False) for k in range(x.ndim)]


def cosine_matrix(slices):
    """Pairwise cosine similarity by explicit double loop."""
    t = len(slices)
    out = np.zeros((t, t))
    for a in range(t):
        for b in range(t):
            xa = np.ravel(slices[a])
            xb = np.ravel(slices[b])
            out[a, b] = sum(xa * xb) / (math.sqrt(sum(xa * xa)) * math.sqrt(sum(xb * xb)))
    return out
