"""Dense multiway arrays: unfoldings, mode products, HOSVD and truncation.

Tensors are plain ndarrays and modes are 0-based axes.  The mode-k unfolding
follows Kolda and Bader: row index ``i_k``, remaining indices laid out with
the earliest mode varying fastest.  On disk the same first-index-fastest
(Fortran) order is used, so ``unfold`` and the container share one layout.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (DegenerateCoreError, InvalidInputError, InvalidModeError,
                     InvalidRankError, ZeroNormError)


@dataclass
class TuckerModel:
    core: np.ndarray
    factors: list
    singular_values: list
    residual_fro: float = 0.0

    @property
    def ranks(self):
        return tuple(u.shape[1] for u in self.factors)


@dataclass(frozen=True)
class RankSelection:
    n_bar: int
    s_bar: int
    epsilon_rel: float

    def ranks(self, n_time):
        """Per-mode ranks for a node x node x time x subject tensor."""
        return (self.n_bar, self.n_bar, n_time, self.s_bar)


def _check_mode(x, mode):
    if not 0 <= mode < x.ndim:
        raise InvalidModeError(f"mode {mode} out of range for a {x.ndim}-mode tensor")


def unfold(x, mode):
    """Mode-``mode`` matricisation, shape ``(m_k, prod of the other sizes)``."""
    x = np.asarray(x)
    _check_mode(x, mode)
    return np.reshape(np.moveaxis(x, mode, 0), (x.shape[mode], -1), order="F")


def fold(mat, mode, shape):
    """Inverse of :func:`unfold`."""
    shape = tuple(shape)
    if not 0 <= mode < len(shape):
        raise InvalidModeError(f"mode {mode} out of range for a {len(shape)}-mode tensor")
    moved = (shape[mode],) + shape[:mode] + shape[mode + 1:]
    return np.moveaxis(np.reshape(mat, moved, order="F"), 0, mode)


def mode_product(x, m, mode):
    """``x ×_mode m``: contracts the columns of ``m`` with axis ``mode`` of ``x``."""
    x = np.asarray(x)
    m = np.atleast_2d(np.asarray(m))
    _check_mode(x, mode)
    if m.shape[1] != x.shape[mode]:
        raise InvalidInputError(
            f"matrix has {m.shape[1]} columns but mode {mode} has size {x.shape[mode]}")
    return np.moveaxis(np.tensordot(m, x, axes=(1, mode)), 0, mode)


def multi_mode_product(x, matrices, modes=None):
    if modes is None:
        modes = range(len(matrices))
    for m, k in zip(matrices, modes):
        x = mode_product(x, m, k)
    return x


def fix_signs(u):
    """Flip columns so each one's largest-magnitude entry is non-negative."""
    u = np.array(u, dtype=float)
    if u.size == 0:
        return u
    rows = np.argmax(np.abs(u), axis=0)
    signs = np.where(u[rows, np.arange(u.shape[1])] < 0, -1.0, 1.0)
    return u * signs


def mode_factor(x, mode):
    """Full left singular basis of the mode-``mode`` unfolding.

    Returns ``(U, sv)`` with ``U`` square orthogonal (m_k x m_k) and ``sv`` the
    m_k singular values in descending order, zero-padded when the unfolding
    has fewer columns than rows.
    """
    x = np.asarray(x, dtype=float)
    _check_mode(x, mode)
    m = x.shape[mode]
    # column order is irrelevant for the left factor, so skip the F-order copy
    mat = np.reshape(np.moveaxis(x, mode, 0), (m, -1))
    r = mat.shape[1]
    if not np.any(mat):
        return np.eye(m), np.zeros(m)
    if r > 2 * m:
        # wide unfolding: triangularise first to keep the SVD m x m
        owned = not np.shares_memory(mat, x)
        _, rfac = scipy.linalg.qr(mat.T, mode="raw", overwrite_a=owned, check_finite=False)
        u, sv, _ = np.linalg.svd(rfac.T)
    else:
        u, sv, _ = np.linalg.svd(mat, full_matrices=True)
    sv = np.concatenate([sv, np.zeros(m - sv.size)])
    return fix_signs(u), sv


def hosvd(x, compute_core=True):
    """Full-rank higher-order SVD.

    ``core = x ×_1 U1^T ... ×_d Ud^T``.  With ``compute_core=False`` only the
    factors are produced and ``core`` is None.
    """
    x = np.asarray(x, dtype=float)
    factors, svals = [], []
    for k in range(x.ndim):
        u, sv = mode_factor(x, k)
        factors.append(u)
        svals.append(sv)
    core = None
    if compute_core:
        core = np.ascontiguousarray(multi_mode_product(x, [u.T for u in factors]))
    return TuckerModel(core=core, factors=factors, singular_values=svals, residual_fro=0.0)


def reconstruct(model):
    return multi_mode_product(model.core, model.factors)


def core_fibres(x, factors):
    """Core fibres through the lead entry, without forming the core.

    Entry k of the result equals ``core[0, ..., :, ..., 0]`` with the free
    index on mode k.
    """
    x = np.asarray(x, dtype=float)
    lead = [u[:, 0] for u in factors]
    out = []
    for k in range(x.ndim):
        y = x
        # contract from the last mode down so axis numbers stay valid
        for j in range(x.ndim - 1, -1, -1):
            if j != k:
                y = np.tensordot(y, lead[j], axes=(j, 0))
        out.append(factors[k].T @ y)
    return out


def ranks_from_fibres(fibres, epsilon_rel=0.01):
    """Shared node rank and subject rank from the four lead fibres."""
    if len(fibres) != 4:
        raise InvalidInputError("rank selection needs a 4-mode model")
    if not 0 < epsilon_rel < 1:
        raise InvalidInputError(f"epsilon_rel must lie in (0, 1), got {epsilon_rel}")
    f1, f2, _, f4 = (np.abs(np.asarray(f, dtype=float)) for f in fibres)
    lead = f1[0]
    if lead == 0:
        raise DegenerateCoreError("core[0,0,0,0] is zero; rank selection is undefined")
    cut = epsilon_rel * lead
    n = min(f1.size, f2.size)
    node = np.maximum(f1[:n], f2[:n])
    n_bar = int(np.nonzero(node >= cut)[0].max()) + 1
    s_bar = int(np.nonzero(f4 >= cut)[0].max()) + 1
    return RankSelection(n_bar=n_bar, s_bar=s_bar, epsilon_rel=epsilon_rel)


def select_ranks(model, epsilon_rel=0.01):
    """Pick the shared node rank and the subject rank from core fibres.

    The node rank is the largest j with
    ``max(|core[j,0,0,0]|, |core[0,j,0,0]|) >= epsilon_rel * |core[0,0,0,0]|``;
    the subject rank uses ``core[0,0,0,s]`` the same way.  Returned values are
    counts, not indices.
    """
    core = model.core
    if core is None or core.ndim != 4:
        raise InvalidInputError("rank selection needs the core of a 4-mode model")
    fibres = [core[:, 0, 0, 0], core[0, :, 0, 0], core[0, 0, :, 0], core[0, 0, 0, :]]
    return ranks_from_fibres(fibres, epsilon_rel)


def truncate_reconstruct(x, ranks, factors=None):
    """Project every mode onto its leading ``ranks[k]`` singular vectors.

    Modes kept at full rank are left untouched, since the projector is the
    identity there.  ``factors`` may be passed to reuse an existing HOSVD.
    """
    x = np.asarray(x, dtype=float)
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != x.ndim:
        raise InvalidRankError(f"{len(ranks)} ranks given for a {x.ndim}-mode tensor")
    for k, (r, m) in enumerate(zip(ranks, x.shape)):
        if not 1 <= r <= m:
            raise InvalidRankError(f"rank {r} invalid for mode {k} of size {m}")
    modes = [k for k in range(x.ndim) if ranks[k] < x.shape[k]]
    if not modes:
        return x.copy()
    bases = []
    for k in modes:
        u = factors[k] if factors is not None else mode_factor(x, k)[0]
        bases.append(u[:, : ranks[k]])
    # x ×_k (U U^T) over several modes == down-project all, then lift all
    coords = multi_mode_product(x, [u.T for u in bases], modes)
    return np.ascontiguousarray(multi_mode_product(coords, bases, modes))


def inner(a, b):
    return float(np.vdot(np.asarray(a, dtype=float), np.asarray(b, dtype=float)))


def frobenius(a):
    return float(np.linalg.norm(np.asarray(a, dtype=float).ravel()))


def cosine_similarity(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise InvalidInputError(f"shape mismatch {a.shape} vs {b.shape}")
    na, nb = frobenius(a), frobenius(b)
    if na == 0 or nb == 0:
        raise ZeroNormError("cosine similarity of a zero-norm tensor")
    return float(np.clip(inner(a, b) / (na * nb), -1.0, 1.0))
