"""Similarity over time points and segmentation into contiguous network states."""
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, ZeroNormError
from .rng import rng_for


@dataclass(frozen=True)
class SimilarityConfig:
    lam: float = 0.4
    sigma_time: float = 2500.0
    k_clusters: object = 5
    eigengap_max_k: int = 10
    n_restarts: int = 100
    window: int = 5

    def __post_init__(self):
        if not 0 < self.lam < 1:
            raise InvalidInputError(f"lambda must lie in (0, 1), got {self.lam}")
        if not self.sigma_time > 0:
            raise InvalidInputError(f"sigma_time must be positive, got {self.sigma_time}")
        if self.k_clusters != "auto" and not (
                isinstance(self.k_clusters, int) and self.k_clusters >= 1):
            raise InvalidInputError(f"k_clusters must be 'auto' or a positive int, got {self.k_clusters!r}")
        if self.eigengap_max_k < 2:
            raise InvalidInputError("eigengap_max_k must be at least 2")


@dataclass
class SimilarityMatrix:
    psi: np.ndarray
    delta: np.ndarray
    theta: np.ndarray


@dataclass
class StatePartition:
    """Contiguous states.

    ``intervals`` holds ``(start, end, label)`` with 1-based inclusive time bins
    and labels in 1..k.
    """

    intervals: list
    k: int
    labels_per_t: np.ndarray = field(repr=False)

    @property
    def boundaries(self):
        """Start bins of every interval after the first."""
        return [start for start, _, _ in self.intervals[1:]]


def _as_rows(slices):
    if isinstance(slices, np.ndarray):
        return slices.reshape(slices.shape[0], -1)
    slices = [np.asarray(s, dtype=float) for s in slices]
    shapes = {s.shape for s in slices}
    if len(shapes) > 1:
        raise InvalidInputError(f"slices differ in shape: {sorted(shapes)}")
    return np.stack([s.ravel() for s in slices])


def delta_matrix(slices):
    """Cosine similarity between every pair of time slices.

    ``slices`` is a sequence of equally shaped arrays or one array whose
    leading axis is time.
    """
    rows = np.asarray(_as_rows(slices), dtype=float)
    norms = np.linalg.norm(rows, axis=1)
    zero = np.nonzero(norms == 0)[0]
    if zero.size:
        raise ZeroNormError(f"slice at time bin {zero[0] + 1} has zero norm")
    gram = rows @ rows.T
    delta = gram / np.outer(norms, norms)
    delta = 0.5 * (delta + delta.T)
    np.fill_diagonal(delta, 1.0)
    return np.clip(delta, -1.0, 1.0)


def theta_matrix(n_time, sigma_time):
    """Gaussian proximity on the integer time-index grid 1..T."""
    if n_time < 1:
        raise InvalidInputError("need at least one time point")
    if not sigma_time > 0:
        raise InvalidInputError(f"sigma_time must be positive, got {sigma_time}")
    idx = np.arange(1, n_time + 1, dtype=float)
    diff = idx[:, None] - idx[None, :]
    return np.exp(-(diff * diff) / (2.0 * sigma_time * sigma_time))


def combine(delta, theta, lam):
    delta = np.asarray(delta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if delta.shape != theta.shape:
        raise InvalidInputError(f"shape mismatch {delta.shape} vs {theta.shape}")
    if not 0 < lam < 1:
        raise InvalidInputError(f"lambda must lie in (0, 1), got {lam}")
    return lam * theta + (1.0 - lam) * delta


def similarity(slices, config=SimilarityConfig()):
    delta = delta_matrix(slices)
    theta = theta_matrix(delta.shape[0], config.sigma_time)
    return SimilarityMatrix(psi=combine(delta, theta, config.lam), delta=delta, theta=theta)


def _check_affinity(psi):
    psi = np.asarray(psi, dtype=float)
    if psi.ndim != 2 or psi.shape[0] != psi.shape[1]:
        raise InvalidInputError(f"affinity must be square, got shape {psi.shape}")
    scale = max(1.0, float(np.abs(psi).max()))
    if np.abs(psi - psi.T).max() > 1e-10 * scale:
        raise InvalidInputError("affinity matrix is not symmetric")
    if psi.min() < 0:
        raise InvalidInputError("affinity matrix has negative entries")
    return psi


def normalized_affinity(psi):
    """``D^{-1/2} psi D^{-1/2}`` with D the diagonal of row sums."""
    psi = _check_affinity(psi)
    deg = psi.sum(axis=1)
    if np.any(deg <= 0):
        raise InvalidInputError("affinity has an isolated time point (zero degree)")
    inv = 1.0 / np.sqrt(deg)
    m = psi * inv[:, None] * inv[None, :]
    return 0.5 * (m + m.T)


def affinity_spectrum(psi):
    """Eigenvalues and eigenvectors of the normalised affinity, descending."""
    vals, vecs = np.linalg.eigh(normalized_affinity(psi))
    return vals[::-1], vecs[:, ::-1]


def choose_k(psi, max_k=10):
    """Eigengap heuristic: argmax over k=2..max_k of ``lambda_k - lambda_{k+1}``."""
    if max_k < 2:
        raise InvalidInputError("max_k must be at least 2")
    vals, _ = affinity_spectrum(psi)
    max_k = min(max_k, vals.size - 1)
    if max_k < 2:
        raise InvalidInputError("need at least 3 time points to choose k")
    gaps = vals[1:max_k] - vals[2:max_k + 1]
    return int(np.argmax(gaps)) + 2


def _sq_dists(x, centers):
    return ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


def _farthest_point_init(x, k, first):
    chosen = [first]
    d = ((x - x[first]) ** 2).sum(axis=1)
    for _ in range(1, k):
        nxt = int(np.argmax(d))
        chosen.append(nxt)
        d = np.minimum(d, ((x - x[nxt]) ** 2).sum(axis=1))
    return x[chosen].copy()


def _lloyd(x, centers, max_iter=300):
    k = centers.shape[0]
    labels = None
    for _ in range(max_iter):
        d = _sq_dists(x, centers)
        new = np.argmin(d, axis=1)
        for c in range(k):
            if not np.any(new == c):
                # reseed an empty cluster with the worst-served point
                worst = int(np.argmax(d[np.arange(len(x)), new]))
                new[worst] = c
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        centers = np.stack([x[labels == c].mean(axis=0) for c in range(k)])
    inertia = float(_sq_dists(x, centers)[np.arange(len(x)), labels].sum())
    return labels, inertia


def kmeans(x, k, seed=0, n_restarts=100):
    """k-means with farthest-point seeding; best of ``n_restarts`` runs."""
    x = np.asarray(x, dtype=float)
    rng = rng_for(seed, "kmeans")
    firsts = rng.integers(0, len(x), size=n_restarts)
    best, best_inertia = None, np.inf
    for first in firsts:
        labels, inertia = _lloyd(x, _farthest_point_init(x, k, int(first)))
        if inertia < best_inertia:
            best, best_inertia = labels, inertia
    return best


def relabel_by_appearance(labels):
    """Map labels to 1..k in order of first appearance."""
    labels = np.asarray(labels)
    mapping = {}
    for lab in labels:
        if lab not in mapping:
            mapping[lab] = len(mapping) + 1
    return np.array([mapping[lab] for lab in labels], dtype=np.int64)


def spectral_cluster(psi, k, seed=0, n_restarts=100):
    """Normalised spectral clustering; returns labels in 1..k per time point."""
    psi = _check_affinity(psi)
    n = psi.shape[0]
    if not 1 <= k <= n:
        raise InvalidInputError(f"cannot form {k} clusters from {n} time points")
    _, vecs = affinity_spectrum(psi)
    emb = vecs[:, :k]
    norms = np.linalg.norm(emb, axis=1, keepdims=True)
    emb = np.divide(emb, norms, out=np.zeros_like(emb), where=norms > 0)
    return relabel_by_appearance(kmeans(emb, k, seed=seed, n_restarts=n_restarts))


def _majority(window, current):
    vals, counts = np.unique(window, return_counts=True)
    tied = vals[counts == counts.max()]
    if current in tied:
        return current
    return tied.min()


def enforce_contiguity(labels, window=5, max_passes=10, k=None):
    """Majority-filter labels, then turn runs into intervals.

    The window is centred and shrinks symmetrically near the ends, so the
    first and last bins see windows of 1, 3, ... points.  Ties keep the
    current label if it is among the winners, otherwise the smallest label.
    """
    labels = np.asarray(labels, dtype=np.int64).copy()
    n = labels.size
    half = window // 2
    for _ in range(max_passes):
        new = labels.copy()
        for t in range(n):
            h = min(half, t, n - 1 - t)
            new[t] = _majority(labels[t - h:t + h + 1], labels[t])
        if np.array_equal(new, labels):
            break
        labels = new
    intervals = []
    start = 0
    for t in range(1, n + 1):
        if t == n or labels[t] != labels[start]:
            intervals.append((start + 1, t, int(labels[start])))
            start = t
    if k is None:
        k = int(np.unique(labels).size)
    return StatePartition(intervals=intervals, k=k, labels_per_t=labels)


def segment(psi, config=SimilarityConfig(), seed=0):
    """Cluster count (fixed or eigengap), spectral clustering and contiguity repair."""
    k = config.k_clusters
    if k == "auto":
        k = choose_k(psi, config.eigengap_max_k)
    labels = spectral_cluster(psi, k, seed=seed, n_restarts=config.n_restarts)
    return enforce_contiguity(labels, window=config.window, k=k)
