"""Synthetic multi-trial recordings with planted network states.

Every channel carries a cosine at ``freq_hz``.  Inside state s the channels
of each coupled group share one random phase per trial and oscillate at unit
amplitude; all other channels get independent phases and amplitude
``uncoupled_amplitude``, so a network is both synchronised and active while
its state lasts.  A coupling strength below one adds per-channel phase jitter
of ``(1 - strength) * U(-pi, pi)``.  White Gaussian noise of standard
deviation ``noise_level`` is added on top.
"""
from dataclasses import dataclass

import numpy as np

from .connectivity import MultiTrialRecording
from .errors import ConfigError
from .rng import rng_for


@dataclass(frozen=True)
class SyntheticSpec:
    n_nodes: int = 16
    n_times: int = 200
    n_subjects: int = 10
    n_trials: int = 20
    fs_hz: float = 100.0
    t0_ms: float = -1000.0
    freq_hz: float = 6.0
    boundaries: tuple = (68, 135)
    states: tuple = ()
    noise_level: float = 0.3
    uncoupled_amplitude: float = 0.5

    def __post_init__(self):
        b = list(self.boundaries)
        if any(not 1 < x <= self.n_times for x in b) or b != sorted(set(b)):
            raise ConfigError(f"boundaries must increase strictly within 2..{self.n_times}, got {b}")
        if len(self.states) != len(b) + 1:
            raise ConfigError(f"{len(b)} boundaries need {len(b) + 1} state patterns, got {len(self.states)}")
        if self.noise_level < 0:
            raise ConfigError("noise_level must be >= 0")
        if not 0 <= self.uncoupled_amplitude <= 1:
            raise ConfigError("uncoupled_amplitude must lie in [0, 1]")
        if min(self.n_nodes, self.n_times) < 2 or min(self.n_subjects, self.n_trials) < 1:
            raise ConfigError("synthetic geometry too small")

    @classmethod
    def from_dict(cls, d):
        states = tuple(_parse_state(s) for s in d["states"])
        fields = {k: v for k, v in d.items() if k != "states"}
        fields["boundaries"] = tuple(int(x) for x in fields.get("boundaries", ()))
        return cls(states=states, **fields)

    def state_of_bin(self):
        """0-based state index for each sample."""
        return np.searchsorted(np.asarray(self.boundaries) - 1, np.arange(self.n_times), side="right")

    def groups(self, s):
        """Channel -> group id for state s (coupled sets merged transitively)."""
        parent = list(range(self.n_nodes))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i, j in self.states[s]["pairs"]:
            parent[find(i)] = find(j)
        return np.array([find(i) for i in range(self.n_nodes)])

    def active(self, s):
        """Boolean mask of channels that belong to a coupled group in state s."""
        g = self.groups(s)
        return np.bincount(g, minlength=self.n_nodes)[g] > 1

    def coupled_pairs(self, s):
        g = self.groups(s)
        return [(i, j) for i in range(self.n_nodes) for j in range(i + 1, self.n_nodes) if g[i] == g[j]]


def _parse_state(s):
    pairs = [tuple(int(v) for v in p) for p in s.get("pairs", [])]
    nodes = [int(v) for v in s.get("nodes", [])]
    pairs += [(a, b) for k, a in enumerate(nodes) for b in nodes[k + 1:]]
    strength = float(s.get("strength", 1.0))
    if not 0 <= strength <= 1:
        raise ConfigError(f"coupling strength must lie in [0, 1], got {strength}")
    return {"pairs": tuple(pairs), "strength": strength}


def generate_subject(spec, seed, subject):
    rng = rng_for(seed, "synth", subject)
    state_idx = spec.state_of_bin()
    u = np.arange(spec.n_times)
    carrier = 2 * np.pi * spec.freq_hz * u / spec.fs_hz
    groups = [spec.groups(s) for s in range(len(spec.states))]
    amp = np.empty((spec.n_nodes, spec.n_times))
    for s in range(len(spec.states)):
        amp[:, state_idx == s] = np.where(spec.active(s), 1.0, spec.uncoupled_amplitude)[:, None]
    data = np.empty((spec.n_trials, spec.n_nodes, spec.n_times))
    for k in range(spec.n_trials):
        phase = np.empty((spec.n_nodes, spec.n_times))
        for s, pattern in enumerate(spec.states):
            group_phase = rng.uniform(-np.pi, np.pi, size=spec.n_nodes)
            jitter = rng.uniform(-np.pi, np.pi, size=spec.n_nodes)
            ph = group_phase[groups[s]] + (1.0 - pattern["strength"]) * jitter
            mask = state_idx == s
            phase[:, mask] = ph[:, None]
        data[k] = amp * np.cos(carrier[None, :] + phase)
        noise = rng.standard_normal((spec.n_nodes, spec.n_times))
        if spec.noise_level > 0:
            data[k] += spec.noise_level * noise
    labels = tuple(f"ch{i + 1:02d}" for i in range(spec.n_nodes))
    return MultiTrialRecording(data=data, fs=spec.fs_hz, t0_ms=spec.t0_ms,
                               channel_labels=labels, subject_id=f"subject_{subject + 1:03d}")


def generate(spec, seed):
    return [generate_subject(spec, seed, s) for s in range(spec.n_subjects)]


def ground_truth(spec):
    state_idx = spec.state_of_bin()
    starts = [1] + list(spec.boundaries)
    ends = list(np.asarray(spec.boundaries) - 1) + [spec.n_times]
    return {
        "boundaries": list(spec.boundaries),
        "intervals": [{"start_bin": int(a), "end_bin": int(b), "state": s + 1}
                      for s, (a, b) in enumerate(zip(starts, ends))],
        "labels_per_t": [int(x) + 1 for x in state_idx],
        "coupled_pairs": [[list(p) for p in spec.coupled_pairs(s)] for s in range(len(spec.states))],
        "strengths": [p["strength"] for p in spec.states],
    }


def planted_blocks(sizes, within=0.9, across=0.1, noise=0.05, seed=0):
    """Block affinity over consecutive time points with symmetric uniform noise.

    Returns ``(psi, labels)`` where labels are 1-based block ids; entries are
    clipped to [0, 1] and the diagonal is one.
    """
    sizes = [int(s) for s in sizes]
    if not sizes or min(sizes) < 1:
        raise ConfigError("block sizes must be positive")
    labels = np.repeat(np.arange(1, len(sizes) + 1), sizes)
    psi = np.where(labels[:, None] == labels[None, :], within, across).astype(float)
    if noise > 0:
        e = rng_for(seed, "blocks").uniform(-noise, noise, size=psi.shape)
        psi += np.triu(e, 1) + np.triu(e, 1).T
    psi = np.clip(psi, 0.0, 1.0)
    np.fill_diagonal(psi, 1.0)
    return psi, labels
