"""Run configuration.

Config files are JSON objects.  Any key left out takes the default below; an
unknown key is an error.  The resolved config is echoed into every output.
"""
import copy
import json

from .connectivity import BandSpec
from .errors import ConfigError, NetstateError
from .states import SimilarityConfig
from .timefreq import KernelParams

DEFAULTS = {
    "seed": 0,
    "band": {"omega_a_hz": 4.0, "omega_b_hz": 8.0},
    "kernel": {"sigma_cw": 0.01},
    "self_loops": "zero",
    "decimate_time": None,
    "ranks": {"epsilon_rel": 0.01, "n_bar": None, "s_bar": None},
    "similarity": {
        "lambda": 0.4,
        "sigma_time": 2500.0,
        "time_units": "bins",
        "k_clusters": 5,
        "eigengap_max_k": 10,
        "n_restarts": 100,
        "contiguity_window": 5,
    },
    "summarize": {
        "k_index": 1,
        "l_index": 1,
        "quantile": 0.01,
        "rank_by": "value",
        "svg": False,
        "coordinates": None,
    },
    "synthetic": {
        "n_nodes": 16,
        "n_times": 200,
        "n_subjects": 10,
        "n_trials": 20,
        "fs_hz": 100.0,
        "t0_ms": -1000.0,
        "freq_hz": 6.0,
        "boundaries": [68, 135],
        "states": [
            {"nodes": [0, 1, 2, 3, 4], "strength": 1.0},
            {"nodes": [5, 6, 7, 8, 9], "strength": 1.0},
            {"nodes": [10, 11, 12, 13, 14], "strength": 1.0},
        ],
        "noise_level": 0.3,
        "uncoupled_amplitude": 0.5,
    },
}


def _merge(base, override, path=""):
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config key {where!r} must be an object")
            out[key] = _merge(base[key], value, where + ".")
        else:
            out[key] = value
    return out


class PipelineConfig:
    """Validated view of a resolved config dictionary."""

    def __init__(self, raw=None):
        data = _merge(DEFAULTS, raw or {})
        self.data = data
        try:
            self._validate()
        except ConfigError:
            raise
        except (NetstateError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def _validate(self):
        d = self.data
        if not isinstance(d["seed"], int) or isinstance(d["seed"], bool) or d["seed"] < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {d['seed']!r}")
        self.band = BandSpec(float(d["band"]["omega_a_hz"]), float(d["band"]["omega_b_hz"]))
        self.kernel = KernelParams(float(d["kernel"]["sigma_cw"]))
        if d["self_loops"] not in ("zero", "one"):
            raise ConfigError("self_loops must be 'zero' or 'one'")
        dec = d["decimate_time"]
        if dec is not None and (not isinstance(dec, int) or dec < 1):
            raise ConfigError("decimate_time must be null or a positive integer")
        r = d["ranks"]
        if not 0 < float(r["epsilon_rel"]) < 1:
            raise ConfigError("ranks.epsilon_rel must lie in (0, 1)")
        for key in ("n_bar", "s_bar"):
            if r[key] is not None and (not isinstance(r[key], int) or r[key] < 1):
                raise ConfigError(f"ranks.{key} must be null or a positive integer")
        s = d["similarity"]
        if s["time_units"] not in ("bins", "ms"):
            raise ConfigError("similarity.time_units must be 'bins' or 'ms'")
        if s["contiguity_window"] < 1:
            raise ConfigError("similarity.contiguity_window must be positive")
        self.similarity = SimilarityConfig(
            lam=float(s["lambda"]), sigma_time=float(s["sigma_time"]),
            k_clusters=s["k_clusters"], eigengap_max_k=int(s["eigengap_max_k"]),
            n_restarts=int(s["n_restarts"]), window=int(s["contiguity_window"]))
        m = d["summarize"]
        for key in ("k_index", "l_index"):
            if not isinstance(m[key], int) or m[key] < 1:
                raise ConfigError(f"summarize.{key} must be a positive integer")
        if not 0 < float(m["quantile"]) < 1:
            raise ConfigError("summarize.quantile must lie in (0, 1)")
        if m["rank_by"] not in ("value", "abs"):
            raise ConfigError("summarize.rank_by must be 'value' or 'abs'")

    def __getitem__(self, key):
        return self.data[key]

    @property
    def seed(self):
        return self.data["seed"]

    def with_seed(self, seed):
        raw = copy.deepcopy(self.data)
        raw["seed"] = int(seed)
        return PipelineConfig(raw)

    def to_dict(self):
        return copy.deepcopy(self.data)

    @classmethod
    def load(cls, path):
        if path is None:
            return cls()
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
        return cls(raw)
