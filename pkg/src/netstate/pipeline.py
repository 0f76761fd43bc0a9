"""Stage orchestration: synth -> connectivity -> detect -> summarize.

Each ``run_*`` function reads its inputs from disk, writes its outputs
atomically and returns the in-memory result.  The in-process functions
(:func:`detect`, :func:`summarize_intervals`) are what the file stages call,
so a stage run from the CLI and the same stage inside ``run_pipeline`` give
identical bytes.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, io, kernels
from . import multiway as mw
from . import states as st
from .config import PipelineConfig
from .connectivity import build_tensor
from .errors import DataError, InvalidIndexError
from .summarize import summarize
from .synth import SyntheticSpec, generate, ground_truth

log = logging.getLogger("netstate")


@dataclass
class DetectResult:
    partition: st.StatePartition
    similarity: st.SimilarityMatrix
    eigenvalues: np.ndarray
    ranks: tuple
    rank_source: str
    k: int
    sigma_bins: float


def _bin_width_ms(time_axis_ms):
    t = np.asarray(time_axis_ms, dtype=float)
    if t.size < 2:
        return 1.0
    return float(np.median(np.diff(t)))


def sigma_in_bins(config, time_axis_ms):
    s = config["similarity"]
    sigma = float(s["sigma_time"])
    if s["time_units"] == "ms":
        sigma /= _bin_width_ms(time_axis_ms)
    return sigma


def choose_ranks(x, factors, config):
    """Ranks for (node, node, time, subject); explicit values win over the epsilon rule."""
    r = config["ranks"]
    n_nodes, _, n_time, n_subj = x.shape
    n_bar, s_bar = r["n_bar"], r["s_bar"]
    source = "explicit"
    if n_bar is None or s_bar is None:
        sel = mw.ranks_from_fibres(mw.core_fibres(x, factors), float(r["epsilon_rel"]))
        n_bar = sel.n_bar if n_bar is None else n_bar
        s_bar = sel.s_bar if s_bar is None else s_bar
        source = "epsilon_rel" if r["n_bar"] is None and r["s_bar"] is None else "mixed"
    if n_bar > n_nodes or s_bar > n_subj:
        raise DataError(f"ranks (n_bar={n_bar}, s_bar={s_bar}) exceed tensor shape {x.shape}")
    return (n_bar, n_bar, n_time, s_bar), source


def truncated_slices(x, ranks, factors):
    """Time-leading slices of the truncated tensor in reduced coordinates.

    The lift back to full size is an isometry, so inner products and norms
    (and hence every cosine similarity) are those of the reconstructed slices.
    """
    modes = [k for k in range(x.ndim) if ranks[k] < x.shape[k]]
    coords = x
    if modes:
        coords = mw.multi_mode_product(x, [factors[k][:, :ranks[k]].T for k in modes], modes)
    return np.moveaxis(coords, 2, 0)


def detect(tensor, config):
    """Ranks, similarity, cluster count and contiguous partition for one tensor."""
    # one memory layout for every caller so results do not depend on it
    x = np.asfortranarray(tensor.values, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DataError("tensor contains non-finite values")
    factors = mw.hosvd(x, compute_core=False).factors
    ranks, source = choose_ranks(x, factors, config)
    log.info("ranks %s (%s)", ranks, source)
    slices = truncated_slices(x, ranks, factors)
    delta = st.delta_matrix(slices)
    del slices
    if np.all(delta == 1.0):
        log.warning("all truncated slices are collinear; similarity reduces to temporal proximity")
    sim_cfg = config.similarity
    sigma = sigma_in_bins(config, tensor.time_axis_ms)
    theta = st.theta_matrix(delta.shape[0], sigma)
    psi = st.combine(delta, theta, sim_cfg.lam)
    vals, _ = st.affinity_spectrum(psi)
    k = sim_cfg.k_clusters
    if k == "auto":
        k = st.choose_k(psi, sim_cfg.eigengap_max_k)
        log.info("eigengap chose k=%d", k)
    labels = st.spectral_cluster(psi, k, seed=config.seed, n_restarts=sim_cfg.n_restarts)
    part = st.enforce_contiguity(labels, window=sim_cfg.window, k=k)
    n_eig = min(vals.size, sim_cfg.eigengap_max_k + 1)
    return DetectResult(partition=part, similarity=st.SimilarityMatrix(psi, delta, theta),
                        eigenvalues=vals[:n_eig], ranks=ranks, rank_source=source,
                        k=k, sigma_bins=sigma)


def states_document(result, tensor, config):
    t_ms = np.asarray(tensor.time_axis_ms, dtype=float)
    intervals = [{"index": i + 1, "state": int(lab), "start_bin": int(a), "end_bin": int(b),
                  "start_ms": float(t_ms[a - 1]), "end_ms": float(t_ms[b - 1])}
                 for i, (a, b, lab) in enumerate(result.partition.intervals)]
    n = result.similarity.psi.shape[0]
    return {
        "config": config.to_dict(),
        "tensor_shape": list(np.shape(tensor.values)),
        "psi_shape": [n, n],
        "ranks": {"n_bar": result.ranks[0], "s_bar": result.ranks[3], "source": result.rank_source},
        "sigma_time_bins": result.sigma_bins,
        "k": result.k,
        "k_source": "auto" if config["similarity"]["k_clusters"] == "auto" else "fixed",
        "eigenvalues": [float(v) for v in result.eigenvalues],
        "intervals": intervals,
        "boundaries": result.partition.boundaries,
        "labels_per_t": [int(v) for v in result.partition.labels_per_t],
    }


def write_detect(out_dir, result, tensor, config):
    out_dir = Path(out_dir)
    io.write_matrix_csv(out_dir / "psi.csv", result.similarity.psi)
    doc = states_document(result, tensor, config)
    io.write_json(out_dir / "states.json", doc)
    return doc


def intervals_from_states(doc):
    try:
        return [(int(iv["start_bin"]), int(iv["end_bin"]), int(iv["state"])) for iv in doc["intervals"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed states document: {exc}") from exc


def summarize_intervals(tensor, intervals, config, threads=1):
    m = config["summarize"]
    values = np.asfortranarray(tensor.values, dtype=float)
    n_time = values.shape[2]
    for a, b, _ in intervals:
        if not 1 <= a <= b <= n_time:
            raise InvalidIndexError(f"interval ({a}, {b}) outside 1..{n_time}")

    def work(iv):
        a, b, lab = iv
        return summarize(values, a, b, m["k_index"], m["l_index"],
                         float(m["quantile"]), m["rank_by"], label=lab)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(work, intervals))
    return [work(iv) for iv in intervals]


def write_summaries(out_dir, summaries, tensor, config):
    """Files ``summary_<i>.*`` with i the 1-based interval index."""
    out_dir = Path(out_dir)
    labels = list(tensor.node_labels)
    m = config["summarize"]
    paths = []
    for i, s in enumerate(summaries, start=1):
        stem = out_dir / f"summary_{i}"
        io.write_edges_csv(stem.with_suffix(".csv"), s.edges, labels)
        io.write_json(stem.with_suffix(".json"), {
            "interval": {"index": i, "state": s.label, "start_bin": s.t1, "end_bin": s.t2},
            "k_index": s.k_index,
            "l_index": s.l_index,
            "quantile": m["quantile"],
            "rank_by": m["rank_by"],
            "node_labels": labels,
            "map": [[float(v) for v in row] for row in s.map],
            "edges": [{"node_i": labels[a], "node_j": labels[b], "weight": w} for a, b, w in s.edges],
            "degrees": {lab: int(d) for lab, d in zip(labels, s.degrees)},
            "weighted_degrees": {lab: float(d) for lab, d in zip(labels, s.weighted_degrees)},
        })
        paths += [stem.with_suffix(".csv"), stem.with_suffix(".json")]
        if m["svg"]:
            io.atomic_write_text(stem.with_suffix(".svg"),
                                 io.render_svg(s.edges, labels, m["coordinates"]))
            paths.append(stem.with_suffix(".svg"))
    return paths


def _manifest_entry(paths, root, seconds):
    root = Path(root)
    return {"seconds": round(seconds, 3),
            "outputs": {str(Path(p).relative_to(root)): io.sha256_file(p) for p in sorted(map(str, paths))}}


def _files_under(directory):
    return sorted(p for p in Path(directory).rglob("*") if p.is_file() and not p.name.startswith("."))


# ---- file-based stages -----------------------------------------------------

def run_synth(config, out_dir):
    spec = SyntheticSpec.from_dict(config["synthetic"])
    out_dir = Path(out_dir)
    recs = generate(spec, config.seed)
    for rec in recs:
        io.write_recording(out_dir / rec.subject_id, rec)
    truth = ground_truth(spec)
    truth["seed"] = config.seed
    truth["synthetic"] = config["synthetic"]
    io.write_json(out_dir / "ground_truth.json", truth)
    log.info("wrote %d recordings to %s", len(recs), out_dir)
    return recs, truth


def connectivity(recs, config, threads=1):
    tensor = build_tensor(recs, config.band, config.kernel, self_loops=config["self_loops"],
                          decimate=config["decimate_time"], threads=threads)
    tensor.values = np.asfortranarray(tensor.values)
    tensor.config = config.to_dict()
    return tensor


def run_connectivity(in_dir, config, out_dir, threads=1):
    recs = io.read_recordings(in_dir)
    tensor = connectivity(recs, config, threads)
    io.write_tensor(out_dir, tensor, config.to_dict())
    log.info("tensor %s written to %s", tensor.values.shape, out_dir)
    return tensor


def run_detect(tensor_path, config, out_dir):
    tensor = io.read_tensor(tensor_path)
    result = detect(tensor, config)
    write_detect(out_dir, result, tensor, config)
    return result


def run_summarize(tensor_path, states_path, config, out_dir, threads=1):
    tensor = io.read_tensor(tensor_path)
    intervals = intervals_from_states(io.read_json(states_path))
    summaries = summarize_intervals(tensor, intervals, config, threads)
    write_summaries(out_dir, summaries, tensor, config)
    return summaries


def run_pipeline(in_dir, config, out_dir, threads=1):
    """connectivity -> detect -> summarize with a ``run_manifest.json``.

    Layout: ``tensor/`` (container), ``states.json``, ``psi.csv`` and
    ``summary_<i>.{csv,json[,svg]}``.
    """
    out_dir = Path(out_dir)
    stages = {}

    t = time.perf_counter()
    tensor = run_connectivity(in_dir, config, out_dir / "tensor", threads)
    stages["connectivity"] = _manifest_entry(_files_under(out_dir / "tensor"), out_dir,
                                             time.perf_counter() - t)

    t = time.perf_counter()
    result = detect(tensor, config)
    write_detect(out_dir, result, tensor, config)
    stages["detect"] = _manifest_entry([out_dir / "states.json", out_dir / "psi.csv"], out_dir,
                                       time.perf_counter() - t)

    t = time.perf_counter()
    summaries = summarize_intervals(tensor, result.partition.intervals, config, threads)
    paths = write_summaries(out_dir, summaries, tensor, config)
    stages["summarize"] = _manifest_entry(paths, out_dir, time.perf_counter() - t)

    io.write_json(out_dir / "run_manifest.json", {
        "netstate_version": __version__,
        "numpy_version": np.__version__,
        "kernel_backend": kernels.BACKEND,
        "threads": threads,
        "input": str(in_dir),
        "config": config.to_dict(),
        "stages": stages,
    })
    return tensor, result, summaries


def load_config(path, seed=None):
    cfg = PipelineConfig.load(path)
    return cfg if seed is None else cfg.with_seed(seed)
