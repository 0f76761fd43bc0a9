"""On-disk containers and result writers.

Recording directory: ``meta.json`` plus ``data.f64`` holding little-endian
float64 samples in (trial, channel, sample) order, sample fastest.

Tensor directory: ``meta.json`` plus ``data.f64`` holding little-endian
float64 values with the first index fastest.

All files are written to a temporary name and renamed into place.
"""
import hashlib
import html
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .connectivity import ConnectivityTensor, MultiTrialRecording
from .errors import DataError

TENSOR_AXES = ["node_i", "node_j", "time", "subject"]


def atomic_write_bytes(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text):
    atomic_write_bytes(path, text.encode("utf-8"))


def write_json(path, obj):
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=False) + "\n")


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _read_f64(path, count):
    try:
        arr = np.fromfile(path, dtype="<f8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if arr.size != count:
        raise DataError(f"{path}: expected {count} values, found {arr.size}")
    return arr.astype(np.float64, copy=False)


def write_recording(directory, rec):
    directory = Path(directory)
    meta = {
        "subject_id": rec.subject_id,
        "channel_labels": list(rec.channel_labels),
        "fs_hz": rec.fs,
        "t0_ms": rec.t0_ms,
        "n_trials": rec.n_trials,
        "n_channels": rec.n_channels,
        "n_samples": rec.n_samples,
        "dtype": "float64",
        "byte_order": "little",
        "index_order": ["trial", "channel", "sample"],
    }
    atomic_write_bytes(directory / "data.f64", np.ascontiguousarray(rec.data, dtype="<f8").tobytes())
    write_json(directory / "meta.json", meta)


def read_recording(directory):
    directory = Path(directory)
    meta = read_json(directory / "meta.json")
    if meta.get("byte_order", "little") != "little" or meta.get("dtype", "float64") != "float64":
        raise DataError(f"{directory}: only little-endian float64 data is supported")
    shape = (meta["n_trials"], meta["n_channels"], meta["n_samples"])
    data = _read_f64(directory / "data.f64", math.prod(shape)).reshape(shape)
    return MultiTrialRecording(data=data, fs=float(meta["fs_hz"]), t0_ms=float(meta["t0_ms"]),
                               channel_labels=tuple(meta["channel_labels"]),
                               subject_id=meta.get("subject_id", directory.name))


def read_recordings(in_dir):
    """Every recording below ``in_dir`` (one sub-directory each), sorted by name."""
    in_dir = Path(in_dir)
    if (in_dir / "meta.json").exists():
        return [read_recording(in_dir)]
    dirs = sorted(p for p in in_dir.iterdir() if (p / "meta.json").exists()) if in_dir.is_dir() else []
    if not dirs:
        raise DataError(f"no recordings found in {in_dir}")
    return [read_recording(p) for p in dirs]


def write_tensor(directory, tensor, config=None):
    directory = Path(directory)
    values = np.asarray(tensor.values, dtype=np.float64)
    meta = {
        "shape": list(values.shape),
        "axis_names": TENSOR_AXES,
        "dtype": "float64",
        "byte_order": "little",
        "layout": "first index fastest",
        "node_labels": list(tensor.node_labels),
        "time_axis_ms": [float(t) for t in tensor.time_axis_ms],
        "subject_ids": list(tensor.subject_ids),
        "config": config if config is not None else tensor.config,
    }
    atomic_write_bytes(directory / "data.f64", values.astype("<f8").tobytes(order="F"))
    write_json(directory / "meta.json", meta)


def read_tensor(directory):
    directory = Path(directory)
    meta = read_json(directory / "meta.json")
    shape = tuple(meta["shape"])
    if len(shape) != 4:
        raise DataError(f"{directory}: tensor must have 4 modes, got {len(shape)}")
    flat = _read_f64(directory / "data.f64", math.prod(shape))
    values = flat.reshape(shape, order="F")
    return ConnectivityTensor(values=values, node_labels=tuple(meta["node_labels"]),
                              time_axis_ms=np.asarray(meta["time_axis_ms"], dtype=float),
                              subject_ids=tuple(meta["subject_ids"]),
                              config=meta.get("config") or {})


def format_float(x):
    return "%.17g" % x


def write_matrix_csv(path, mat):
    lines = [",".join(format_float(v) for v in row) for row in np.asarray(mat)]
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_matrix_csv(path):
    with open(path) as fh:
        return np.array([[float(v) for v in line.split(",")] for line in fh if line.strip()])


def write_edges_csv(path, edges, labels):
    lines = ["node_i,node_j,weight"]
    lines += [f"{labels[i]},{labels[j]},{format_float(w)}" for i, j, w in edges]
    atomic_write_text(path, "\n".join(lines) + "\n")


def circle_layout(n):
    ang = 2 * np.pi * np.arange(n) / n - np.pi / 2
    return np.column_stack([np.cos(ang), np.sin(ang)])


def render_svg(edges, labels, coords=None, size=480):
    """Nodes on a circle (or at ``coords``); edge width grows with weight rank."""
    n = len(labels)
    xy = circle_layout(n) if coords is None else np.asarray(coords, dtype=float)
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    pad = 40
    pts = pad + (xy - lo) / span * (size - 2 * pad)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           '<rect width="100%" height="100%" fill="white"/>']
    n_edges = len(edges)
    for rank, (i, j, _) in enumerate(edges):
        width = 0.5 + 3.5 * (n_edges - rank) / max(n_edges, 1)
        out.append(f'<line x1="{pts[i, 0]:.2f}" y1="{pts[i, 1]:.2f}" x2="{pts[j, 0]:.2f}" '
                   f'y2="{pts[j, 1]:.2f}" stroke="#b22222" stroke-width="{width:.2f}"/>')
    for k, (x, y) in enumerate(pts):
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="#1f3b73"/>')
        out.append(f'<text x="{x + 6:.2f}" y="{y - 6:.2f}" font-size="9">{html.escape(str(labels[k]))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
