"""CSV and JSON emission for runs."""

from __future__ import annotations

import hashlib
import json
from importlib import metadata
from pathlib import Path

import numpy as np

from .config import config_to_dict, dump_config
from .solver import LaneGridState, RunOutput


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def snapshot_csv(state: LaneGridState, centers: np.ndarray) -> str:
    M = state.rho.shape[0]
    lines = [",".join(["x"] + [f"rho_{j}" for j in range(1, M + 1)])]
    for k, x in enumerate(centers):
        lines.append(",".join([_fmt(x)] + [_fmt(v) for v in state.rho[:, k]]))
    return "\n".join(lines) + "\n"


def timeseries_csv(output: RunOutput) -> str:
    M = output.masses.shape[1]
    header = ["t"] + [f"mass_{j}" for j in range(1, M + 1)] + [f"tv_{j}" for j in range(1, M + 1)]
    lines = [",".join(header)]
    for t, m, tv in zip(output.times, output.masses, output.tvs):
        lines.append(",".join([_fmt(t)] + [_fmt(v) for v in m] + [_fmt(v) for v in tv]))
    return "\n".join(lines) + "\n"


def _write(path: Path, text: str) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    data = text.encode()
    path.write_bytes(data)
    return git_blob_hash(data)


def git_blob_hash(data: bytes) -> str:
    """Content hash computed the way git names blobs."""
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def emit_snapshot_csv(state: LaneGridState, centers, path) -> str:
    return _write(Path(path), snapshot_csv(state, np.asarray(centers)))


def emit_timeseries_csv(output: RunOutput, path) -> str:
    return _write(Path(path), timeseries_csv(output))


def snapshot_filename(t: float) -> str:
    return f"snapshot_t{t:.6g}.csv"


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def emit_run(output: RunOutput, out_dir) -> dict:
    """Write snapshots, time series, resolved config and run metadata."""
    out_dir = Path(out_dir)
    centers = output.config.grid.centers
    hashes = {}
    for snap in output.snapshots:
        name = snapshot_filename(snap.t)
        hashes[name] = emit_snapshot_csv(snap, centers, out_dir / name)
    hashes["timeseries.csv"] = emit_timeseries_csv(output, out_dir / "timeseries.csv")
    if not hasattr(output.config.initial, "shape"):
        hashes["resolved.ini"] = _write(out_dir / "resolved.ini", dump_config(output.config))
    meta = {
        "config": config_to_dict(output.config),
        "n_steps": output.n_steps,
        "lanesim_version": _version(),
        "outputs": hashes,
    }
    _write(out_dir / "run.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return meta
