"""INI-style run configuration files.

Example::

    [run]
    T = 1.5
    snapshots = 0.75, 1.5

    [grid]
    x_min = 0
    x_max = 2
    dx = 0.01
    boundary = periodic

    [velocity]
    lane1 = linear:a=1.5
    lane2 = linear:a=2.5

    [initial]
    lane1 = sin_sq
    lane2 = sin_sq

    [source]
    type = nonlocal_forward
    kernel = constant_forward
    range = 0.5

A file holding only ``[run] preset = <name>`` expands to that preset's runs.
"""

from __future__ import annotations

import configparser
import math
from pathlib import Path
from typing import Union

from .errors import ConfigError, SchemaError, SemanticError
from .flux import FluxMode
from .grid import CflController, build_grid
from .kernels import KernelSpec
from .profiles import parse_profile
from .scenarios import PRESETS, preset
from .solver import RunConfig
from .sources import SourceMode
from .velocity import VelocityModel, parse_law

SCHEMA = {
    "run": {"name", "t", "snapshots", "timeseries_every", "preset"},
    "grid": {"x_min", "x_max", "dx", "boundary"},
    "cfl": {"mode", "cap", "fd_eps"},
    "velocity": None,  # lane<N> keys
    "initial": None,
    "flux": {"type", "kernel", "range"},
    "source": {"type", "kernel", "range"},
}
REQUIRED = {"run": ("t",), "grid": ("x_min", "x_max", "dx")}


def _float(section, key, raw) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise SchemaError(f"{section}.{key}", f"expected a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise SchemaError(f"{section}.{key}", f"expected a finite number, got {raw!r}")
    return value


def _lane_keys(parser, section) -> list:
    if not parser.has_section(section):
        raise SchemaError(section, "section is required")
    keys = list(parser[section])
    lanes = []
    for key in keys:
        if not (key.startswith("lane") and key[4:].isdigit() and int(key[4:]) >= 1):
            raise SchemaError(f"{section}.{key}", "keys must be lane1, lane2, ...")
        lanes.append(int(key[4:]))
    if sorted(lanes) != list(range(1, len(lanes) + 1)):
        raise SchemaError(section, "lanes must be numbered 1..M without gaps")
    if not lanes:
        raise SchemaError(section, "at least one lane is required")
    return [parser[section][f"lane{i}"] for i in range(1, len(lanes) + 1)]


def _kernel(parser, section):
    sec = parser[section]
    if "kernel" not in sec:
        raise SchemaError(f"{section}.kernel", "a nonlocal mode needs a kernel")
    if "range" not in sec:
        raise SchemaError(f"{section}.range", "a nonlocal mode needs a range")
    try:
        return KernelSpec(sec["kernel"].strip(), _float(section, "range", sec["range"]))
    except SchemaError as exc:
        raise SchemaError(f"{section}.{exc.key_path}", str(exc).split(": ", 1)[-1]) from None


def _read(source: Union[str, Path]) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise SchemaError("<file>", str(exc)) from None
    for section in parser.sections():
        if section not in SCHEMA:
            raise SchemaError(section, "unknown section")
        allowed = SCHEMA[section]
        if allowed is not None:
            for key in parser[section]:
                if key not in allowed:
                    raise SchemaError(f"{section}.{key}", "unknown key")
    return parser


def _preset_name(parser):
    if parser.has_section("run") and "preset" in parser["run"]:
        name = parser["run"]["preset"].strip()
        if name not in PRESETS:
            raise SchemaError("run.preset", f"unknown preset {name!r}")
        return name
    return None


def load_configs(source: Union[str, Path]) -> list:
    """All runs a file describes: one for explicit files, several for presets."""
    parser = _read(source)
    name = _preset_name(parser)
    if name is not None:
        return preset(name)
    return [_build(parser, Path(source).stem)]


def parse_config(source: Union[str, Path]) -> RunConfig:
    """Parse an explicit single-run configuration and apply defaults."""
    parser = _read(source)
    name = _preset_name(parser)
    if name is not None:
        runs = preset(name)
        if len(runs) != 1:
            raise SchemaError("run.preset",
                              f"preset {name!r} expands to {len(runs)} runs; use load_configs")
        return runs[0]
    return _build(parser, Path(source).stem)


def _build(parser, default_name: str) -> RunConfig:
    for section, keys in REQUIRED.items():
        for key in keys:
            if not parser.has_section(section) or key not in parser[section]:
                raise SchemaError(f"{section}.{key}", "required key is missing")
    run = parser["run"]
    grid_sec = parser["grid"]
    boundary = grid_sec.get("boundary", "zero").strip()
    if boundary not in ("zero", "periodic"):
        raise SchemaError("grid.boundary", f"expected zero or periodic, got {boundary!r}")
    grid = build_grid(_float("grid", "x_min", grid_sec["x_min"]),
                      _float("grid", "x_max", grid_sec["x_max"]),
                      _float("grid", "dx", grid_sec["dx"]), boundary)
    T = _float("run", "t", run["t"])
    snapshots = ()
    if "snapshots" in run and run["snapshots"].strip():
        snapshots = tuple(_float("run", "snapshots", s) for s in run["snapshots"].split(","))
    every = run.get("timeseries_every", "1")
    if not every.strip().isdigit() or int(every) < 1:
        raise SchemaError("run.timeseries_every", f"expected a positive integer, got {every!r}")

    cfl = CflController()
    if parser.has_section("cfl"):
        sec = parser["cfl"]
        mode = sec.get("mode", "adaptive").strip()
        if mode not in ("fixed", "adaptive"):
            raise SchemaError("cfl.mode", f"expected fixed or adaptive, got {mode!r}")
        try:
            cfl = CflController(mode, _float("cfl", "cap", sec.get("cap", "0.5")),
                                _float("cfl", "fd_eps", sec.get("fd_eps", "1e-6")))
        except ValueError as exc:
            raise SemanticError(f"cfl: {exc}") from None

    laws = [parse_law(s) for s in _lane_keys(parser, "velocity")]
    profiles = [parse_profile(s) for s in _lane_keys(parser, "initial")]
    if len(laws) != len(profiles):
        raise SemanticError(f"{len(laws)} velocity laws but {len(profiles)} initial profiles")

    flux = FluxMode()
    if parser.has_section("flux"):
        kind = parser["flux"].get("type", "godunov").strip()
        if kind not in ("godunov", "nonlocal"):
            raise SchemaError("flux.type", f"expected godunov or nonlocal, got {kind!r}")
        flux = FluxMode(kind, _kernel(parser, "flux") if kind == "nonlocal" else None)

    source = SourceMode()
    if parser.has_section("source"):
        kind = parser["source"].get("type", "local").strip()
        if kind not in ("local", "nonlocal_forward", "nonlocal_symmetric"):
            raise SchemaError("source.type", f"unknown source type {kind!r}")
        source = SourceMode(kind, None if kind == "local" else _kernel(parser, "source"))

    return RunConfig(grid=grid, T=T, velocity=VelocityModel(laws), initial=tuple(profiles),
                     flux=flux, source=source, cfl=cfl, snapshot_times=snapshots,
                     name=run.get("name", default_name).strip(), timeseries_every=int(every))


def config_to_dict(config: RunConfig) -> dict:
    """Fully resolved configuration as plain data."""
    g = config.grid
    initial = config.initial
    if hasattr(initial, "shape"):
        initial = {"cell_averages": [list(map(float, row)) for row in initial]}
    else:
        initial = [p.describe() for p in initial]

    def mode(m):
        out = {"type": m.variant}
        if m.kernel is not None:
            out.update(kernel=m.kernel.family, range=m.kernel.range)
        return out

    return {
        "name": config.name,
        "T": config.T,
        "snapshots": list(config.resolved_snapshots()),
        "timeseries_every": config.timeseries_every,
        "grid": {"x_min": g.x_min, "x_max": g.x_max, "dx": g.dx, "n_cells": g.n_cells,
                 "boundary": g.boundary},
        "cfl": {"mode": config.cfl.mode, "cap": config.cfl.cfl_cap,
                "fd_eps": config.cfl.fd_eps},
        "velocity": config.velocity.describe(),
        "initial": initial,
        "flux": mode(config.flux),
        "source": mode(config.source),
    }


def dump_config(config: RunConfig) -> str:
    """The resolved configuration in the file format ``parse_config`` reads."""
    if hasattr(config.initial, "shape"):
        raise ConfigError("configurations with explicit cell averages cannot be written as INI")
    d = config_to_dict(config)
    lines = ["[run]", f"name = {d['name']}", f"T = {d['T']!r}",
             "snapshots = " + ", ".join(repr(t) for t in d["snapshots"]),
             f"timeseries_every = {d['timeseries_every']}", "", "[grid]"]
    lines += [f"{k} = {d['grid'][k]!r}" for k in ("x_min", "x_max", "dx")]
    lines += [f"boundary = {d['grid']['boundary']}", "", "[cfl]",
              f"mode = {d['cfl']['mode']}", f"cap = {d['cfl']['cap']!r}",
              f"fd_eps = {d['cfl']['fd_eps']!r}", "", "[velocity]"]
    lines += [f"lane{i} = {s}" for i, s in enumerate(d["velocity"], 1)]
    lines += ["", "[initial]"]
    lines += [f"lane{i} = {s}" for i, s in enumerate(d["initial"], 1)]
    for section in ("flux", "source"):
        lines += ["", f"[{section}]"] + [f"{k} = {v}" for k, v in d[section].items()]
    return "\n".join(lines) + "\n"
