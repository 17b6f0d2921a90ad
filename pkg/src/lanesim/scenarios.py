"""Shipped experiment presets and the nu -> 0 error table.

The two-lane local-flux experiments run on the periodic mesh of [0, 2]:
the initial hump ``sin(pi x / 2)^2`` fills exactly one period there, and
that setting reproduces the published lane masses and error table. The
nonlocal-flux experiments use a zero boundary on [-1.5, 3.5], wide enough
that nothing reaches the edges before T = 1.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .diagnostics import l1_distance
from .flux import FluxMode
from .grid import CflController, build_grid
from .kernels import KernelSpec
from .profiles import ProfileSpec
from .solver import RunConfig, RunOutput, run
from .sources import SourceMode
from .velocity import LinearGreenshields, QuadraticConcave, VelocityModel

PRESET_VERSION = 1

NU_VALUES = (0.64, 0.32, 0.16, 0.08, 0.04, 0.02)

# Published L1 distances to the local-source run at T = 1.5:
# nu -> (forward lane 1, forward lane 2, symmetric lane 1, symmetric lane 2)
PUBLISHED_ERRORS = {
    0.64: (0.0311, 0.0313, 0.0330, 0.0310),
    0.32: (0.0239, 0.0167, 0.0208, 0.0198),
    0.16: (0.0159, 0.0089, 0.0131, 0.0120),
    0.08: (0.0095, 0.0049, 0.0078, 0.0066),
    0.04: (0.0054, 0.0026, 0.0045, 0.0035),
    0.02: (0.0030, 0.0013, 0.0023, 0.0016),
}
TABLE1_TOLERANCE = 0.15


def two_lane_base(T: float = 1.5, snapshots=(0.75, 1.5)) -> RunConfig:
    return RunConfig(
        grid=build_grid(0.0, 2.0, 0.01, "periodic"),
        T=T,
        velocity=VelocityModel([LinearGreenshields(1.5), LinearGreenshields(2.5)]),
        initial=(ProfileSpec("sin_sq"), ProfileSpec("sin_sq")),
        cfl=CflController("adaptive"),
        snapshot_times=tuple(snapshots),
        name="local",
    )


def forward_constant(nu: float) -> SourceMode:
    return SourceMode("nonlocal_forward", KernelSpec("constant_forward", nu))


def symmetric_constant(nu: float) -> SourceMode:
    return SourceMode("nonlocal_symmetric", KernelSpec("constant_symmetric", nu))


def two_lane_local_flux() -> list:
    base = two_lane_base()
    return [
        base,
        replace(base, source=forward_constant(0.5), name="forward_nu0.5"),
        replace(base, source=symmetric_constant(0.25), name="symmetric_nu0.25"),
    ]


def nu_sweep() -> list:
    base = two_lane_base(snapshots=(1.5,))
    runs = [base]
    for nu in NU_VALUES:
        runs.append(replace(base, source=forward_constant(nu), name=f"forward_nu{nu}"))
    for nu in NU_VALUES:
        runs.append(replace(base, source=symmetric_constant(nu), name=f"symmetric_nu{nu}"))
    return runs


def bump_base(T: float = 1.0) -> RunConfig:
    return RunConfig(
        grid=build_grid(-1.5, 3.5, 0.01, "zero"),
        T=T,
        velocity=VelocityModel([QuadraticConcave(), QuadraticConcave()]),
        initial=(ProfileSpec("bump_q", {"scale": 2.0, "shift": 0.5}), ProfileSpec("bump_q")),
        flux=FluxMode("nonlocal", KernelSpec("linear_forward", 0.5)),
        source=SourceMode("nonlocal_forward", KernelSpec("linear_forward", 0.5)),
        cfl=CflController("adaptive"),
        snapshot_times=(0.5, 1.0),
        name="nonlocal_flux",
    )


def nonlocal_flux_bump() -> list:
    base = bump_base()
    return [replace(base, flux=FluxMode("godunov"), name="local_flux"), base]


def source_kernel_cases() -> list:
    base = bump_base()
    return [
        replace(base, name="a_symmetric_nu0.25",
                source=SourceMode("nonlocal_symmetric", KernelSpec("linear_symmetric", 0.25))),
        replace(base, name="b_symmetric_nu0.5",
                source=SourceMode("nonlocal_symmetric", KernelSpec("linear_symmetric", 0.5))),
        replace(base, name="c_forward_nu0.5",
                source=SourceMode("nonlocal_forward", KernelSpec("linear_forward", 0.5))),
    ]


PRESETS = {
    "two_lane_local_flux": two_lane_local_flux,
    "table1": nu_sweep,
    "nu_sweep": nu_sweep,
    "nonlocal_flux_bump": nonlocal_flux_bump,
    "source_kernel_cases": source_kernel_cases,
}


def preset(name: str) -> list:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def worker_count(requested: Optional[int] = None) -> int:
    n = requested or os.cpu_count() or 1
    cap = os.environ.get("LANESIM_THREADS")
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def run_many(configs: Sequence[RunConfig], workers: Optional[int] = None) -> list:
    """Run independent configurations, in worker processes when allowed."""
    n = min(worker_count(workers), len(configs))
    if n <= 1:
        return [run(c) for c in configs]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(run, configs))


@dataclass(frozen=True)
class Table1Row:
    nu: float
    kernel: str
    lane: int
    error: float
    reference: float

    @property
    def rel_dev(self) -> float:
        return (self.error - self.reference) / self.reference

    @property
    def flagged(self) -> bool:
        return abs(self.rel_dev) > TABLE1_TOLERANCE


def table1_rows(outputs: Sequence[RunOutput], T: float = 1.5) -> list:
    by_name = {o.config.name: o for o in outputs}
    ref = by_name["local"].snapshot(T)
    dx = by_name["local"].config.grid.dx
    rows = []
    for col, kernel in enumerate(("forward", "symmetric")):
        for nu in NU_VALUES:
            err = l1_distance(by_name[f"{kernel}_nu{nu}"].snapshot(T), ref, dx)
            for lane in range(2):
                rows.append(Table1Row(nu, kernel, lane + 1, float(err[lane]),
                                      PUBLISHED_ERRORS[nu][2 * col + lane]))
    return rows


def reproduce_table1(workers: Optional[int] = None) -> list:
    return table1_rows(run_many(nu_sweep(), workers))


def error_matrix(rows: Sequence[Table1Row]) -> np.ndarray:
    """Errors as a (6, 4) array ordered like the published table."""
    out = np.empty((len(NU_VALUES), 4))
    for r in rows:
        col = (0 if r.kernel == "forward" else 2) + r.lane - 1
        out[NU_VALUES.index(r.nu), col] = r.error
    return out
