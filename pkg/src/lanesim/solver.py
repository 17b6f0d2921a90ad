"""Godunov-type splitting scheme for the multilane model.

Each step first advances every lane with a conservative convective update
(local Godunov flux, or the nonlocal flux ``rho v(R_iota)``) and then
applies the lane-changing source pointwise with the convolution of the
half-step density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .convolution import convolve
from .diagnostics import mass_per_lane, tv_per_lane, with_ghosts
from .errors import (CflViolation, KernelWiderThanDomain, RangeViolation, SemanticError,
                     SnapshotTimeOutOfRange)
from .flux import FluxMode, godunov_flux
from .grid import CflController, Grid1D, local_speed_bound
from .kernels import DiscreteKernel, discretize_kernel
from .profiles import ProfileSpec, cell_averages
from .sources import SourceMode, net_sources
from .velocity import VelocityModel

CFL_SLACK = 1e-12


@dataclass(frozen=True)
class LaneGridState:
    t: float
    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.array(self.rho, dtype=float, ndmin=2)
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def n_lanes(self) -> int:
        return self.rho.shape[0]


InitialData = Union[Sequence[ProfileSpec], np.ndarray]


@dataclass(frozen=True)
class RunConfig:
    grid: Grid1D
    T: float
    velocity: VelocityModel
    initial: InitialData
    flux: FluxMode = FluxMode()
    source: SourceMode = SourceMode()
    cfl: CflController = CflController()
    snapshot_times: tuple = ()
    name: str = "run"
    timeseries_every: int = 1

    def resolved_snapshots(self) -> tuple:
        times = tuple(sorted(set(float(t) for t in self.snapshot_times))) or (float(self.T),)
        for t in times:
            if t < 0 or t > self.T:
                raise SnapshotTimeOutOfRange(f"snapshot time {t} outside [0, {self.T}]")
        return times

    def kernels(self) -> tuple[Optional[DiscreteKernel], Optional[DiscreteKernel]]:
        """Discrete (source, flux) kernels, ``None`` where the mode is local."""
        src = discretize_kernel(self.source.kernel, self.grid.dx) if self.source.nonlocal_ else None
        flx = discretize_kernel(self.flux.kernel, self.grid.dx) if self.flux.nonlocal_ else None
        return src, flx

    def max_kernel_range(self) -> float:
        ranges = [m.kernel.range for m in (self.source, self.flux) if m.kernel is not None]
        return max(ranges, default=0.0)


def init_from_profile(profiles: Sequence[ProfileSpec], grid: Grid1D) -> LaneGridState:
    """Cell averages of one profile per lane at ``t = 0``."""
    edges = grid.interfaces
    return LaneGridState(0.0, np.stack([cell_averages(p, edges) for p in profiles]))


def initial_state(config: RunConfig) -> LaneGridState:
    if isinstance(config.initial, np.ndarray):
        return LaneGridState(0.0, config.initial)
    return init_from_profile(config.initial, config.grid)


def validate_config(config: RunConfig) -> LaneGridState:
    """Check a configuration and return its initial state."""
    if config.T < 0:
        raise SemanticError(f"final time must be non-negative, got {config.T}")
    config.resolved_snapshots()
    state = initial_state(config)
    M, K = state.rho.shape
    if M != config.velocity.n_lanes:
        raise SemanticError(
            f"{M} initial profiles for {config.velocity.n_lanes} velocity laws")
    if K != config.grid.n_cells:
        raise SemanticError(f"initial data has {K} cells, mesh has {config.grid.n_cells}")
    if np.any((state.rho < 0) | (state.rho > 1)):
        raise SemanticError("initial densities must lie in [0, 1]")
    for kernel in config.kernels():
        if kernel is not None and kernel.width > K:
            raise KernelWiderThanDomain(
                f"kernel stencil of {kernel.width} cells exceeds the {K}-cell mesh")
    if config.grid.boundary == "zero":
        _check_margin(config, state)
    return state


def _check_margin(config: RunConfig, state: LaneGridState):
    occupied = np.nonzero(state.rho.max(axis=0) > 0)[0]
    if occupied.size == 0:
        return
    g = config.grid
    need = config.velocity.V_max * config.T + config.max_kernel_range()
    left = g.x_min + occupied[0] * g.dx - g.x_min
    right = g.x_max - (g.x_min + (occupied[-1] + 1) * g.dx)
    if min(left, right) < need - 1e-9:
        raise SemanticError(
            f"initial support leaves margins {left:.6g}/{right:.6g} to the domain edges; "
            f"at least {need:.6g} is needed so that the zero boundary stays inactive")


def _check_range(rho: np.ndarray, what: str):
    bad = (rho < 0) | (rho > 1)
    if np.any(bad):
        j, k = np.argwhere(bad)[0]
        raise RangeViolation(f"{what}: density {rho[j, k]!r} at lane {j}, cell {k}")


def flux_convolution(rho: np.ndarray, kernel: DiscreteKernel, boundary: str) -> np.ndarray:
    """Flux-kernel convolution on cells ``-1 .. K-1`` (ghost cell first)."""
    if boundary == "periodic":
        r = convolve(rho, kernel, boundary)
        return np.concatenate([r[:, -1:], r], axis=1)
    padded = np.pad(rho, [(0, 0), (1, 0)])
    return convolve(padded, kernel, boundary)


def convective_step(rho: np.ndarray, dt: float, flux_mode: FluxMode, vel: VelocityModel,
                    grid: Grid1D, flux_kernel: Optional[DiscreteKernel] = None,
                    cfl_cap: float = 0.5, fd_eps: float = 1e-6):
    """Half-step densities and, for the nonlocal flux, the ``R_iota`` field used.

    Raises ``CflViolation`` when ``dt`` is too large for the velocities that
    actually enter the update.
    """
    rho = np.atleast_2d(rho)
    lam = dt / grid.dx
    M = rho.shape[0]
    r_iota = None
    if flux_mode.nonlocal_:
        r_iota = flux_convolution(rho, flux_kernel, grid.boundary)
        args = [np.concatenate([rho[j], r_iota[j]]) for j in range(M)]
    else:
        args = list(rho)
    if lam * local_speed_bound(vel, args, fd_eps) > cfl_cap + CFL_SLACK:
        raise CflViolation(f"dt={dt} violates the CFL bound {cfl_cap} on dx={grid.dx}")
    g = with_ghosts(rho, grid.boundary)
    if r_iota is None:
        F = np.stack([godunov_flux(g[j, :-1], g[j, 1:], j, vel) for j in range(M)])
    else:
        V = np.stack([vel.v(j, r_iota[j]) for j in range(M)])
        F = g[:, :-1] * V
    mid = rho - lam * (F[:, 1:] - F[:, :-1])
    _check_range(mid, "convective step")
    return mid, r_iota


def relaxation_step(mid: np.ndarray, dt: float, source_mode: SourceMode, vel: VelocityModel,
                    grid: Grid1D, source_kernel: Optional[DiscreteKernel] = None):
    """Apply the lane-changing source; returns ``(rho_next, R_nu)``."""
    mid = np.atleast_2d(mid)
    if source_mode.nonlocal_:
        R = convolve(mid, source_kernel, grid.boundary)
    else:
        R = mid
    nxt = mid + dt * net_sources(mid, R, vel)
    _check_range(nxt, "relaxation step")
    return nxt, R


@dataclass
class StepRecord:
    """Everything one step produced; handed to observers."""

    n: int
    t: float
    dt: float
    speed: float
    prev: np.ndarray
    mid: np.ndarray
    next: np.ndarray
    r_nu: np.ndarray
    r_iota: Optional[np.ndarray]


class Simulation:
    """Stepper for one configuration; ``run`` drives it to the final time."""

    def __init__(self, config: RunConfig, state: Optional[LaneGridState] = None,
                 validate: bool = True):
        self.config = config
        if state is None:
            state = validate_config(config) if validate else initial_state(config)
        self.state = state
        self.n = 0
        self.source_kernel, self.flux_kernel = config.kernels()

    @property
    def grid(self) -> Grid1D:
        return self.config.grid

    def _sampled_convolutions(self, rho):
        out = []
        if self.source_kernel is not None:
            out.append(convolve(rho, self.source_kernel, self.grid.boundary))
        if self.flux_kernel is not None:
            out.append(flux_convolution(rho, self.flux_kernel, self.grid.boundary))
        return out

    def propose_dt(self, remaining: float) -> tuple[float, float]:
        rho = self.state.rho
        cfl = self.config.cfl
        convs = self._sampled_convolutions(rho) if cfl.mode == "adaptive" else None
        return cfl.next_dt(rho, self.grid, self.config.velocity, remaining, convs)

    def step(self, dt: Optional[float] = None, t_next: Optional[float] = None) -> StepRecord:
        """Advance one step. Without ``dt`` the CFL controller picks it.

        ``t_next`` pins the new time exactly (used when landing on a
        snapshot); otherwise the time is ``t + dt``.
        """
        cfg = self.config
        speed = math.nan
        if dt is None:
            dt, speed = self.propose_dt(math.inf)
        prev = self.state.rho
        mid, r_iota = convective_step(prev, dt, cfg.flux, cfg.velocity, self.grid,
                                      self.flux_kernel, cfg.cfl.cfl_cap, cfg.cfl.fd_eps)
        nxt, r_nu = relaxation_step(mid, dt, cfg.source, cfg.velocity, self.grid,
                                    self.source_kernel)
        t = self.state.t + dt if t_next is None else t_next
        self.n += 1
        self.state = LaneGridState(t, nxt)
        return StepRecord(self.n, t, dt, speed, prev, mid, self.state.rho, r_nu, r_iota)


@dataclass
class RunOutput:
    config: RunConfig
    snapshots: list
    times: np.ndarray
    masses: np.ndarray
    tvs: np.ndarray
    dts: np.ndarray
    speeds: np.ndarray

    @property
    def final(self) -> LaneGridState:
        return self.snapshots[-1]

    def snapshot(self, t: float) -> LaneGridState:
        for s in self.snapshots:
            if s.t == t:
                return s
        raise KeyError(f"no snapshot at t={t}")

    @property
    def n_steps(self) -> int:
        return len(self.dts)


Observer = Callable[[StepRecord], None]


def run(config: RunConfig, observers: Sequence[Observer] = ()) -> RunOutput:
    """Integrate ``config`` to its final time, landing exactly on snapshots."""
    sim = Simulation(config)
    targets = config.resolved_snapshots()
    boundary = config.grid.boundary
    dx = config.grid.dx
    every = max(1, int(config.timeseries_every))

    snapshots = []
    times, masses, tvs = [], [], []
    dts, speeds = [], []

    def record():
        times.append(sim.state.t)
        masses.append(mass_per_lane(sim.state.rho, dx))
        tvs.append(tv_per_lane(sim.state.rho, boundary))

    record()
    if targets[0] == 0.0:
        snapshots.append(sim.state)
    for target in targets:
        while sim.state.t < target:
            remaining = target - sim.state.t
            dt, speed = sim.propose_dt(remaining)
            landing = dt >= remaining
            rec = sim.step(dt, t_next=target if landing else None)
            rec.speed = speed
            dts.append(dt)
            speeds.append(speed)
            for obs in observers:
                obs(rec)
            if sim.n % every == 0 or (landing and target == targets[-1]):
                record()
        if not snapshots or snapshots[-1].t != target:
            snapshots.append(sim.state)
    return RunOutput(config, snapshots, np.asarray(times), np.asarray(masses),
                     np.asarray(tvs), np.asarray(dts), np.asarray(speeds))


def with_initial(config: RunConfig, rho: np.ndarray, **changes) -> RunConfig:
    """Copy of ``config`` started from explicit cell averages."""
    return replace(config, initial=np.asarray(rho, dtype=float), **changes)
