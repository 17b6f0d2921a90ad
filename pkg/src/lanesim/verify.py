"""Run a configuration while checking every discrete property on the fly."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagnostics import (BoundTracker, EntropyReport, bv_growth_factor, entropy_c_values,
                          entropy_residual_local, entropy_residual_nonlocal, lane_gap_l1,
                          mass_per_lane, time_lipschitz_bound, tv_per_lane)
from .kernels import kernel_at_zero
from .solver import RunConfig, StepRecord, run, validate_config
from .sources import source_bound_check

ENTROPY_TOL = 1e-12
MASS_TOL = 1e-12
CFL_TOL = 1e-14
OBSERVATION_TOL = 1e-10


@dataclass
class Check:
    check_name: str
    max_violation: float
    passed: bool
    enforced: bool = True

    def as_dict(self) -> dict:
        return {"check_name": self.check_name, "max_violation": self.max_violation + 0.0,
                "pass": self.passed, "enforced": self.enforced}


class PropertyMonitor:
    """Observer that accumulates the worst violation of each property."""

    def __init__(self, config: RunConfig, initial: np.ndarray):
        self.config = config
        self.dx = config.grid.dx
        self.boundary = config.grid.boundary
        self.vel = config.velocity
        self.rho0 = initial
        self.mass0 = float(mass_per_lane(initial, self.dx).sum())
        self.tv0 = float(tv_per_lane(initial, self.boundary).sum())
        self.gap0 = lane_gap_l1(initial, self.dx)
        self.cs = entropy_c_values(initial)
        self.w0 = kernel_at_zero(config.flux.kernel) if config.flux.nonlocal_ else 0.0
        self.entropy = EntropyReport(tol=ENTROPY_TOL)
        self.range = -math.inf
        self.mass = 0.0
        self.cfl = -math.inf
        self.bv = BoundTracker("bv_in_space")
        self.lip = BoundTracker("lipschitz_in_time")
        self.source = -math.inf
        self.tv_obs = BoundTracker("tv_nonincrease")
        self.gap_obs = BoundTracker("lane_gap_nonincrease")
        self.time = 0.0
        self.t_prev = 0.0

    def __call__(self, rec: StepRecord):
        cfg = self.config
        for arr in (rec.mid, rec.next):
            self.range = max(self.range, float(-arr.min()), float(arr.max() - 1.0))
        mass = float(mass_per_lane(rec.next, self.dx).sum())
        if self.mass0 > 0:
            self.mass = max(self.mass, abs(mass - self.mass0) / self.mass0)
        if not math.isnan(rec.speed):
            self.cfl = max(self.cfl, rec.dt / self.dx * rec.speed - cfg.cfl.cfl_cap)
        if cfg.flux.nonlocal_:
            res = entropy_residual_nonlocal(rec.prev, rec.mid, rec.next, rec.dt, self.dx,
                                            self.cs, self.vel, rec.r_nu, rec.r_iota,
                                            self.boundary)
        else:
            res = entropy_residual_local(rec.prev, rec.mid, rec.next, rec.dt, self.dx,
                                         self.cs, self.vel, rec.r_nu, self.boundary)
        self.entropy.update(res, self.cs, rec.n)
        t_n = rec.t - rec.dt
        tv = float(tv_per_lane(rec.next, self.boundary).sum())
        growth = bv_growth_factor(rec.t, self.vel.calK, self.w0, self.vel.calV)
        self.bv.observe(tv, growth * self.tv0 * (1 + 1e-12), rec.n)
        step_l1 = self.dx * float(np.abs(rec.next - rec.prev).sum())
        self.lip.observe(step_l1, time_lipschitz_bound(rec.dt, t_n, self.mass0, self.tv0,
                                                       self.vel, self.w0), rec.n)
        self.source = max(self.source, source_bound_check(rec.mid, rec.r_nu, self.vel))
        self.tv_obs.observe(tv, self.tv0 + OBSERVATION_TOL, rec.n)
        self.gap_obs.observe(lane_gap_l1(rec.next, self.dx), self.gap0 + OBSERVATION_TOL, rec.n)
        self.time += rec.dt

    def checks(self) -> list:
        T = self.config.T
        time_err = abs(self.time - T) / T if T > 0 else self.time
        out = [
            Check("invariance", self.range, self.range <= 0.0),
            Check("mass_conservation", self.mass, self.mass < MASS_TOL),
            Check("cfl", self.cfl, self.cfl <= CFL_TOL),
            Check("time_sum", time_err, time_err <= 1e-12),
            Check("entropy_inequality", self.entropy.max_residual, self.entropy.ok),
            Check("bv_in_space", self.bv.worst, self.bv.worst <= 0.0),
            Check("lipschitz_in_time", self.lip.worst, self.lip.worst <= 0.0),
            Check("source_bound", self.source, self.source <= 1e-14),
            Check("observation:tv_nonincrease", self.tv_obs.worst, self.tv_obs.worst <= 0.0,
                  enforced=False),
            Check("observation:lane_gap_nonincrease", self.gap_obs.worst,
                  self.gap_obs.worst <= 0.0, enforced=False),
        ]
        for c in out:
            if c.max_violation == -math.inf:
                c.max_violation = 0.0
        return out


def verify_config(config: RunConfig) -> list:
    initial = validate_config(config).rho
    monitor = PropertyMonitor(config, initial)
    run(config, observers=[monitor])
    return monitor.checks()


def all_enforced_pass(checks) -> bool:
    return all(c.passed for c in checks if c.enforced)
