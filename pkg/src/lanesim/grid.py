"""Uniform mesh and CFL-constrained time-step selection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import DegenerateVelocity, InvalidCellWidth, NonIntegerCellCount
from .velocity import VelocityModel

BOUNDARIES = ("zero", "periodic")


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    dx: float
    n_cells: int
    boundary: str = "zero"

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_cells + 1) * self.dx

    @property
    def periodic(self) -> bool:
        return self.boundary == "periodic"


def build_grid(x_min: float, x_max: float, dx: float, boundary: str = "zero") -> Grid1D:
    """Build a mesh of ``(x_max - x_min) / dx`` cells.

    The cell width must lie in (0, 1) and the domain must hold an integer
    number of cells.
    """
    if not (dx > 0 and dx < 1):
        raise InvalidCellWidth(f"cell width must satisfy 0 < dx < 1, got {dx}")
    if not x_max > x_min:
        raise ValueError(f"empty domain [{x_min}, {x_max}]")
    if boundary not in BOUNDARIES:
        raise ValueError(f"unknown boundary {boundary!r}; expected one of {BOUNDARIES}")
    ratio = (x_max - x_min) / dx
    n = round(ratio)
    if n < 1 or abs(ratio - n) > 1e-9 * max(1.0, ratio):
        raise NonIntegerCellCount(
            f"domain length {x_max - x_min} is not an integer multiple of dx={dx}")
    return Grid1D(float(x_min), float(x_max), float(dx), int(n), boundary)


def fixed_dt(grid: Grid1D, vel: VelocityModel, cfl_cap: float = 0.5) -> float:
    """Time step ``cfl_cap * dx / calV`` from the global velocity bounds."""
    calV = vel.calV
    if calV <= 0:
        raise DegenerateVelocity("V_max + V'_max vanishes")
    return cfl_cap * grid.dx / calV


def local_speed_bound(vel: VelocityModel, samples: Iterable[np.ndarray],
                      fd_eps: float = 1e-6) -> float:
    """Estimate ``max_j (max |v_j| + max |v_j'|)`` over sampled densities.

    ``samples`` yields one array of density arguments per lane. The
    derivative is a one-sided finite difference kept inside [0, 1]. The
    estimate never exceeds the global bound ``vel.calV``.
    """
    best = 0.0
    for j, u in enumerate(samples):
        u = np.unique(np.clip(np.asarray(u, dtype=float).ravel(), 0.0, 1.0))
        if u.size == 0:
            continue
        v = vel.v(j, u)
        lo = np.where(u + fd_eps <= 1.0, u, u - fd_eps)
        dq = np.abs(vel.v(j, lo + fd_eps) - vel.v(j, lo)) / fd_eps
        best = max(best, float(np.max(np.abs(v)) + np.max(dq)))
    return min(best, vel.calV)


def adaptive_dt(rho: np.ndarray, grid: Grid1D, vel: VelocityModel, remaining: float,
                cfl_cap: float = 0.5, fd_eps: float = 1e-6,
                convolved: Optional[Iterable[np.ndarray]] = None) -> float:
    """CFL step from the densities present at the current time level.

    ``rho`` has shape (M, K); ``convolved`` optionally supplies further
    (M, K) arrays of convolution values that also act as velocity
    arguments. The step is clamped to ``remaining``.
    """
    rho = np.atleast_2d(rho)
    fields = [rho] + [np.atleast_2d(c) for c in (convolved or ())]
    per_lane = [np.concatenate([f[j] for f in fields]) for j in range(rho.shape[0])]
    calV = local_speed_bound(vel, per_lane, fd_eps)
    if calV <= 0:
        raise DegenerateVelocity("local speed bound vanishes")
    return min(cfl_cap * grid.dx / calV, remaining)


@dataclass(frozen=True)
class CflController:
    mode: str = "adaptive"
    cfl_cap: float = 0.5
    fd_eps: float = 1e-6

    def __post_init__(self):
        if self.mode not in ("fixed", "adaptive"):
            raise ValueError(f"unknown CFL mode {self.mode!r}")
        if not 0 < self.cfl_cap <= 0.5:
            raise ValueError(f"cfl_cap must lie in (0, 1/2], got {self.cfl_cap}")
        if not self.fd_eps > 0:
            raise ValueError("fd_eps must be positive")

    def speed(self, rho, vel: VelocityModel, convolved=None) -> float:
        """The speed bound that the next step is sized against."""
        if self.mode == "fixed":
            return vel.calV
        rho = np.atleast_2d(rho)
        fields = [rho] + [np.atleast_2d(c) for c in (convolved or ())]
        return local_speed_bound(
            vel, [np.concatenate([f[j] for f in fields]) for j in range(rho.shape[0])],
            self.fd_eps)

    def next_dt(self, rho, grid: Grid1D, vel: VelocityModel, remaining: float,
                convolved=None) -> tuple[float, float]:
        """Return ``(dt, speed_used)``; ``dt`` never exceeds ``remaining``."""
        speed = self.speed(rho, vel, convolved)
        if speed <= 0:
            raise DegenerateVelocity("speed bound vanishes")
        dt = self.cfl_cap * grid.dx / speed
        return min(dt, remaining), speed


def cfl_number(dt: float, dx: float, speed: float) -> float:
    return dt / dx * speed



__all__ = ["Grid1D", "build_grid", "fixed_dt", "adaptive_dt", "CflController",
           "local_speed_bound", "cfl_number"]
