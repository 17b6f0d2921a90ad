"""Checkers for the discrete properties of the scheme.

Everything here post-processes arrays the solver produced. States are
``(M, K)`` arrays (lanes by cells); ``boundary`` is ``"zero"`` or
``"periodic"`` and must match the run that produced them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GridMismatch, StateMismatch
from .flux import godunov_flux, kruzkov_entropy_flux_local, kruzkov_entropy_flux_nonlocal
from .sources import net_sources
from .velocity import VelocityModel

C_GRID = np.linspace(0.0, 1.0, 21)


def _rho(x) -> np.ndarray:
    return np.atleast_2d(np.asarray(getattr(x, "rho", x), dtype=float))


def mass_per_lane(state, dx: float) -> np.ndarray:
    return dx * _rho(state).sum(axis=-1)


def tv_per_lane(state, boundary: str = "zero") -> np.ndarray:
    """Total variation per lane, counting the jumps to the ghost cells."""
    rho = _rho(state)
    if boundary == "periodic":
        return np.abs(np.roll(rho, -1, axis=-1) - rho).sum(axis=-1)
    padded = np.pad(rho, [(0, 0), (1, 1)])
    return np.abs(np.diff(padded, axis=-1)).sum(axis=-1)


def l1_distance(a, b, dx: float) -> np.ndarray:
    """Per-lane ``dx * sum_k |a - b|`` between two snapshots on one mesh."""
    ra, rb = _rho(a), _rho(b)
    if ra.shape != rb.shape:
        raise GridMismatch(f"snapshot shapes differ: {ra.shape} vs {rb.shape}")
    return dx * np.abs(ra - rb).sum(axis=-1)


def lane_gap_l1(state, dx: float) -> float:
    """``sum_j ||rho_{j+1} - rho_j||_L1``."""
    rho = _rho(state)
    return float(dx * np.abs(np.diff(rho, axis=0)).sum())


def with_ghosts(rho: np.ndarray, boundary: str) -> np.ndarray:
    """Append one ghost cell on each side along the last axis."""
    if boundary == "periodic":
        return np.concatenate([rho[..., -1:], rho, rho[..., :1]], axis=-1)
    return np.pad(rho, [(0, 0)] * (rho.ndim - 1) + [(1, 1)])


def _sgn(x):
    return np.sign(x)  # sign(0) == 0


def _c_values(c) -> np.ndarray:
    return np.atleast_1d(np.asarray(c, dtype=float))


def entropy_residual_local(prev, mid, nxt, dt: float, dx: float, c, vel: VelocityModel,
                           r_nu, boundary: str = "zero", check: bool = True) -> np.ndarray:
    """Kruzkov entropy residual of one step with the Godunov flux.

    Returns an array of shape ``(len(c), M, K)``; the scheme guarantees all
    entries are non-positive. ``r_nu`` holds the convolution values (or the
    half-step densities for the local source) that fed the source.
    """
    prev, mid, nxt = _rho(prev), _rho(mid), _rho(nxt)
    lam = dt / dx
    M = prev.shape[0]
    net = net_sources(mid, _rho(r_nu), vel)
    g = with_ghosts(prev, boundary)
    if check:
        F = np.stack([godunov_flux(g[j, :-1], g[j, 1:], j, vel) for j in range(M)])
        _check_step(prev, mid, nxt, lam * (F[:, 1:] - F[:, :-1]), dt * net)
    out = []
    for c in _c_values(c):
        EF = np.stack([kruzkov_entropy_flux_local(g[j, :-1], g[j, 1:], c, j, vel)
                       for j in range(M)])
        res = (np.abs(nxt - c) - np.abs(prev - c) + lam * (EF[:, 1:] - EF[:, :-1])
               - dt * _sgn(nxt - c) * net)
        out.append(res)
    return np.stack(out)


def entropy_residual_nonlocal(prev, mid, nxt, dt: float, dx: float, c, vel: VelocityModel,
                              r_nu, r_iota, boundary: str = "zero",
                              check: bool = True) -> np.ndarray:
    """Kruzkov entropy residual of one step with the nonlocal flux.

    ``r_iota`` is the flux convolution of ``prev`` on cells ``-1 .. K-1``
    (shape ``(M, K + 1)``). Includes the ``c * (v(R_k) - v(R_{k-1}))``
    correction that appears because the flux depends on space through R.
    """
    prev, mid, nxt = _rho(prev), _rho(mid), _rho(nxt)
    r_iota = _rho(r_iota)
    M, K = prev.shape
    if r_iota.shape[-1] == K:
        ghost = r_iota[:, -1:] if boundary == "periodic" else r_iota[:, :1]
        r_iota = np.concatenate([ghost, r_iota], axis=-1)
    if r_iota.shape != (M, K + 1):
        raise StateMismatch(f"r_iota has shape {r_iota.shape}, expected {(M, K + 1)}")
    lam = dt / dx
    V = np.stack([vel.v(j, r_iota[j]) for j in range(M)])
    g = with_ghosts(prev, boundary)[:, :-1]  # cells -1 .. K-1
    net = net_sources(mid, _rho(r_nu), vel)
    if check:
        F = g * V
        _check_step(prev, mid, nxt, lam * (F[:, 1:] - F[:, :-1]), dt * net)
    out = []
    for c in _c_values(c):
        EF = V * np.abs(g - c)
        s = _sgn(nxt - c)
        res = (np.abs(nxt - c) - np.abs(prev - c) + lam * (EF[:, 1:] - EF[:, :-1])
               - dt * s * net + lam * s * c * (V[:, 1:] - V[:, :-1]))
        out.append(res)
    return np.stack(out)


def _check_step(prev, mid, nxt, conv_incr, src_incr, tol=1e-12):
    if prev.shape != mid.shape or mid.shape != nxt.shape:
        raise StateMismatch("states have different shapes")
    if np.max(np.abs(prev - conv_incr - mid), initial=0.0) > tol:
        raise StateMismatch("half-step state is not the convective update of the previous one")
    if np.max(np.abs(mid + src_incr - nxt), initial=0.0) > tol:
        raise StateMismatch("new state is not the relaxation update of the half-step state")


@dataclass
class EntropyReport:
    max_residual: float = -math.inf
    argmax: Optional[tuple] = None  # (lane, cell, step, c)
    n_violations: int = 0
    n_checked: int = 0
    tol: float = 1e-12

    def update(self, residual: np.ndarray, cs: np.ndarray, step: int):
        self.n_checked += residual.size
        self.n_violations += int(np.count_nonzero(residual > self.tol))
        i = int(np.argmax(residual))
        ci, lane, cell = np.unravel_index(i, residual.shape)
        value = float(residual[ci, lane, cell])
        if value > self.max_residual:
            self.max_residual = value
            self.argmax = (int(lane), int(cell), step, float(cs[ci]))

    @property
    def ok(self) -> bool:
        return self.n_violations == 0


def entropy_c_values(initial, extra=C_GRID) -> np.ndarray:
    """The 21-point grid on [0, 1] plus the extreme values of the initial data."""
    rho = _rho(initial)
    return np.unique(np.concatenate([extra, rho.min(axis=-1), rho.max(axis=-1)]))


def bv_growth_factor(t: float, calK: float, w_iota0: float = 0.0, calV: float = 0.0) -> float:
    """``exp(t (8 K + w_iota(0) V))``; the second term is absent for the local flux."""
    return math.exp(t * (8.0 * calK + w_iota0 * calV))


def time_lipschitz_bound(dt: float, t: float, mass0: float, tv0: float, vel: VelocityModel,
                         w_iota0: float = 0.0) -> float:
    """Upper bound on ``dx * sum |rho^{n+1} - rho^n|`` for one step."""
    growth = bv_growth_factor(t, vel.calK, w_iota0, vel.calV)
    return 2.0 * dt * (2.0 * vel.V_max * mass0 + vel.calV * growth * tv0)


@dataclass
class BoundTracker:
    """Largest signed violation seen for a named inequality ``lhs <= rhs``."""

    name: str
    worst: float = -math.inf
    where: Optional[int] = None

    def observe(self, lhs: float, rhs: float, step: int):
        slack = lhs - rhs
        if slack > self.worst:
            self.worst = slack
            self.where = step
