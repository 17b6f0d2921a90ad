"""Lane-changing rates between neighbouring lanes.

``S_j`` is the flow from lane ``j`` to lane ``j + 1``. It is driven by the
velocity difference ``v_{j+1}(R_{j+1}) - v_j(R_j)`` and limited by the
free space in the receiving lane. ``R`` is a convolution of the density
(nonlocal modes) or the density itself (local mode). Lanes are 0-based;
the outermost rates vanish, so lane 0 only talks to lane 1 and so on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import LaneIndexOutOfRange, SemanticError
from .kernels import KernelSpec
from .velocity import VelocityModel

SOURCE_MODES = ("local", "nonlocal_forward", "nonlocal_symmetric")


@dataclass(frozen=True)
class SourceMode:
    variant: str = "local"
    kernel: Optional[KernelSpec] = None

    def __post_init__(self):
        if self.variant not in SOURCE_MODES:
            raise SemanticError(f"unknown source mode {self.variant!r}")
        if self.variant == "local":
            if self.kernel is not None:
                raise SemanticError("the local source takes no kernel")
            return
        if self.kernel is None:
            raise SemanticError(f"source mode {self.variant!r} needs a kernel")
        if (self.variant == "nonlocal_forward") != self.kernel.forward:
            raise SemanticError(
                f"kernel {self.kernel.family!r} does not match source mode {self.variant!r}")

    @property
    def nonlocal_(self) -> bool:
        return self.variant != "local"


def source_rate(rho_j, rho_j1, R_j, R_j1, law_j, law_j1):
    """Flow from lane j to lane j+1 (negative values flow back)."""
    d = law_j1.v(R_j1) - law_j.v(R_j)
    return (np.maximum(d, 0.0) * rho_j * (1.0 - rho_j1)
            - np.maximum(-d, 0.0) * rho_j1 * (1.0 - rho_j))


def pair_rates(rho: np.ndarray, R: np.ndarray, vel: VelocityModel) -> np.ndarray:
    """Rates ``S_j`` for the ``M - 1`` lane pairs, shape (M-1, K)."""
    rho = np.atleast_2d(rho)
    R = np.atleast_2d(R)
    M = rho.shape[0]
    out = np.empty((max(M - 1, 0),) + rho.shape[1:])
    for j in range(M - 1):
        out[j] = source_rate(rho[j], rho[j + 1], R[j], R[j + 1], vel.law(j), vel.law(j + 1))
    return out


def net_sources(rho: np.ndarray, R: np.ndarray, vel: VelocityModel) -> np.ndarray:
    """``S_{j-1} - S_j`` for every lane, with zero rates past the outer lanes."""
    S = pair_rates(rho, R, vel)
    M = np.atleast_2d(rho).shape[0]
    zero = np.zeros((1,) + S.shape[1:])
    padded = np.concatenate([zero, S, zero])
    return padded[:M] - padded[1:M + 1]


def net_source_column(j: int, states, convs, vel: VelocityModel) -> float:
    """Net source of lane ``j`` at one cell, from per-lane values there."""
    states = np.asarray(states, dtype=float)
    convs = np.asarray(convs, dtype=float)
    M = states.shape[0]
    if not 0 <= j < M:
        raise LaneIndexOutOfRange(f"lane {j} not in [0, {M})")
    gain = 0.0
    loss = 0.0
    if j > 0:
        gain = source_rate(states[j - 1], states[j], convs[j - 1], convs[j],
                           vel.law(j - 1), vel.law(j))
    if j < M - 1:
        loss = source_rate(states[j], states[j + 1], convs[j], convs[j + 1],
                           vel.law(j), vel.law(j + 1))
    return float(gain - loss)


def source_bound_check(states, convs, vel: VelocityModel) -> float:
    """``max |S_j| - V_max (rho_j + rho_{j+1})``; non-positive when the bound holds."""
    states = np.atleast_2d(np.asarray(states, dtype=float))
    if states.shape[0] < 2:
        return 0.0
    S = pair_rates(states, convs, vel)
    slack = np.abs(S) - vel.V_max * (states[:-1] + states[1:])
    return float(np.max(slack))
