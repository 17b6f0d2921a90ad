"""Numerical fluxes for the convective step and their Kruzkov entropy fluxes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import SemanticError
from .kernels import KernelSpec
from .velocity import VelocityModel

FLUX_MODES = ("godunov", "nonlocal")


@dataclass(frozen=True)
class FluxMode:
    variant: str = "godunov"
    kernel: Optional[KernelSpec] = None

    def __post_init__(self):
        if self.variant not in FLUX_MODES:
            raise SemanticError(f"unknown flux mode {self.variant!r}")
        if self.variant == "godunov":
            if self.kernel is not None:
                raise SemanticError("the Godunov flux takes no kernel")
            return
        if self.kernel is None:
            raise SemanticError("the nonlocal flux needs a kernel")
        if not (self.kernel.forward and self.kernel.nonincreasing):
            raise SemanticError(
                f"flux kernel must be forward looking and non-increasing, "
                f"got {self.kernel.family!r}")

    @property
    def nonlocal_(self) -> bool:
        return self.variant == "nonlocal"


def godunov_flux(u, w, lane: int, vel: VelocityModel):
    """``min(f(min(u, theta)), f(max(w, theta)))`` for a unimodal flux."""
    th = vel.theta(lane)
    return np.minimum(vel.flux(lane, np.minimum(u, th)), vel.flux(lane, np.maximum(w, th)))


def nonlocal_flux(rho, r_iota, lane: int, vel: VelocityModel):
    return vel.v(lane, r_iota) * rho


def kruzkov_entropy_flux_local(u, w, c, lane: int, vel: VelocityModel):
    return (godunov_flux(np.maximum(u, c), np.maximum(w, c), lane, vel)
            - godunov_flux(np.minimum(u, c), np.minimum(w, c), lane, vel))


def kruzkov_entropy_flux_nonlocal(u, c, r_iota, lane: int, vel: VelocityModel):
    v = vel.v(lane, r_iota)
    return v * np.maximum(u, c) - v * np.minimum(u, c)
