"""Multilane traffic simulation with nonlocal lane-changing rates.

Finite-volume Godunov-type splitting scheme for coupled LWR lanes whose
lane-changing rate depends on convolved densities, optionally with a
nonlocal (look-ahead) flux, plus checkers for the scheme's discrete
properties.
"""

from .convolution import convolve
from .diagnostics import l1_distance, mass_per_lane, tv_per_lane
from .flux import FluxMode, godunov_flux, nonlocal_flux
from .grid import CflController, Grid1D, adaptive_dt, build_grid, fixed_dt
from .kernels import DiscreteKernel, KernelSpec, discretize_kernel, kernel_at_zero
from .profiles import ProfileSpec
from .solver import LaneGridState, RunConfig, RunOutput, Simulation, run
from .sources import SourceMode, source_rate
from .velocity import LinearGreenshields, QuadraticConcave, VelocityModel

__all__ = [
    "CflController", "DiscreteKernel", "FluxMode", "Grid1D", "KernelSpec", "LaneGridState",
    "LinearGreenshields", "ProfileSpec", "QuadraticConcave", "RunConfig", "RunOutput",
    "Simulation", "SourceMode", "VelocityModel", "adaptive_dt", "build_grid", "convolve",
    "discretize_kernel", "fixed_dt", "godunov_flux", "kernel_at_zero", "l1_distance",
    "mass_per_lane", "nonlocal_flux", "run", "source_rate", "tv_per_lane",
]
