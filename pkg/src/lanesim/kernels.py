"""Analytic kernel families and their cell-averaged discrete weights.

Weights are exact cell integrals of the kernel. Because the range is
required to be ``n`` whole cells, they reduce to rationals in ``n``:

====================  ======================  ==========================
family                kernel on its support   weight for index h
====================  ======================  ==========================
constant_forward      1/nu on [0, nu]         1/n
linear_forward        2 (nu - x) / nu^2       (2 (n - h) - 1) / n^2
linear_symmetric      (nu - |x|) / nu^2       (2 (n - |h + 1/2|)) / (2 n^2)
constant_symmetric    1/(2 nu) on [-nu, nu]   1/(2n)
====================  ======================  ==========================
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import RangeNotMultipleOfDx, RangeTooSmall, SchemaError

FAMILIES = ("constant_forward", "linear_forward", "linear_symmetric", "constant_symmetric")


@dataclass(frozen=True)
class KernelSpec:
    family: str
    range: float

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise SchemaError("kernel", f"unknown kernel family {self.family!r}")
        if not self.range > 0:
            raise SchemaError("range", f"kernel range must be positive, got {self.range}")

    @property
    def forward(self) -> bool:
        return self.family.endswith("_forward")

    @property
    def nonincreasing(self) -> bool:
        """Whether the kernel is non-increasing on its support."""
        return self.forward

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, self.range) if self.forward else (-self.range, self.range)

    def __call__(self, x):
        """Evaluate the kernel pointwise; zero outside the support."""
        x = np.asarray(x, dtype=float)
        nu = self.range
        lo, hi = self.support
        inside = (x >= lo) & (x <= hi)
        if self.family == "constant_forward":
            w = np.full_like(x, 1.0 / nu)
        elif self.family == "linear_forward":
            w = 2.0 * (nu - x) / nu**2
        elif self.family == "linear_symmetric":
            w = (nu - np.abs(x)) / nu**2
        else:
            w = np.full_like(x, 0.5 / nu)
        return np.where(inside, w, 0.0)


@dataclass(frozen=True)
class DiscreteKernel:
    """Weights ``numerators[i] / denominator`` for indices ``h = h_lo + i``.

    The shipped families have rational weights with integer numerators;
    keeping them separate lets the convolution sum exactly.
    """

    numerators: np.ndarray = field(repr=False)
    denominator: float
    h_lo: int
    h_hi: int
    spec: KernelSpec | None = None

    def __post_init__(self):
        c = np.asarray(self.numerators, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "numerators", c)
        if c.size != self.h_hi - self.h_lo + 1:
            raise ValueError("weight count does not match index range")

    @property
    def gammas(self) -> np.ndarray:
        g = self.numerators / self.denominator
        g.setflags(write=False)
        return g

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.h_lo, self.h_hi + 1)

    @property
    def width(self) -> int:
        return self.numerators.size


def cells_in_range(spec: KernelSpec, dx: float) -> int:
    ratio = spec.range / dx
    n = round(ratio)
    if ratio < 1 - 1e-9:
        raise RangeTooSmall(f"kernel range {spec.range} is shorter than one cell ({dx})")
    if abs(ratio - n) > 1e-9 * max(1.0, ratio):
        raise RangeNotMultipleOfDx(
            f"kernel range {spec.range} is not an integer multiple of dx={dx}")
    return n


def discretize_kernel(spec: KernelSpec, dx: float) -> DiscreteKernel:
    n = cells_in_range(spec, dx)
    if spec.forward:
        h = np.arange(0, n)
    else:
        h = np.arange(-n, n)
    if spec.family == "constant_forward":
        c, d = np.ones(n), n
    elif spec.family == "linear_forward":
        c, d = 2.0 * (n - h) - 1.0, n**2
    elif spec.family == "linear_symmetric":
        c, d = np.where(h < 0, 2.0 * (n + h) + 1.0, 2.0 * (n - h) - 1.0), 2 * n**2
    else:
        c, d = np.ones(2 * n), 2 * n
    return DiscreteKernel(c, float(d), int(h[0]), int(h[-1]), spec)


def kernel_at_zero(spec: KernelSpec) -> float:
    nu = spec.range
    return {
        "constant_forward": 1.0 / nu,
        "linear_forward": 2.0 / nu,
        "linear_symmetric": 1.0 / nu,
        "constant_symmetric": 0.5 / nu,
    }[spec.family]
