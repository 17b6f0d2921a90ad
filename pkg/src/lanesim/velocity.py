"""Per-lane velocity laws and the constants derived from them.

Two families are shipped: Greenshields ``v(u) = a (1 - u)`` and the concave
quadratic ``v(u) = 1 - u**2``. Both are decreasing on [0, 1] (strictly for a > 0) with
``v(1) = 0``, and the flux ``f(u) = u v(u)`` is unimodal there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import LaneIndexOutOfRange, SchemaError


@dataclass(frozen=True)
class LinearGreenshields:
    a: float = 1.0

    def __post_init__(self):
        # a = 0 is allowed (parked lane); the time step rejects all-zero models
        if not (math.isfinite(self.a) and self.a >= 0):
            raise ValueError(f"Greenshields slope must be non-negative, got {self.a}")

    def v(self, u):
        return self.a * (1.0 - u)

    def dv(self, u):
        return np.full_like(np.asarray(u, dtype=float), -self.a)

    @property
    def theta(self) -> float:
        return 0.5

    @property
    def vmax(self) -> float:
        return self.a

    @property
    def dvmax(self) -> float:
        return self.a

    @property
    def d2vmax(self) -> float:
        return 0.0

    def describe(self) -> str:
        return f"linear:a={self.a!r}"


@dataclass(frozen=True)
class QuadraticConcave:
    def v(self, u):
        return 1.0 - u * u

    def dv(self, u):
        return -2.0 * np.asarray(u, dtype=float)

    @property
    def theta(self) -> float:
        return 1.0 / math.sqrt(3.0)

    @property
    def vmax(self) -> float:
        return 1.0

    @property
    def dvmax(self) -> float:
        return 2.0

    @property
    def d2vmax(self) -> float:
        return 2.0

    def describe(self) -> str:
        return "quadratic"


VelocityLaw = Union[LinearGreenshields, QuadraticConcave]


def parse_law(text: str) -> VelocityLaw:
    """Parse ``"linear:a=<float>"`` or ``"quadratic"``."""
    text = text.strip()
    if text == "quadratic":
        return QuadraticConcave()
    if text.startswith("linear"):
        _, _, params = text.partition(":")
        a = 1.0
        for item in filter(None, (p.strip() for p in params.split(","))):
            key, _, value = item.partition("=")
            if key.strip() != "a":
                raise SchemaError("velocity", f"unknown parameter {key!r} in {text!r}")
            try:
                a = float(value)
            except ValueError:
                raise SchemaError("velocity", f"bad number in {text!r}") from None
        try:
            return LinearGreenshields(a)
        except ValueError as exc:
            raise SchemaError("velocity", str(exc)) from None
    raise SchemaError("velocity", f"unknown velocity law {text!r}")


@dataclass(frozen=True)
class VelocityModel:
    """Velocity laws for lanes ``0 .. M-1`` plus the global bounds.

    ``V_max`` and ``Vp_max`` are sup-norms of ``v_j`` and ``v_j'`` over
    [0, 1] and all lanes; ``calV = V_max + Vp_max`` enters the CFL
    condition and ``calK = max(V_max, 2 Vp_max)`` is the Lipschitz constant
    of the lane-changing rate.
    """

    lanes: tuple

    def __init__(self, lanes: Sequence[VelocityLaw]):
        lanes = tuple(lanes)
        if not lanes:
            raise ValueError("at least one lane is required")
        object.__setattr__(self, "lanes", lanes)

    @property
    def n_lanes(self) -> int:
        return len(self.lanes)

    def law(self, j: int) -> VelocityLaw:
        if not 0 <= j < len(self.lanes):
            raise LaneIndexOutOfRange(f"lane {j} not in [0, {len(self.lanes)})")
        return self.lanes[j]

    def v(self, j: int, u):
        return self.law(j).v(u)

    def flux(self, j: int, u):
        return u * self.law(j).v(u)

    def theta(self, j: int) -> float:
        return self.law(j).theta

    @property
    def V_max(self) -> float:
        return max(law.vmax for law in self.lanes)

    @property
    def Vp_max(self) -> float:
        return max(law.dvmax for law in self.lanes)

    @property
    def Vpp_max(self) -> float:
        return max(law.d2vmax for law in self.lanes)

    @property
    def calV(self) -> float:
        return self.V_max + self.Vp_max

    @property
    def calK(self) -> float:
        return max(self.V_max, 2.0 * self.Vp_max)

    def lipschitz_source_constant(self) -> float:
        return self.calK

    def describe(self) -> list:
        return [law.describe() for law in self.lanes]
