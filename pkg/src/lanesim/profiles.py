"""Initial density profiles and their cell averages."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ProfileOutOfRange, SchemaError

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)

_DEFAULTS = {
    "sin_sq": {"lo": 0.0, "hi": 2.0},
    "bump_q": {"scale": 1.0, "shift": 0.0},
    "constant": {"value": None, "lo": -math.inf, "hi": math.inf},
    "riemann": {"left": None, "right": None, "x0": None, "lo": -math.inf, "hi": math.inf},
}


def q(x):
    """The quartic bump ``4 x^2 (1 - x)^2`` on (0, 1), zero elsewhere."""
    x = np.asarray(x, dtype=float)
    return np.where((x > 0) & (x < 1), 4.0 * x**2 * (1.0 - x) ** 2, 0.0)


@dataclass(frozen=True)
class ProfileSpec:
    """A named profile with numeric parameters, e.g. ``bump_q:scale=2,shift=0.5``.

    * ``sin_sq``: ``sin(pi x / 2)^2`` on ``(lo, hi)``
    * ``bump_q``: ``q(scale * x - shift)``
    * ``constant``: ``value`` on ``(lo, hi)``
    * ``riemann``: ``left`` on ``(lo, x0)``, ``right`` on ``[x0, hi)``
    """

    name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in _DEFAULTS:
            raise SchemaError("initial", f"unknown profile {self.name!r}")
        merged = dict(_DEFAULTS[self.name])
        for key, value in self.params.items():
            if key not in merged:
                raise SchemaError("initial", f"profile {self.name!r} has no parameter {key!r}")
            merged[key] = float(value)
        missing = [k for k, v in merged.items() if v is None]
        if missing:
            raise SchemaError("initial", f"profile {self.name!r} needs {', '.join(missing)}")
        object.__setattr__(self, "params", merged)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.name == "sin_sq":
            inside = (x > p["lo"]) & (x < p["hi"])
            return np.where(inside, np.sin(np.pi * x / 2.0) ** 2, 0.0)
        if self.name == "bump_q":
            return q(p["scale"] * x - p["shift"])
        inside = (x > p["lo"]) & (x < p["hi"])
        if self.name == "constant":
            return np.where(inside, p["value"], 0.0)
        return np.where(inside, np.where(x < p["x0"], p["left"], p["right"]), 0.0)

    def breakpoints(self) -> list:
        p = self.params
        if self.name == "bump_q":
            return sorted({p["shift"] / p["scale"], (1.0 + p["shift"]) / p["scale"]})
        pts = [p["lo"], p["hi"]]
        if self.name == "riemann":
            pts.append(p["x0"])
        return sorted(v for v in pts if math.isfinite(v))

    def describe(self) -> str:
        body = ",".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{self.name}:{body}" if body else self.name


def parse_profile(text: str) -> ProfileSpec:
    name, _, body = text.strip().partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in body.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise SchemaError("initial", f"expected key=value in {text!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise SchemaError("initial", f"bad number in {text!r}") from None
    return ProfileSpec(name.strip(), params)


def _gauss(f, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[..., None] + half[..., None] * _GL_NODES
    vals = f(x)
    return vals, (vals * _GL_WEIGHTS).sum(axis=-1) * half


def cell_averages(profile, edges: np.ndarray) -> np.ndarray:
    """Cell averages of ``profile`` over consecutive ``edges``.

    Each cell is split at the profile's breakpoints and integrated with a
    5-point Gauss-Legendre rule per piece.
    """
    a = edges[:-1]
    b = edges[1:]
    vals, integral = _gauss(profile, a, b)
    if np.any((vals < 0) | (vals > 1)):
        raise ProfileOutOfRange(f"profile {profile.describe()} leaves [0, 1]")
    bps = profile.breakpoints()
    split = set()
    for bp in bps:
        split.update(np.nonzero((a < bp) & (bp < b))[0].tolist())
    for k in sorted(split):
        cuts = np.asarray([a[k]] + [p for p in bps if a[k] < p < b[k]] + [b[k]])
        _, parts = _gauss(profile, cuts[:-1], cuts[1:])
        integral[k] = parts.sum()
    avg = integral / (b - a)
    if np.any((avg < 0) | (avg > 1)):
        raise ProfileOutOfRange(f"cell averages of {profile.describe()} leave [0, 1]")
    return avg
