"""Discrete convolution ``R_k = sum_h gamma_h r_{k+h+1}``.

Cells outside the mesh read as zero (``boundary="zero"``) or wrap around
(``boundary="periodic"``). Inputs may be 1-D (one lane) or 2-D with lanes
along the first axis; the convolution always runs along the last axis.
"""

from __future__ import annotations

import numpy as np

from .errors import KernelWiderThanDomain, LengthMismatch
from .kernels import DiscreteKernel


def shifted(r: np.ndarray, s: int, boundary: str = "zero") -> np.ndarray:
    """Array ``a`` with ``a[..., k] = r[..., k + s]``."""
    if boundary == "periodic":
        return np.roll(r, -s, axis=-1)
    n = r.shape[-1]
    out = np.zeros_like(r)
    if abs(s) >= n:
        return out
    if s >= 0:
        out[..., : n - s] = r[..., s:]
    else:
        out[..., -s:] = r[..., : n + s]
    return out


def _check(r: np.ndarray, kernel: DiscreteKernel):
    if kernel.width > r.shape[-1]:
        raise KernelWiderThanDomain(
            f"kernel stencil of {kernel.width} cells exceeds the {r.shape[-1]}-cell mesh")


def _padded(r, lo, hi, boundary):
    """``r`` extended by ``lo`` cells on the left and ``hi`` on the right."""
    n = r.shape[-1]
    if boundary == "periodic":
        return r[..., np.arange(-lo, n + hi) % n]
    return np.pad(r, [(0, 0)] * (r.ndim - 1) + [(lo, hi)])


def convolve(r, kernel: DiscreteKernel, boundary: str = "zero") -> np.ndarray:
    """Apply the discrete convolution to ``r``.

    The stencil is summed in ascending ``h`` with the kernel's integer
    numerators and divided once by the common denominator. Sums of data in
    {0, 1} are then exact, so a saturated stretch convolves to exactly 1
    and the result never leaves [0, 1] through rounding.
    """
    r = np.asarray(r, dtype=float)
    _check(r, kernel)
    n = r.shape[-1]
    lo = max(0, -(kernel.h_lo + 1))
    hi = max(0, kernel.h_hi + 1)
    padded = _padded(r, lo, hi, boundary)
    acc = np.zeros_like(r)
    for h, c in zip(kernel.indices, kernel.numerators):
        start = lo + int(h) + 1
        acc += c * padded[..., start:start + n]
    return acc / kernel.denominator


def l1_distance_of_convolutions(r, s, kernel: DiscreteKernel,
                                boundary: str = "zero") -> float:
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    if r.shape != s.shape:
        raise LengthMismatch(f"shapes differ: {r.shape} vs {s.shape}")
    return float(np.sum(np.abs(convolve(r, kernel, boundary) - convolve(s, kernel, boundary))))
