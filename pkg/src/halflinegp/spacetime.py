"""Separable space-time covariance: Gaussian in space, half-line kernel in time.

``K((x, t), (z, s)) = exp(-shape * ||x - z||^2) * K_time(t, s)``

Distances are plain Euclidean norms on the raw coordinates (for the
intended gridded use these are degrees on a regional 1-degree grid; no
great-circle correction is applied).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend
from .halfline import HalfLineParams, kernel_value

__all__ = [
    "SpaceTimePoint",
    "GaussianParams",
    "ProductKernelParams",
    "gaussian_kernel",
    "product_kernel",
    "product_gram",
    "points_to_arrays",
]


@dataclass(frozen=True)
class SpaceTimePoint:
    """Spatial coordinates plus a nonnegative time coordinate (days)."""

    x: tuple[float, ...]
    t: float

    def __post_init__(self):
        if len(self.x) < 1:
            raise ValueError("spatial coordinate needs at least one dimension")
        if not all(math.isfinite(c) for c in self.x):
            raise ValueError(f"spatial coordinates must be finite, got {self.x!r}")
        if not math.isfinite(self.t) or self.t < 0.0:
            raise ValueError(f"time coordinate must be finite and >= 0, got {self.t!r}")


@dataclass(frozen=True)
class GaussianParams:
    """Shape coefficient of the spatial kernel ``exp(-shape * ||x-z||^2)``.

    ``shape`` plays the role of an inverse squared length scale; use
    :meth:`from_length_scale` for the ``exp(-||x-z||^2 / (2 l^2))``
    parameterization instead.
    """

    shape: float

    def __post_init__(self):
        if not math.isfinite(self.shape) or self.shape <= 0.0:
            raise ValueError(f"shape must be finite and > 0, got {self.shape!r}")

    @classmethod
    def from_length_scale(cls, length_scale: float) -> "GaussianParams":
        if not math.isfinite(length_scale) or length_scale <= 0.0:
            raise ValueError(f"length scale must be finite and > 0, got {length_scale!r}")
        return cls(shape=1.0 / (2.0 * length_scale * length_scale))


@dataclass(frozen=True)
class ProductKernelParams:
    """Spatial and temporal kernel parameters combined."""

    spatial: GaussianParams
    temporal: HalfLineParams


def gaussian_kernel(params: GaussianParams, x, z) -> float:
    """``exp(-shape * ||x - z||^2)``; in (0, 1], equal to 1 iff x == z."""
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if x.shape != z.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {z.shape}")
    d2 = float(np.sum((x - z) ** 2))
    return math.exp(-params.shape * d2)


def product_kernel(params: ProductKernelParams, a: SpaceTimePoint,
                   b: SpaceTimePoint) -> float:
    """Product of the spatial and temporal factors; positive, symmetric."""
    return (gaussian_kernel(params.spatial, a.x, b.x)
            * kernel_value(params.temporal, a.t, b.t))


def points_to_arrays(points: Sequence[SpaceTimePoint]) -> tuple[np.ndarray, np.ndarray]:
    """Split points into an (n, d) coordinate array and an (n,) time array."""
    if len(points) == 0:
        raise ValueError("empty point list")
    d = len(points[0].x)
    if any(len(p.x) != d for p in points):
        raise ValueError("inconsistent spatial dimensions across points")
    x = np.array([p.x for p in points], dtype=np.float64)
    t = np.array([p.t for p in points], dtype=np.float64)
    return x, t


_BLOCK_ROWS = 256


def product_gram(params: ProductKernelParams,
                 rows: Sequence[SpaceTimePoint],
                 cols: Sequence[SpaceTimePoint] | None = None) -> np.ndarray:
    """Dense covariance matrix of the product kernel.

    Temporal kernel values are computed once per distinct time pair (daily
    data has few distinct times, so this collapses the dominant cost), then
    combined with the spatial factor in row blocks to bound temporaries.
    Entries equal ``product_kernel`` on the same points up to rounding.
    """
    xa, ta = points_to_arrays(rows)
    xb, tb = points_to_arrays(cols) if cols is not None else (xa, ta)
    if xa.shape[1] != xb.shape[1]:
        raise ValueError("dimension mismatch between row and column points")
    hp = params.temporal

    ua, inv_a = np.unique(ta, return_inverse=True)
    ub, inv_b = np.unique(tb, return_inverse=True)
    t_log = _backend.halfline_log_gram(hp.alpha, hp.delta, hp.omega, ua, ub)

    out = np.empty((len(ta), len(tb)))
    shape = params.spatial.shape
    for i0 in range(0, len(ta), _BLOCK_ROWS):
        i1 = min(i0 + _BLOCK_ROWS, len(ta))
        diff = xa[i0:i1, None, :] - xb[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        np.exp(t_log[np.ix_(inv_a[i0:i1], inv_b)] - shape * d2, out=out[i0:i1])
    return out
