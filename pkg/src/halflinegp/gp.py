"""Kriging engine: regularized Gram assembly, Cholesky factorization, and
posterior mean/variance prediction.

Observations are centered by the training mean by default (surface
temperatures sit far from zero, so a zero-mean prior is badly specified);
pass ``center=False`` to :func:`fit` for the raw linear-algebra behaviour.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from .spacetime import ProductKernelParams, SpaceTimePoint, points_to_arrays, product_gram
from .halfline import kernel_value

__all__ = ["Dataset", "KrigingModel", "FactorizationError", "fit",
           "predict_mean", "predict_variance", "rmse"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dataset:
    """Space-time points with observed scalar values."""

    points: tuple[SpaceTimePoint, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.points) != len(self.values):
            raise ValueError(
                f"points and values must have equal length, got "
                f"{len(self.points)} vs {len(self.values)}")
        if len(self.points) == 0:
            raise ValueError("dataset must contain at least one observation")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("all observed values must be finite")

    def __len__(self) -> int:
        return len(self.points)


class FactorizationError(RuntimeError):
    """Cholesky failure; carries the smallest pivot encountered.

    Signals duplicate points or insufficient noise variance; raising (rather
    than silently adding jitter) keeps the regularization fixed at whatever
    the caller chose.
    """

    def __init__(self, pivot: float, index: int):
        self.pivot = pivot
        self.index = index
        super().__init__(
            f"Cholesky factorization failed: smallest pivot {pivot:.6e} at index "
            f"{index} is not acceptably positive (duplicate points or "
            f"noise_variance too small)")


@dataclass(frozen=True)
class KrigingModel:
    """Fitted state: lower-triangular factor of the regularized Gram matrix
    plus centered training values."""

    kernel: ProductKernelParams
    training: Dataset
    noise_variance: float
    factor: np.ndarray
    centered_values: np.ndarray
    train_mean: float


def _failure_order(exc) -> int:
    """Index of the offending leading minor from a LAPACK error message."""
    digits = "".join(c if c.isdigit() else " " for c in str(exc)).split()
    return int(digits[0]) if digits else 1


def _smallest_failed_pivot(gram: np.ndarray, order: int) -> tuple[float, int]:
    """Failed pivot value and its index for the error report.

    The failed pivot is the Schur complement of entry (k, k) against the
    leading k x k block.  Blocked and unblocked LAPACK factorizations can
    disagree about the exact failure index near rank deficiency, so walk
    backward until a leading block factorizes.
    """
    k = order - 1
    while k > 0:
        try:
            lead = sla.cholesky(gram[:k, :k], lower=True, check_finite=False)
        except sla.LinAlgError as exc:
            k = _failure_order(exc) - 1
            continue
        w = sla.solve_triangular(lead, gram[:k, k], lower=True, check_finite=False)
        return float(gram[k, k] - w @ w), k
    return float(gram[0, 0]), 0


def fit(kernel: ProductKernelParams, data: Dataset, noise_variance: float,
        *, center: bool = True) -> KrigingModel:
    """Assemble and factorize ``G + noise_variance * I``.

    Raises
    ------
    FactorizationError
        When the regularized Gram matrix fails Cholesky factorization or
        yields a pivot indistinguishable from zero at working precision.
    """
    if not math.isfinite(noise_variance) or noise_variance < 0.0:
        raise ValueError(f"noise_variance must be finite and >= 0, got {noise_variance!r}")
    gram = product_gram(kernel, data.points)
    n = len(data)
    gram[np.diag_indices(n)] += noise_variance
    try:
        factor = sla.cholesky(gram, lower=True, check_finite=False)
    except sla.LinAlgError as exc:
        pivot, index = _smallest_failed_pivot(gram, _failure_order(exc))
        raise FactorizationError(pivot, index) from exc
    # LAPACK can "succeed" on a numerically singular matrix when rounding
    # leaves a pivot barely positive; enforce a rank-detection cutoff.
    pivots = factor.diagonal()
    cutoff = math.sqrt(n * np.finfo(np.float64).eps * float(gram.diagonal().max()))
    worst = int(np.argmin(pivots))
    if pivots[worst] <= cutoff:
        raise FactorizationError(float(pivots[worst] ** 2), worst)
    values = np.array(data.values, dtype=np.float64)
    mean = float(values.mean()) if center else 0.0
    return KrigingModel(kernel=kernel, training=data, noise_variance=float(noise_variance),
                        factor=factor, centered_values=values - mean, train_mean=mean)


def _cross_covariance(model: KrigingModel, query: Sequence[SpaceTimePoint]) -> np.ndarray:
    xq, _ = points_to_arrays(query)
    xt, _ = points_to_arrays(model.training.points)
    if xq.shape[1] != xt.shape[1]:
        raise ValueError(
            f"query dimension {xq.shape[1]} does not match training dimension {xt.shape[1]}")
    return product_gram(model.kernel, list(query), list(model.training.points))


def predict_mean(model: KrigingModel, query: Sequence[SpaceTimePoint]) -> list[float]:
    """Posterior mean at the query points (training mean added back)."""
    k = _cross_covariance(model, query)
    alpha = sla.cho_solve((model.factor, True), model.centered_values, check_finite=False)
    return [float(v) for v in model.train_mean + k @ alpha]


def predict_variance(model: KrigingModel, query: Sequence[SpaceTimePoint]) -> list[float]:
    """Posterior variance at the query points, clamped at zero.

    Clamping only absorbs rounding-level negativity; if it triggers, the
    event is logged with the worst magnitude.
    """
    k = _cross_covariance(model, query)
    v = sla.solve_triangular(model.factor, k.T, lower=True, check_finite=False)
    prior = np.array([kernel_value(model.kernel.temporal, p.t, p.t) for p in query])
    var = prior - np.einsum("ij,ij->j", v, v)
    negative = var < 0.0
    if negative.any():
        logger.warning("clamped %d negative posterior variances (worst %.3e)",
                       int(negative.sum()), float(var[negative].min()))
        var = np.where(negative, 0.0, var)
    return [float(v) for v in var]


def rmse(predicted: Sequence[float], observed: Sequence[float]) -> float:
    """Root mean squared error between two equal-length sequences."""
    p = np.asarray(predicted, dtype=np.float64)
    o = np.asarray(observed, dtype=np.float64)
    if p.shape != o.shape or p.ndim != 1:
        raise ValueError(f"length mismatch: {p.shape} vs {o.shape}")
    if p.size == 0:
        raise ValueError("rmse of empty sequences is undefined")
    return float(np.sqrt(np.mean((p - o) ** 2)))
