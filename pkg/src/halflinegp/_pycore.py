"""Pure-Python (numpy) implementation of the hot kernels.

Mirrors ``_fastcore.pyx`` operation for operation; used when the compiled
extension is unavailable or explicitly disabled.  Scalar definitions live in
``specfun`` / ``halfline``; this module only vectorizes them over arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .specfun import BESSEL_SWITCHOVER, log_gamma

BACKEND_NAME = "python"

SMALL_U = 1e-6
_SERIES_EPS = 1e-17
_SERIES_MAX_TERMS = 800
_ASYM_MAX_TERMS = 64


def _log_ive_series_arr(alpha, u):
    q = 0.25 * u * u
    s = np.ones_like(u)
    term = np.ones_like(u)
    k = 1
    while k < _SERIES_MAX_TERMS:
        term *= q / (k * (alpha + k))
        s += term
        if np.all(term <= _SERIES_EPS * s):
            break
        k += 1
    return alpha * np.log(0.5 * u) - log_gamma(alpha + 1.0) - u + np.log(s)


def _log_ive_asym_arr(alpha, u):
    mu = 4.0 * alpha * alpha
    s = np.ones_like(u)
    term = np.ones_like(u)
    active = np.ones(u.shape, dtype=bool)
    converged = np.zeros(u.shape, dtype=bool)
    for k in range(1, _ASYM_MAX_TERMS + 1):
        nxt = term * (-(mu - (2.0 * k - 1.0) ** 2) / (8.0 * k * u))
        if k > 2:
            active &= np.abs(nxt) < np.abs(term)  # halt at divergence onset
        term = np.where(active, nxt, term)
        s = np.where(active, s + nxt, s)
        done = active & (np.abs(term) <= _SERIES_EPS * np.abs(s))
        converged |= done
        active &= ~done
        if not active.any():
            break
    bad = (~converged & (np.abs(term) > 1e-12 * np.abs(s))) | (s <= 0.0)
    out = np.empty_like(u)
    good = ~bad
    out[good] = -0.5 * np.log(2.0 * math.pi * u[good]) + np.log(s[good])
    if bad.any():
        # order too large for the argument: the convergent series still works
        out[bad] = _log_ive_series_arr(alpha, u[bad])
    return out


def log_ive_array(alpha: float, u: np.ndarray) -> np.ndarray:
    """ln of e^{-u} I_alpha(u), elementwise, for u > 0."""
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)
    small = u < BESSEL_SWITCHOVER
    if small.any():
        out[small] = _log_ive_series_arr(alpha, u[small])
    big = ~small
    if big.any():
        out[big] = _log_ive_asym_arr(alpha, u[big])
    return out


def _halfline_log_block(alpha, delta, omega, t_col, s_row):
    om1 = 1.0 - omega
    c1 = delta + omega / om1
    lg1 = log_gamma(alpha + 1.0)
    log_d = math.log(1.0 - 2.0 * delta)
    base = lg1 - (alpha + 1.0) * log_d
    tsw = t_col * s_row * omega
    u = 2.0 * np.sqrt(tsw) / om1
    ts_sum = t_col + s_row
    out = np.empty(u.shape)
    small = u < SMALL_U
    big = ~small
    if big.any():
        out[big] = (base - 0.5 * alpha * np.log(tsw[big]) - c1 * ts_sum[big]
                    + u[big] + log_ive_array(alpha, u[big]))
    if small.any():
        out[small] = (-(alpha + 1.0) * log_d - alpha * math.log(om1)
                      + u[small] * u[small] / (4.0 * (alpha + 1.0))
                      - c1 * ts_sum[small])
    return out


def halfline_log_gram(alpha: float, delta: float, omega: float,
                      t: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Matrix of ln K(t_i, s_j) for the half-line kernel."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    s = np.ascontiguousarray(s, dtype=np.float64)
    return _halfline_log_block(alpha, delta, omega, t[:, None], s[None, :])


def halfline_log_pairs(alpha: float, delta: float, omega: float,
                       t: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Elementwise ln K(t_i, s_i) for paired arrays of equal length."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    s = np.ascontiguousarray(s, dtype=np.float64)
    if t.shape != s.shape:
        raise ValueError("paired evaluation requires equal-length arrays")
    return _halfline_log_block(alpha, delta, omega, t, s)
