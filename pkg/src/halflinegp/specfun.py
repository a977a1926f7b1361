r"""Scalar special functions used by the half-line kernel.

Everything here is self-contained double-precision numerics:

* ``log_gamma`` -- Stirling's series with Bernoulli corrections, with
  upward recursion to shift small arguments into the asymptotic regime.
* ``bessel_i_scaled`` / ``log_bessel_i`` -- the modified Bessel function of
  the first kind through its bounded scaled form
  :math:`\tilde I_\alpha(u) = e^{-u} I_\alpha(u)`, evaluated by an
  ascending power series below a switchover argument and by the Hankel
  large-argument expansion above it.
* ``laguerre`` / ``laguerre_sequence`` -- generalized Laguerre polynomials
  :math:`L_n^{(\alpha)}(t)` by the stable forward three-term recurrence.

All functions are pure and deterministic: identical inputs give identical
outputs across calls, so they are safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "LaguerreOrder",
    "log_gamma",
    "bessel_i_scaled",
    "log_bessel_i",
    "laguerre",
    "laguerre_sequence",
]

# Argument above which the Hankel expansion replaces the ascending series.
BESSEL_SWITCHOVER = 30.0

# Stirling correction coefficients B_{2k} / (2k (2k-1)), k = 1..8.
_STIRLING_COEF = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)

_SERIES_EPS = 1e-17
_SERIES_MAX_TERMS = 800
_ASYM_MAX_TERMS = 64


@dataclass(frozen=True)
class LaguerreOrder:
    """Degree and parameter of a generalized Laguerre polynomial.

    Parameters
    ----------
    n : int
        Polynomial degree, ``n >= 0``.
    alpha : float
        Generalized-Laguerre parameter, ``alpha > -1``.
    """

    n: int
    alpha: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"Laguerre degree must be a nonnegative integer, got {self.n!r}")
        if not math.isfinite(self.alpha) or self.alpha <= -1.0:
            raise ValueError(f"Laguerre parameter must be finite and > -1, got {self.alpha!r}")


def log_gamma(x: float) -> float:
    r"""Natural log of the Gamma function, :math:`\ln\Gamma(x)` for ``x > 0``.

    Stirling's asymptotic series is accurate only for large arguments, so
    small ``x`` is shifted upward with
    :math:`\ln\Gamma(x) = \ln\Gamma(x+m) - \sum_{k<m}\ln(x+k)` until the
    shifted argument is at least 10.  Relative error is below ``1e-12``
    throughout ``(0, 1e6]``.

    Raises
    ------
    ValueError
        If ``x`` is not a finite positive number.
    """
    x = float(x)
    if not (x > 0.0) or not math.isfinite(x):
        raise ValueError(f"log_gamma requires finite x > 0, got {x!r}")
    shift = 0.0
    y = x
    while y < 10.0:
        shift += math.log(y)
        y += 1.0
    w = 1.0 / (y * y)
    corr = 0.0
    for c in reversed(_STIRLING_COEF):
        corr = corr * w + c
    corr /= y
    return (y - 0.5) * math.log(y) - y + 0.5 * math.log(2.0 * math.pi) + corr - shift


def _validate_bessel_args(alpha: float, u: float) -> tuple[float, float]:
    alpha = float(alpha)
    u = float(u)
    if not math.isfinite(alpha) or alpha <= -1.0:
        raise ValueError(f"Bessel order must be finite and > -1, got {alpha!r}")
    if not math.isfinite(u) or u < 0.0:
        raise ValueError(f"Bessel argument must be finite and >= 0, got {u!r}")
    return alpha, u


def _log_ive_series(alpha: float, u: float) -> float:
    """log of the scaled Bessel function by the ascending power series.

    All series terms are positive (alpha > -1), so there is no
    cancellation; the leading factor is kept in log space.
    """
    q = 0.25 * u * u
    s = 1.0
    term = 1.0
    k = 1
    while k < _SERIES_MAX_TERMS:
        term *= q / (k * (alpha + k))
        s += term
        if term <= _SERIES_EPS * s:
            break
        k += 1
    return alpha * math.log(0.5 * u) - log_gamma(alpha + 1.0) - u + math.log(s)


def _log_ive_asymptotic(alpha: float, u: float) -> float:
    """log of the scaled Bessel function by the Hankel expansion.

    The expansion is asymptotic: terms first shrink, reach a minimum near
    ``k ~ u`` and then diverge.  Summation stops at the tolerance or at the
    first growing term; if neither yields convergence (order too large for
    the argument) the caller is expected to fall back to the series.
    """
    mu = 4.0 * alpha * alpha
    s = 1.0
    term = 1.0
    converged = False
    for k in range(1, _ASYM_MAX_TERMS + 1):
        nxt = term * (-(mu - (2.0 * k - 1.0) ** 2) / (8.0 * k * u))
        if abs(nxt) >= abs(term) and k > 2:
            break  # divergence onset
        term = nxt
        s += term
        if abs(term) <= _SERIES_EPS * abs(s):
            converged = True
            break
    if (not converged and abs(term) > 1e-12 * abs(s)) or s <= 0.0:
        if u <= 600.0:
            return _log_ive_series(alpha, u)
        raise ValueError(f"Bessel asymptotic expansion failed for alpha={alpha}, u={u}")
    return -0.5 * math.log(2.0 * math.pi * u) + math.log(s)


def _log_ive(alpha: float, u: float) -> float:
    """ln of e^{-u} I_alpha(u) for u > 0, picking the branch by argument."""
    if u < BESSEL_SWITCHOVER:
        return _log_ive_series(alpha, u)
    return _log_ive_asymptotic(alpha, u)


def bessel_i_scaled(alpha: float, u: float) -> float:
    r"""Exponentially scaled modified Bessel function
    :math:`\tilde I_\alpha(u) = e^{-u} I_\alpha(u)`.

    The scaled form is bounded for ``alpha >= 0`` (values in ``(0, 1]`` for
    ``u > 0``) and stays representable for arguments up to ``1e12`` where the
    unscaled :math:`I_\alpha` would overflow.

    Raises
    ------
    ValueError
        For ``u < 0``, ``alpha <= -1``, or ``u == 0`` with ``alpha < 0``
        (where :math:`I_\alpha` diverges).
    """
    alpha, u = _validate_bessel_args(alpha, u)
    if u == 0.0:
        if alpha < 0.0:
            raise ValueError("bessel_i_scaled diverges at u=0 for alpha < 0")
        return 1.0 if alpha == 0.0 else 0.0
    return math.exp(_log_ive(alpha, u))


def log_bessel_i(alpha: float, u: float) -> float:
    r"""Overflow-free :math:`\ln I_\alpha(u) = u + \ln\tilde I_\alpha(u)`.

    Finite for arguments up to ``1e12``.  At ``u == 0``: returns ``0.0`` for
    ``alpha == 0`` (since ``I_0(0) = 1``) and ``-inf`` for ``alpha > 0``
    (log of the exact zero :math:`I_\alpha(0) = 0`).

    Raises
    ------
    ValueError
        As :func:`bessel_i_scaled`; additionally at ``u == 0`` with
        ``alpha < 0``, where :math:`I_\alpha` diverges and no finite log
        exists.
    """
    alpha, u = _validate_bessel_args(alpha, u)
    if u == 0.0:
        if alpha < 0.0:
            raise ValueError("log_bessel_i is undefined at u=0 for alpha < 0")
        return 0.0 if alpha == 0.0 else -math.inf
    return u + _log_ive(alpha, u)


def _laguerre_iter(n: int, alpha: float, t: float):
    """Yield L_0 .. L_n by the forward three-term recurrence."""
    prev = 1.0
    yield prev
    if n == 0:
        return
    cur = 1.0 + alpha - t
    yield cur
    for k in range(1, n):
        prev, cur = cur, ((2.0 * k + 1.0 + alpha - t) * cur - (k + alpha) * prev) / (k + 1.0)
        yield cur


def _validate_laguerre_t(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise ValueError(f"Laguerre argument must be finite and >= 0, got {t!r}")
    return t


def laguerre(order: LaguerreOrder, t: float) -> float:
    r"""Generalized Laguerre polynomial :math:`L_n^{(\alpha)}(t)`.

    Evaluated by the forward recurrence
    :math:`(n+1) L_{n+1} = (2n+1+\alpha-t) L_n - (n+\alpha) L_{n-1}`
    with :math:`L_0 = 1` and :math:`L_1 = 1+\alpha-t`, which is stable for
    the degrees used here, unlike the explicit alternating sum.
    """
    t = _validate_laguerre_t(t)
    value = 1.0
    for value in _laguerre_iter(order.n, order.alpha, t):
        pass
    return value


def laguerre_sequence(max_n: int, alpha: float, t: float):
    r"""All of :math:`L_0^{(\alpha)}(t), \dots, L_{max\_n}^{(\alpha)}(t)`.

    One pass of the same recurrence used by :func:`laguerre`, so element
    ``k`` is bit-for-bit equal to ``laguerre(LaguerreOrder(k, alpha), t)``.
    Returns a list of floats.
    """
    order = LaguerreOrder(int(max_n), float(alpha))  # reuse validation
    t = _validate_laguerre_t(t)
    return list(_laguerre_iter(order.n, order.alpha, t))
