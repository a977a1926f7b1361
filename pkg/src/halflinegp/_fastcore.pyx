# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twin of ``_pycore``: scalar special functions plus tight loops
for the half-line kernel's log-Gram assembly.

Kept algorithmically identical to the pure-Python core so the two backends
agree to rounding accuracy; the loop structure differs, and the k-dependent
series/asymptotic coefficients are tabulated once per Gram call.
"""

from libc.math cimport log, sqrt, fabs, M_PI
from libc.stdlib cimport malloc, free

import numpy as np

BACKEND_NAME = "compiled"

cdef double SMALL_U = 1e-6
cdef double SWITCHOVER = 30.0
cdef double SERIES_EPS = 1e-17
cdef int SERIES_MAX_TERMS = 800
cdef int ASYM_MAX_TERMS = 64

# Stirling correction coefficients B_{2k} / (2k (2k-1)), k = 1..8.
cdef double[8] STIRLING = [
    1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0,
]


cdef double _log_gamma(double x) noexcept nogil:
    cdef double shift = 0.0
    cdef double y = x
    cdef double w, corr
    cdef int i
    while y < 10.0:
        shift += log(y)
        y += 1.0
    w = 1.0 / (y * y)
    corr = 0.0
    for i in range(7, -1, -1):
        corr = corr * w + STIRLING[i]
    corr /= y
    return (y - 0.5) * log(y) - y + 0.5 * log(2.0 * M_PI) + corr - shift


cdef struct KernelCtx:
    double alpha
    double omega
    double om1          # 1 - omega
    double c1           # delta + omega / (1 - omega)
    double base         # log_gamma(alpha+1) - (alpha+1) log(1-2 delta)
    double small_base   # -(alpha+1) log(1-2 delta) - alpha log(1-omega)
    double lg_alpha1    # log_gamma(alpha+1)
    double* series_inv  # 1 / (k (alpha+k)), k = 1..SERIES_MAX_TERMS-1
    double* asym_num    # -(4 alpha^2 - (2k-1)^2) / (8k), k = 1..ASYM_MAX_TERMS


cdef double _log_ive_series(KernelCtx* ctx, double u) noexcept nogil:
    cdef double q = 0.25 * u * u
    cdef double s = 1.0
    cdef double term = 1.0
    cdef int k = 1
    while k < SERIES_MAX_TERMS:
        term *= q * ctx.series_inv[k]
        s += term
        if term <= SERIES_EPS * s:
            break
        k += 1
    return ctx.alpha * log(0.5 * u) - ctx.lg_alpha1 - u + log(s)


cdef double _log_ive(KernelCtx* ctx, double u) noexcept nogil:
    cdef double s, term, nxt, inv_u
    cdef int k
    cdef bint converged = False
    if u < SWITCHOVER:
        return _log_ive_series(ctx, u)
    inv_u = 1.0 / u
    s = 1.0
    term = 1.0
    for k in range(1, ASYM_MAX_TERMS + 1):
        nxt = term * (ctx.asym_num[k] * inv_u)
        if fabs(nxt) >= fabs(term) and k > 2:
            break  # divergence onset
        term = nxt
        s += term
        if fabs(term) <= SERIES_EPS * fabs(s):
            converged = True
            break
    if (not converged and fabs(term) > 1e-12 * fabs(s)) or s <= 0.0:
        # order too large for the argument: the convergent series still works
        return _log_ive_series(ctx, u)
    return -0.5 * log(2.0 * M_PI * u) + log(s)


cdef double _log_kernel(KernelCtx* ctx, double t, double s) noexcept nogil:
    cdef double tsw = t * s * ctx.omega
    cdef double u = 2.0 * sqrt(tsw) / ctx.om1
    if u < SMALL_U:
        return ctx.small_base + u * u / (4.0 * (ctx.alpha + 1.0)) - ctx.c1 * (t + s)
    return (ctx.base - 0.5 * ctx.alpha * log(tsw) - ctx.c1 * (t + s)
            + u + _log_ive(ctx, u))


cdef int _ctx_init(KernelCtx* ctx, double alpha, double delta, double omega) except -1:
    cdef double log_d = log(1.0 - 2.0 * delta)
    cdef double mu = 4.0 * alpha * alpha
    cdef int k
    ctx.alpha = alpha
    ctx.omega = omega
    ctx.om1 = 1.0 - omega
    ctx.c1 = delta + omega / ctx.om1
    ctx.lg_alpha1 = _log_gamma(alpha + 1.0)
    ctx.base = ctx.lg_alpha1 - (alpha + 1.0) * log_d
    ctx.small_base = -(alpha + 1.0) * log_d - alpha * log(ctx.om1)
    ctx.series_inv = <double*> malloc(SERIES_MAX_TERMS * sizeof(double))
    ctx.asym_num = <double*> malloc((ASYM_MAX_TERMS + 1) * sizeof(double))
    if ctx.series_inv == NULL or ctx.asym_num == NULL:
        free(ctx.series_inv)
        free(ctx.asym_num)
        raise MemoryError()
    ctx.series_inv[0] = 0.0
    for k in range(1, SERIES_MAX_TERMS):
        ctx.series_inv[k] = 1.0 / (k * (alpha + k))
    ctx.asym_num[0] = 0.0
    for k in range(1, ASYM_MAX_TERMS + 1):
        ctx.asym_num[k] = -(mu - (2.0 * k - 1.0) ** 2) / (8.0 * k)
    return 0


cdef void _ctx_free(KernelCtx* ctx) noexcept:
    free(ctx.series_inv)
    free(ctx.asym_num)


def halfline_log_gram(double alpha, double delta, double omega, t, s):
    """Matrix of ln K(t_i, s_j) for the half-line kernel."""
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef double[::1] sv = np.ascontiguousarray(s, dtype=np.float64)
    out = np.empty((tv.shape[0], sv.shape[0]), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef KernelCtx ctx
    cdef Py_ssize_t i, j
    _ctx_init(&ctx, alpha, delta, omega)
    try:
        with nogil:
            for i in range(tv.shape[0]):
                for j in range(sv.shape[0]):
                    ov[i, j] = _log_kernel(&ctx, tv[i], sv[j])
    finally:
        _ctx_free(&ctx)
    return out


def halfline_log_pairs(double alpha, double delta, double omega, t, s):
    """Elementwise ln K(t_i, s_i) for paired arrays of equal length."""
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef double[::1] sv = np.ascontiguousarray(s, dtype=np.float64)
    if tv.shape[0] != sv.shape[0]:
        raise ValueError("paired evaluation requires equal-length arrays")
    out = np.empty(tv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef KernelCtx ctx
    cdef Py_ssize_t i
    _ctx_init(&ctx, alpha, delta, omega)
    try:
        with nogil:
            for i in range(tv.shape[0]):
                ov[i] = _log_kernel(&ctx, tv[i], sv[i])
    finally:
        _ctx_free(&ctx)
    return out
