"""Half-line kernel: eigensystem, closed form, series cross-check, limits."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from halflinegp.halfline import (HalfLineParams, MercerTruncation,
                                 eigenfunction, eigenvalue,
                                 eigenrelation_residual, kernel_limit_infinity,
                                 kernel_limit_zero, kernel_log_matrix,
                                 kernel_log_value, kernel_matrix,
                                 kernel_mercer, kernel_value, max_over_t,
                                 normalization, orthonormality_residuals,
                                 weight)

mp.mp.dps = 50

LEFT = HalfLineParams(alpha=-0.5, delta=0.455, omega=0.7)
CENTER = HalfLineParams(alpha=-0.7, delta=0.389, omega=0.3)
RIGHT = HalfLineParams(alpha=0.2, delta=0.439, omega=0.95)
TRUNC = MercerTruncation()


# ---------------------------------------------------------------------------
# parameter validation
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("kw", [
    dict(alpha=-1.0, delta=0.25, omega=0.5),
    dict(alpha=-1.5, delta=0.25, omega=0.5),
    dict(alpha=0.0, delta=0.0, omega=0.5),
    dict(alpha=0.0, delta=0.5, omega=0.5),
    dict(alpha=0.0, delta=0.25, omega=0.0),
    dict(alpha=0.0, delta=0.25, omega=1.0),
    dict(alpha=math.nan, delta=0.25, omega=0.5),
    dict(alpha=0.0, delta=math.inf, omega=0.5),
])
def test_params_reject_boundaries(kw):
    with pytest.raises(ValueError):
        HalfLineParams(**kw)


def test_truncation_validation():
    with pytest.raises(ValueError):
        MercerTruncation(max_terms=0)
    with pytest.raises(ValueError):
        MercerTruncation(tail_tolerance=-1.0)


# ---------------------------------------------------------------------------
# eigensystem
# ---------------------------------------------------------------------------

def test_eigenvalue_examples():
    assert eigenvalue(HalfLineParams(0.0, 0.25, 0.7), 0) == pytest.approx(0.3)
    assert eigenvalue(HalfLineParams(0.0, 0.25, 0.5), 3) == pytest.approx(0.0625)


def test_eigenvalues_sum_to_one():
    p = HalfLineParams(0.0, 0.25, 0.9)
    total = sum(eigenvalue(p, n) for n in range(400))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_normalization_trivial():
    assert normalization(HalfLineParams(0.0, 0.25, 0.5), 0) == pytest.approx(math.sqrt(2.0), rel=1e-14)
    # n = 0: the Gamma(1)/Gamma(alpha+1) and Gamma(alpha+1) factors collapse,
    # leaving gamma_0 = (1-2 delta)^{-(alpha+1)/2} (the orthonormality
    # quadrature below independently confirms this normalization)
    p = HalfLineParams(1.3, 0.12, 0.5)
    expected = math.sqrt(1.0 / (1 - 2 * 0.12) ** 2.3)
    assert normalization(p, 0) == pytest.approx(expected, rel=1e-13)


def test_normalization_gamma_ratio_oracle():
    # 50-digit evaluation of the defining formula at n=5, alpha=-1/2, delta=0.455
    expected = 3.6803496498258891616
    assert normalization(HalfLineParams(-0.5, 0.455, 0.7), 5) == pytest.approx(expected, rel=1e-12)


def test_normalization_large_degree_finite():
    p = HalfLineParams(2.5, 0.4, 0.5)
    v = normalization(p, 10_000)
    assert math.isfinite(v) and v > 0.0


def test_eigenfunction_composition():
    p = HalfLineParams(0.0, 0.25, 0.5)
    assert eigenfunction(p, 0, 0.0) == pytest.approx(math.sqrt(2.0), rel=1e-14)
    p2 = HalfLineParams(0.77, 0.31, 0.5)
    for t in (0.0, 0.4, 3.0):
        assert eigenfunction(p2, 0, t) == pytest.approx(
            normalization(p2, 0) * math.exp(-p2.delta * t), rel=1e-13)
    # n=3 from 50-digit pieces
    p3 = HalfLineParams(0.2, 0.3, 0.5)
    g = mp.sqrt(mp.gamma(4) / mp.gamma(4.2) * mp.gamma(1.2) / mp.mpf("0.4") ** mp.mpf("1.2"))
    ref = float(g * mp.exp(mp.mpf("-0.3") * mp.mpf("1.7")) * mp.laguerre(3, mp.mpf("0.2"), mp.mpf("1.7")))
    assert eigenfunction(p3, 3, 1.7) == pytest.approx(ref, rel=1e-12)


def test_eigenfunction_decays():
    vals = [abs(eigenfunction(LEFT, 4, t)) for t in (50.0, 100.0, 200.0, 400.0)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_weight_examples():
    assert weight(HalfLineParams(0.0, 0.25, 0.5), 0.0) == pytest.approx(0.5, rel=1e-14)
    assert weight(HalfLineParams(1.0, 0.1, 0.5), 2.0) == pytest.approx(
        0.25842754303315895, rel=1e-13)
    with pytest.raises(ValueError):
        weight(LEFT, 0.0)  # alpha < 0 diverges at the origin


@pytest.mark.parametrize("params", [HalfLineParams(0.0, 0.25, 0.5),
                                    HalfLineParams(1.0, 0.1, 0.5),
                                    HalfLineParams(2.3, 0.41, 0.5)])
def test_weight_integrates_to_one(params):
    total, err = quad(lambda t: weight(params, t), 0.0, np.inf)
    assert total == pytest.approx(1.0, abs=1e-8)


# ---------------------------------------------------------------------------
# Mercer series cross-check
# ---------------------------------------------------------------------------

def test_mercer_single_term():
    res = kernel_mercer(LEFT, MercerTruncation(max_terms=1), 1.0, 2.0)
    expected = (eigenvalue(LEFT, 0) * eigenfunction(LEFT, 0, 1.0)
                * eigenfunction(LEFT, 0, 2.0))
    assert res.value == pytest.approx(expected, rel=1e-13)
    assert res.terms_used == 1
    assert not res.converged


def test_mercer_origin_alpha_zero():
    # for alpha = 0 every L_n(0) = 1 and gamma_n^2 = 1/(1-2 delta), so
    # K(0,0) = sum (1-w) w^n / (1-2 delta) = 1/(1-2 delta)
    p = HalfLineParams(0.0, 0.25, 0.5)
    res = kernel_mercer(p, TRUNC, 0.0, 0.0)
    assert res.converged
    assert res.value == pytest.approx(2.0, rel=1e-12)


def test_mercer_against_highprecision_sum():
    # direct 50-digit summation oracle at a severe-cancellation point
    a, d, w = mp.mpf("0.2"), mp.mpf("0.439"), mp.mpf("0.95")
    t, s = mp.mpf(2.0), mp.mpf(6.0)
    total = mp.mpf(0)
    lam = 1 - w
    g2 = (1 - 2 * d) ** (-(a + 1))
    lp, lc = mp.mpf(1), 1 + a - t
    sp_, sc = mp.mpf(1), 1 + a - s
    e = mp.exp(-d * (t + s))
    total = lam * g2 * e
    for n in range(1, 1200):
        lam *= w
        g2 *= mp.mpf(n) / (n + a)
        total += lam * g2 * e * lc * sc
        lp, lc = lc, ((2 * n + 1 + a - t) * lc - (n + a) * lp) / (n + 1)
        sp_, sc = sc, ((2 * n + 1 + a - s) * sc - (n + a) * sp_) / (n + 1)
    truth = float(total)
    res = kernel_mercer(RIGHT, TRUNC, 2.0, 6.0)
    assert res.converged
    # float summation carries cancellation noise; the reported bound covers it
    assert abs(res.value - truth) <= res.noise_bound
    # and the closed form nails the same truth far below the series noise
    assert kernel_value(RIGHT, 2.0, 6.0) == pytest.approx(truth, rel=1e-10)


def test_mercer_matches_closed_form_demo_sets():
    res = kernel_mercer(LEFT, TRUNC, 1.0, 2.0)
    assert res.converged and res.resolves(1e-8)
    assert kernel_value(LEFT, 1.0, 2.0) == pytest.approx(res.value, rel=1e-8)
    res = kernel_mercer(RIGHT, TRUNC, 3.0, 5.0)
    assert res.converged and res.resolves(1e-8)
    assert kernel_value(RIGHT, 3.0, 5.0) == pytest.approx(res.value, rel=1e-8)


def test_mercer_cap_reports_nonconvergence():
    res = kernel_mercer(RIGHT, MercerTruncation(max_terms=5), 1.0, 1.0)
    assert not res.converged
    assert res.terms_used == 5


# ---------------------------------------------------------------------------
# closed form
# ---------------------------------------------------------------------------

@given(t=st.floats(0.0, 1e6), s=st.floats(0.0, 1e6),
       alpha=st.floats(-0.95, 4.0), delta=st.floats(0.01, 0.49),
       omega=st.floats(0.01, 0.99))
@settings(max_examples=300, deadline=None)
def test_kernel_symmetric_and_log_finite(t, s, alpha, delta, omega):
    p = HalfLineParams(alpha, delta, omega)
    a = kernel_value(p, t, s)
    b = kernel_value(p, s, t)
    assert a == b  # exact symmetry
    assert math.isfinite(kernel_log_value(p, t, s))


def test_kernel_value_is_exp_of_log():
    for t, s in [(0.0, 0.0), (1.0, 2.0), (3.5, 40.0), (300.0, 300.0)]:
        assert kernel_value(LEFT, t, s) == math.exp(kernel_log_value(LEFT, t, s))


def test_kernel_log_value_finite_at_large_args():
    assert math.isfinite(kernel_log_value(LEFT, 300.0, 300.0))
    # inside the series validity box, exp(log) still matches the series
    res = kernel_mercer(LEFT, TRUNC, 50.0, 50.0)
    assert res.converged and res.resolves(1e-8)
    assert kernel_value(LEFT, 50.0, 50.0) == pytest.approx(res.value, rel=1e-8)


def test_kernel_matrix_agrees_with_scalar():
    rng = np.random.default_rng(5)
    t = rng.uniform(0.0, 80.0, 17)
    s = rng.uniform(0.0, 80.0, 13)
    m = kernel_log_matrix(LEFT, t, s)
    for i in range(len(t)):
        for j in range(len(s)):
            ref = kernel_log_value(LEFT, float(t[i]), float(s[j]))
            assert m[i, j] == pytest.approx(ref, rel=1e-12, abs=1e-12)
    assert np.all(kernel_matrix(LEFT, t, s) == np.exp(m))


def test_kernel_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        kernel_log_matrix(LEFT, [-1.0], [0.0])
    with pytest.raises(ValueError):
        kernel_log_matrix(LEFT, [[0.0, 1.0]], [0.0])


def test_exp_path_matches_naive_product_form():
    # direct evaluation of the closed form without the log-space assembly
    from scipy.special import iv
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(300):
        a = float(rng.uniform(-0.9, 3.0))
        d = float(rng.uniform(0.02, 0.48))
        w = float(rng.uniform(0.05, 0.95))
        t = float(rng.uniform(1e-3, 30.0))
        s = float(rng.uniform(1e-3, 30.0))
        u = 2.0 * math.sqrt(t * s * w) / (1.0 - w)
        with np.errstate(over="ignore"):
            bessel = float(iv(a, u))
        if not math.isfinite(bessel):
            continue
        plain = (math.gamma(a + 1.0) / (1.0 - 2.0 * d) ** (a + 1.0)
                 * (t * s * w) ** (-0.5 * a)
                 * math.exp(-(t + s) * (d + w / (1.0 - w))) * bessel)
        if math.isfinite(plain) and plain > 1e-300:
            p = HalfLineParams(a, d, w)
            worst = max(worst, abs(kernel_value(p, t, s) - plain) / plain)
    assert worst <= 1e-12


# ---------------------------------------------------------------------------
# limits
# ---------------------------------------------------------------------------

def test_limit_zero_exponent_alpha_one_coincides():
    # at alpha = 1 the (1-omega) exponent question is moot
    p = HalfLineParams(1.0, 0.2, 0.6)
    printed_form = math.exp(-(p.alpha + 1) * math.log(1 - 2 * p.delta)
                            - math.log(1 - p.omega))
    assert kernel_limit_zero(p, 0.0, 0.0) == pytest.approx(printed_form, rel=1e-14)


@pytest.mark.parametrize("params", [LEFT, CENTER, RIGHT])
def test_limit_zero_adjudicated_by_series(params):
    # the eigen-series at the origin decides the (1-omega) exponent: alpha
    res = kernel_mercer(params, TRUNC, 0.0, 0.0)
    assert res.converged and res.resolves(1e-8)
    ours = kernel_limit_zero(params, 0.0, 0.0)
    assert ours == pytest.approx(res.value, rel=1e-8)
    alt = math.exp(-(params.alpha + 1) * math.log(1 - 2 * params.delta)
                   - math.log(1 - params.omega))
    assert abs(alt - res.value) > 1e3 * abs(ours - res.value)


def test_limit_zero_example_value():
    p = HalfLineParams(0.0, 0.25, 0.5)
    assert kernel_limit_zero(p, 0.0, 0.0) == pytest.approx(2.0, rel=1e-14)


def test_kernel_at_origin_equals_zero_limit():
    # the fused small-argument branch makes these the same expression
    for p in (LEFT, CENTER, RIGHT):
        assert kernel_value(p, 0.0, 0.0) == pytest.approx(
            kernel_limit_zero(p, 0.0, 0.0), rel=1e-15)


def test_limit_zero_branch_consistency():
    kv = kernel_value(LEFT, 1e-9, 2.0)
    kl = kernel_limit_zero(LEFT, 1e-9, 2.0)
    assert kv == pytest.approx(kl, rel=1e-6)


def test_limit_infinity_agreement():
    p = HalfLineParams(0.0, 0.3, 0.5)
    kv = kernel_value(p, 400.0, 400.0)
    ki = kernel_limit_infinity(p, 400.0, 400.0)
    assert kv == pytest.approx(ki, rel=1e-3)


def test_limit_infinity_pure_sqrt_difference_form():
    w = 0.7
    d = math.sqrt(w) / (1.0 + math.sqrt(w))
    p = HalfLineParams(-0.5, d, w)
    # cross-term coefficient is exactly zero by construction
    assert (p.delta - math.sqrt(p.omega) / (1.0 + math.sqrt(p.omega))) == 0.0
    t, s = 30.0, 70.0
    c1 = d + w / (1.0 - w)
    expected = math.exp(
        math.lgamma(0.5) - math.log(2.0) - 0.5 * math.log(1 - 2 * d)
        + 0.5 * (math.log(1 - w) - math.log(math.pi))
        - c1 * (math.sqrt(t) - math.sqrt(s)) ** 2)
    assert kernel_limit_infinity(p, t, s) == pytest.approx(expected, rel=1e-12)


def test_limit_infinity_symmetric_and_domain():
    assert kernel_limit_infinity(LEFT, 13.0, 57.0) == kernel_limit_infinity(LEFT, 57.0, 13.0)
    with pytest.raises(ValueError):
        kernel_limit_infinity(LEFT, 0.0, 1.0)


# ---------------------------------------------------------------------------
# maximization
# ---------------------------------------------------------------------------

def test_max_over_t_at_origin():
    # for s = 0 the kernel reduces to C * exp(-c1 t): monotone decreasing
    for p in (LEFT, CENTER, RIGHT):
        ts = np.linspace(0.0, 4.0, 50)
        vals = [kernel_value(p, float(t), 0.0) for t in ts]
        assert all(b < a for a, b in zip(vals, vals[1:]))  # verified monotone
        t_star, value = max_over_t(p, 0.0)
        assert t_star == 0.0
        assert value == kernel_value(p, 0.0, 0.0)
        assert value > 0.0


def test_max_over_t_limit_value():
    w = 0.7
    p = HalfLineParams(-0.5, math.sqrt(w) / (1.0 + math.sqrt(w)), w)
    t_star, value = max_over_t(p, 200.0)
    target = (1.0 + math.sqrt(w)) / 2.0
    assert abs(value - target) / target <= 0.01
    assert t_star == pytest.approx(200.0, rel=1e-3)


# ---------------------------------------------------------------------------
# structural invariants
# ---------------------------------------------------------------------------

def test_positive_definiteness_sampled():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        p = HalfLineParams(float(rng.uniform(-0.9, 3.0)),
                           float(rng.uniform(0.02, 0.48)),
                           float(rng.uniform(0.05, 0.95)))
        pts = rng.uniform(0.0, 50.0, size=int(rng.integers(2, 9)))
        g = kernel_matrix(p, pts, pts)
        g = 0.5 * (g + g.T)
        eig = np.linalg.eigvalsh(g)
        assert eig[0] >= -1e-10 * np.trace(g)


def test_diagonal_positive():
    for p in (LEFT, CENTER, RIGHT):
        for t in (0.0, 1.0, 1e2, 1e4, 1e6):
            lk = kernel_log_value(p, t, t)
            assert math.isfinite(lk)
            if abs(lk) < 700.0:  # representable in double precision
                assert kernel_value(p, t, t) > 0.0


def test_decay_at_infinity():
    # compared in log space: far in the tail the values themselves fall
    # below the double underflow threshold
    for p in (LEFT, CENTER, RIGHT):
        for s in (0.5, 3.0):
            vals = [kernel_log_value(p, s + 10.0 * 2 ** k, s) for k in range(1, 11)]
            assert all(b < a for a, b in zip(vals, vals[1:]))


def test_overflow_safety_lattice():
    lattice = (0.0, 1.0, 1e2, 1e4, 1e6)
    for a in (-0.9, 0.0, 3.0):
        for d in (0.05, 0.25, 0.45):
            for w in (0.05, 0.5, 0.95):
                p = HalfLineParams(a, d, w)
                for t in lattice:
                    for s in lattice:
                        assert math.isfinite(kernel_log_value(p, t, s))


# ---------------------------------------------------------------------------
# quadrature diagnostics
# ---------------------------------------------------------------------------

def test_orthonormality_residuals():
    r = orthonormality_residuals(LEFT, 10)
    assert r.shape == (11, 11)
    assert float(r.max()) <= 1e-6


def test_orthonormality_other_params():
    assert float(orthonormality_residuals(RIGHT, 6).max()) <= 1e-6
    assert float(orthonormality_residuals(HalfLineParams(2.0, 0.1, 0.5), 6).max()) <= 1e-6


def test_eigenrelation():
    for n in range(6):
        for s in (0.5, 2.0, 10.0):
            assert eigenrelation_residual(CENTER, n, s) <= 1e-5


def test_eigenrelation_rejects_vanishing_target():
    # L_1^{(-1/2)}(1/2) = 0 exactly: the relative residual is undefined there
    with pytest.raises(ValueError):
        eigenrelation_residual(LEFT, 1, 0.5)
