import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import erf, gammainc, gammaln

from mmslab._gaussquad import log_gammainc_lower
from mmslab.gausslab import (SQRT3_2, G_ratio_check, cap_measure_bound,
                             cap_volume_ratio, cs_formulas, firstop_check,
                             gamma_ratio_check, gaussian_ball_mass_log,
                             intersection_mass_2d, intersection_mass_2d_log,
                             l1_upper_bound, l1_upper_bound_log,
                             secondopx_check, shell_mass, shell_threshold,
                             weak_bound_threshold, weak_lower_bound)


# -- log-domain incomplete gamma ----------------------------------------------

def test_log_gammainc_matches_direct():
    for a, x in [(2.5, 1.0), (50.0, 30.0), (400.0, 290.0)]:
        assert log_gammainc_lower(a, x) == pytest.approx(
            math.log(gammainc(a, x)), abs=1e-12)


def test_log_gammainc_series_continuity():
    # straddle the underflow switchover and compare against the scaled form
    a = 500.0
    xs = np.array([120.0, 130.0, 140.0])
    vals = log_gammainc_lower(a, xs)
    assert np.all(np.diff(vals) > 0)
    # independent check at one deep-tail point via 2000-term series in mp-free
    # form: log P = a log x - x - lgamma(a+1) + log(sum)
    x = 120.0
    term, tot = 1.0, 1.0
    for k in range(1, 4000):
        term *= x / (a + k)
        tot += term
        if term < 1e-20 * tot:
            break
    expect = a * math.log(x) - x - gammaln(a + 1.0) + math.log(tot)
    assert vals[0] == pytest.approx(expect, abs=1e-10)


# -- lens masses ---------------------------------------------------------------

def test_lens_mass_vs_mc_seeded():
    rng = np.random.default_rng(314)
    for d in (2, 3, 5, 8):
        for _ in range(6):
            u = float(rng.uniform(0.0, 2.0))
            rho = float(rng.uniform(0.8, 2.2))
            rp = float(rng.uniform(0.8, 2.2))
            n = 400_000
            x = rng.standard_normal((n, d))
            c = np.zeros(d)
            c[0] = u
            hit = (np.linalg.norm(x, axis=1) < rho) & \
                (np.linalg.norm(x - c, axis=1) < rp)
            p = hit.mean()
            se = math.sqrt(max(p * (1 - p), 1 / n) / n)
            q = intersection_mass_2d(d, rho, u, rp)
            assert q == pytest.approx(p, abs=3.5 * se)


def test_lens_disjoint_and_nested():
    assert intersection_mass_2d(4, 1.0, 5.0, 1.0) == 0.0
    nested = intersection_mass_2d(4, 1.2, 0.3, 2.0)
    assert nested == pytest.approx(gammainc(2.0, 0.72), rel=1e-8)


def test_axis_ball_mass_d1_style_check():
    # d=2 ball away from origin vs polar quadrature oracle
    d, u, r = 2, 1.5, 0.8

    def polar(theta):
        # integrate the radial gaussian over the chord toward angle theta
        lo = u * math.cos(theta) - math.sqrt(r * r - (u * math.sin(theta)) ** 2)
        hi = u * math.cos(theta) + math.sqrt(r * r - (u * math.sin(theta)) ** 2)
        lo = max(lo, 0.0)
        return math.exp(-lo * lo / 2) - math.exp(-hi * hi / 2) if hi > lo else 0.0

    tmax = math.asin(r / u)
    val, _ = quad(polar, -tmax, tmax, epsabs=1e-12, limit=200)
    oracle = val / (2 * math.pi)
    assert math.exp(gaussian_ball_mass_log(d, u, r)) == pytest.approx(oracle, rel=1e-8)


# -- lemma-level checks ----------------------------------------------------------

def test_cap_measure_small_d_values():
    out2 = cap_measure_bound(2)
    assert out2.passed
    assert out2.lhs == pytest.approx(1.0 / (2.0 * math.sqrt(4 * math.pi)), rel=1e-12)
    assert out2.rhs == pytest.approx(1.0 / 6.0, abs=1e-12)
    out3 = cap_measure_bound(3)
    assert out3.passed
    assert out3.rhs == pytest.approx((1.0 - SQRT3_2) / 2.0, abs=1e-12)


def test_cap_measure_log_domain_large_d():
    out = cap_measure_bound(100)
    assert math.isfinite(out.details["log_bound"]) and out.details["log_bound"] < 0


def test_gamma_ratio_values():
    out = gamma_ratio_check(2)
    assert out.passed
    assert out.lhs == pytest.approx(1.0, abs=1e-12)
    assert out.rhs == pytest.approx(math.gamma(2.0) / math.gamma(1.5), rel=1e-12)
    out1 = gamma_ratio_check(1)
    assert out1.lhs == pytest.approx(math.sqrt(0.5), rel=1e-12)
    assert out1.rhs == pytest.approx(math.gamma(1.5) / math.gamma(1.0), rel=1e-12)
    assert gamma_ratio_check(200).passed


def test_cap_volume_ratio_small_d():
    out1 = cap_volume_ratio(1)
    assert out1.lhs == pytest.approx(0.5, abs=1e-14)
    assert out1.rhs == pytest.approx(0.75 / math.sqrt(2 * math.pi), rel=1e-12)
    out2 = cap_volume_ratio(2)
    lens_area = 2 * math.pi / 3 - math.sqrt(3) / 2      # two unit circles, centers 1 apart
    assert out2.lhs == pytest.approx(lens_area / math.pi, rel=1e-12)
    assert cap_volume_ratio(50).passed


def test_cap_volume_identity_vs_direct_integral():
    for d in (1, 2, 3, 5, 10):
        direct = 2 * math.exp(gammaln(1 + d / 2) - gammaln((d + 1) / 2)) / math.sqrt(math.pi) \
            * quad(lambda x: (1 - x * x) ** ((d - 1) / 2), 0.5, 1.0)[0]
        assert cap_volume_ratio(d).lhs == pytest.approx(direct, rel=1e-10)


def test_lens_fraction_minimized_at_touching_distance():
    # circle-lens closed form: fraction of B(0,s)?B(se1,r) over lambda B(0,r)
    def lens_fraction(s, r):
        # area of intersection of circles radius s and r at center distance s
        d = s
        a1 = r * r * math.acos((d * d + r * r - s * s) / (2 * d * r))
        a2 = s * s * math.acos((d * d + s * s - r * r) / (2 * d * s))
        a3 = 0.5 * math.sqrt((-d + r + s) * (d + r - s) * (d - r + s) * (d + r + s))
        return (a1 + a2 - a3) / (math.pi * r * r)

    r = 1.0
    fractions = [lens_fraction(s, r) for s in (1.0, 1.5, 2.0, 3.0)]
    assert all(b >= a - 1e-12 for a, b in zip(fractions, fractions[1:]))


def test_firstop_small_d():
    out = firstop_check(1, 1.0, mc_samples=400_000, seed=1)
    assert out.passed
    assert out.lhs == pytest.approx(erf(1 / math.sqrt(2)), abs=1e-12)
    assert firstop_check(3, 2.0, mc_samples=400_000, seed=2).passed
    # shrinking radius sends the mass ratio to 1, far below the factor
    assert firstop_check(2, 0.05, mc_samples=400_000, seed=3).passed


def test_secondopx_small_d():
    rhs_1d = math.exp(-0.5) * 2.0 * 0.75 / math.sqrt(2 * math.pi)
    out = secondopx_check(1, 1.0, [1.0], mc_samples=400_000, seed=4)
    assert out.passed
    assert out.rhs == pytest.approx(rhs_1d, rel=1e-12)
    assert secondopx_check(2, 1.0, [2.0, 0.0], mc_samples=400_000, seed=5).passed
    with pytest.raises(ValueError):
        secondopx_check(2, 1.0, [0.5, 0.0])


# -- shell formulas ---------------------------------------------------------------

def test_cs_checkpoints():
    cs = cs_formulas(SQRT3_2)
    assert cs.t == pytest.approx(0.75, abs=1e-12)
    assert cs.G == pytest.approx(0.5 * math.exp(-0.75), abs=1e-12)
    assert cs.G_prime == pytest.approx(math.sqrt(3) / 2 * math.exp(-0.75), abs=1e-6)


def test_cs_half():
    cs = cs_formulas(0.5)
    assert cs.t == pytest.approx(2.25 - math.sqrt(2.0), abs=1e-12)
    assert cs.t >= 0.75


def test_t_grid_minimum():
    Rs = np.linspace(1e-4, 1 - 1e-4, 10_000)
    ts = 2 + Rs ** 2 - np.sqrt(1 + 4 * Rs ** 2)
    i = int(np.argmin(ts))
    assert abs(Rs[i] - SQRT3_2) < 1e-3
    assert abs(ts[i] - 0.75) < 1e-7


def test_F_below_G_on_grid():
    from mmslab.gausslab import _F, _t_of
    for R in np.linspace(0.05, 0.95, 31):
        ts = np.linspace((1 - R) ** 2, (1 + R) ** 2, 400)
        assert np.all(_F(ts, R) <= _F(_t_of(R), R) + 1e-12)


def test_shell_mass_bounds():
    v100 = shell_mass(100)
    assert v100 > 1.0 / math.sqrt(math.pi * math.e ** 3 * 100)
    assert 0.0 < v100 < 1.0
    assert shell_mass(1000) > 1.0 / math.sqrt(math.pi * math.e ** 3 * 1000)


def test_shell_mass_radial_quadrature_oracle():
    d = 10
    lo = math.sqrt(d - 1.0) - 1.0 / math.sqrt(d - 1.0)
    hi = math.sqrt(d - 1.0)
    norm = 2 ** (d / 2 - 1) * math.gamma(d / 2)
    val, _ = quad(lambda r: r ** (d - 1) * math.exp(-r * r / 2) / norm, lo, hi,
                  epsabs=1e-14)
    assert shell_mass(d) == pytest.approx(val, rel=1e-10)


def test_shell_threshold_reported():
    rep = shell_threshold(400)
    assert rep["d0"] == 2 and rep["failures"] == []


def test_G_ratio_and_concavity():
    out = G_ratio_check(100)
    assert out.passed and out.lhs > math.exp(-1.0)
    assert out.details["G_second"] < 0
    lim = math.exp(-SQRT3_2)
    d_far = abs(G_ratio_check(100).lhs - lim)
    d_mid = abs(G_ratio_check(1000).lhs - lim)
    d_near = abs(G_ratio_check(10_000).lhs - lim)
    assert d_near < d_mid < d_far


def test_G_ratio_threshold_is_small_d():
    assert all(G_ratio_check(d).passed for d in range(3, 30))


# -- the bound pipelines -----------------------------------------------------------

def test_rate_sanity():
    assert 2.0 / (math.sqrt(3.0) * math.exp(0.125)) > 1.019


def test_l1_upper_values():
    assert l1_upper_bound(1) == pytest.approx(
        math.sqrt(2 * math.pi) * (1 + (2 / math.sqrt(3)) ** 2), rel=1e-12)
    assert math.exp(l1_upper_bound_log(100) / 100) < 2.1


def test_weak_lower_bound_regressions():
    rep = weak_lower_bound(200, 1.0, region="ball", u_grid=64)
    assert rep.weak_lower == pytest.approx(85.22, rel=0.02)
    assert rep.alpha == pytest.approx(0.5042, abs=0.005)
    assert rep.alpha <= 1.0
    assert rep.quad_error < 1e-6
    shell = weak_lower_bound(200, 1.0, region="shell", u_grid=64)
    assert shell.weak_lower == pytest.approx(6.900, rel=0.02)
    assert shell.weak_lower < rep.weak_lower


def test_weak_minimum_sits_at_outer_edge():
    rep = weak_lower_bound(50, 1.0, region="ball", u_grid=64)
    assert rep.u_at_min == pytest.approx(math.sqrt(49.0), rel=1e-6)


def test_weak_below_strong_at_small_d():
    rep = weak_lower_bound(10, 1.0, region="ball", u_grid=32)
    assert rep.weak_lower <= rep.strong_upper


def test_weak_shell_region_fails_at_200_and_passes_far_out():
    lo = weak_lower_bound(200, 1.0, region="shell", u_grid=64)
    assert lo.weak_lower_log < 200 * math.log(1.019)
    hi = weak_lower_bound(200_000, 1.0, region="shell", u_grid=32)
    assert hi.weak_lower_log > 200_000 * math.log(1.019)


def test_vr_envelope_dominates_unnormalized_mass():
    for d in (10, 30):
        cs = cs_formulas(SQRT3_2, d=d)
        u = math.sqrt(d - 1.0)
        rp = SQRT3_2 * u
        log_mu = gaussian_ball_mass_log(d, u, rp) + 0.5 * d * math.log(2 * math.pi)
        assert log_mu <= cs.V_log(d)
