import math
import os

import numpy as np
import pytest
from scipy.special import erf, gammainc

from mmslab.measures import (AtomicMeasure, Ball, CallableFunction, Density1D,
                             DiracFunction, GaussianMeasure, MeasureError,
                             TableFunction, ball_mass, ball_mass_mc,
                             counting_measure, exponential_measure,
                             gaussian_measure, integrate, lebesgue_measure)
from mmslab.spaces import EuclideanSpace, UltrametricSpace

EXP = exponential_measure()
LINE = EuclideanSpace(1)


def test_exponential_ball_masses():
    assert ball_mass(EXP, LINE, Ball(2.0, 1.0)) == pytest.approx(
        math.exp(-1) - math.exp(-3), abs=1e-15)
    assert ball_mass(EXP, LINE, Ball(0.5, 1.0)) == pytest.approx(
        1.0 - math.exp(-1.5), abs=1e-15)


def test_gaussian_1d_closed_form():
    g = gaussian_measure(1)
    s = EuclideanSpace(1)
    assert ball_mass(g, s, Ball(0.0, 1.0)) == pytest.approx(
        erf(1 / math.sqrt(2)), abs=1e-14)


def test_gaussian_origin_matches_radial_quadrature():
    # independent oracle: trapezoid on the radial density
    d, R = 5, math.sqrt(5.0)
    r = np.linspace(0, R, 200001)
    dens = r ** (d - 1) * np.exp(-r * r / 2)
    total = np.trapezoid(dens, r) / (2 ** (d / 2 - 1) * math.gamma(d / 2))
    g = gaussian_measure(d)
    s = EuclideanSpace(d)
    assert ball_mass(g, s, Ball(np.zeros(d), R)) == pytest.approx(total, rel=1e-8)


def test_gaussian_off_center_reduction_vs_mc():
    g = gaussian_measure(3)
    s = EuclideanSpace(3)
    b = Ball(np.array([1.2, 0.0, 0.0]), 1.1)
    est, se = ball_mass_mc(g, b, 2_000_000, seed=11)
    assert ball_mass(g, s, b) == pytest.approx(est, abs=3 * se)


def test_mc_total_mass_and_determinism():
    g = gaussian_measure(2)
    est, se = ball_mass_mc(g, Ball(np.zeros(2), 1000.0), 100_000, seed=5)
    assert est == pytest.approx(1.0, abs=3 * se + 1e-12)
    again, _ = ball_mass_mc(g, Ball(np.zeros(2), 1000.0), 100_000, seed=5)
    assert est == again


def test_mc_worker_count_invariance():
    g = gaussian_measure(3)
    b = Ball(np.array([0.5, 0.5, 0.0]), 1.0)
    base, _ = ball_mass_mc(g, b, 300_000, seed=42)
    os.environ["MMSLAB_THREADS"] = "4"
    try:
        threaded, _ = ball_mass_mc(g, b, 300_000, seed=42)
    finally:
        del os.environ["MMSLAB_THREADS"]
    assert base == threaded


def test_mc_5d_vs_closed_form():
    g = gaussian_measure(5)
    b = Ball(np.zeros(5), math.sqrt(5.0))
    est, se = ball_mass_mc(g, b, 1_000_000, seed=3)
    assert gammainc(2.5, 2.5) == pytest.approx(est, abs=3 * se)


def test_integrate_atomic_counting():
    s = UltrametricSpace(3, 1.0)
    xs = EuclideanSpace(1)
    m = AtomicMeasure([0.0, 1.0, 2.0], [1.0, 1.0, 1.0])
    val = integrate(m, TableFunction([1, 1, 1]), region=Ball(1.0, 1.5), space=xs)
    assert val == 3.0


def test_integrate_probability_normalization():
    assert integrate(EXP, CallableFunction(lambda t: 1.0)) == pytest.approx(1.0, abs=1e-9)


def test_integrate_piecewise_probe_image():
    # the two-branch window average integrated against the density
    def f(y):
        if y < 1.0:
            return 1.0 / (1.0 - math.exp(-1.0 - y))
        return math.exp(y) / (math.e - math.exp(-1.0))

    val = integrate(EXP, CallableFunction(f), region=Ball(1.0, 1.0))
    closed = math.e * math.log(math.e + 1.0) - math.e + 1.0 / (math.e - math.exp(-1.0))
    assert val == pytest.approx(closed, abs=1e-9)
    assert closed > 1.27


def test_dirac_integration_rules():
    assert integrate(EXP, DiracFunction(1.0, 2.5), region=Ball(1.2, 0.5)) == 2.5
    assert integrate(EXP, DiracFunction(9.0), region=Ball(1.0, 0.5)) == 0.0


def test_mass_monotone_in_radius():
    for m, s, c in [(EXP, LINE, 1.3), (gaussian_measure(2), EuclideanSpace(2), (0.7, 0.1))]:
        radii = np.linspace(0.05, 4.0, 60)
        vals = [ball_mass(m, s, Ball(c, float(r))) for r in radii]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_exponential_convexity_lower_bound():
    for w in np.linspace(0.5, 6.0, 12):
        for r in np.linspace(0.05, min(w, 2.0), 8):
            assert ball_mass(EXP, LINE, Ball(float(w), float(r))) >= 2 * r * math.exp(-w) - 1e-12


def test_open_closed_masses():
    assert ball_mass(EXP, LINE, Ball(2.0, 1.0)) == ball_mass(EXP, LINE, Ball(2.0, 1.0, closed=True))
    m = AtomicMeasure([0.0, 1.0], [1.0, 5.0])
    assert ball_mass(m, LINE, Ball(0.0, 1.0)) == 1.0
    assert ball_mass(m, LINE, Ball(0.0, 1.0, closed=True)) == 6.0


def test_density_quadrature_fallback():
    plain = Density1D(lambda t: np.exp(-t), (0.0, math.inf))
    assert plain.ball_mass(LINE, Ball(2.0, 1.0)) == pytest.approx(
        math.exp(-1) - math.exp(-3), rel=1e-9)


def test_atomic_rejects_bad_weights():
    with pytest.raises(MeasureError):
        AtomicMeasure([0.0], [0.0])
    with pytest.raises(MeasureError):
        AtomicMeasure([0.0], [-1.0])


def test_gaussian_requires_l2_space():
    g = gaussian_measure(2)
    with pytest.raises(MeasureError):
        ball_mass(g, EuclideanSpace(2, q=np.inf), Ball((0, 0), 1.0))


def test_counting_measure_and_loader(tmp_path):
    s = UltrametricSpace(4, 1.0)
    m = counting_measure(s)
    assert m.total_mass == 4.0
    path = tmp_path / "atoms.txt"
    path.write_text("# index weight\n0 1.0\n2 3.5\n")
    from mmslab.measures import load_atomic
    loaded = load_atomic(path, s)
    assert loaded.total_mass == 4.5
    assert ball_mass(loaded, s, Ball(0, 0.5)) == 1.0
