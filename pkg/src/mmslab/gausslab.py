"""Dimension-dependent gaussian bounds for averaging operators.

Upper route: a closed-form L1 bound 2^{d-1} sqrt(2 pi d) + sqrt(pi (d+1))
(2/sqrt 3)^{d+1}, with its two lemma-level ingredients (sphere cap measure,
unit-ball lens volume) individually checkable.

Lower route: weak-type constants of the averaging operator at radius
sqrt(3(d-1))/2, certified by direct quadrature.  The indicator of the
centered ball of the same radius is averaged; the infimum alpha of that
average over centers up to norm sqrt(d-1) is located by grid minimization,
so the superlevel set {A f >= alpha} provably contains either the thin
concentration shell (region="shell") or the whole ball of radius
sqrt(d-1) (region="ball", the default and much stronger choice).  The
certified constant is alpha * mu(superlevel)^{1/p} / mu(ball)^{1/p}.

Everything runs in the log domain, so dimensions up to 10^6 are routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import betainc, gammainc, gammaln

from ._gaussquad import (axis_ball_mass_log, lens_mass_log, log_gammainc_lower,
                         origin_ball_mass_log)
from .measures import Ball, GaussianMeasure, ball_mass_mc
from .spaces import EuclideanSpace

__all__ = [
    "CheckOutcome",
    "CSFormulas",
    "GaussBoundReport",
    "SQRT3_2",
    "cap_measure_bound",
    "gamma_ratio_check",
    "firstop_check",
    "cap_volume_ratio",
    "secondopx_check",
    "cs_formulas",
    "shell_mass",
    "shell_mass_log",
    "shell_threshold",
    "G_ratio_check",
    "intersection_mass_2d",
    "intersection_mass_2d_log",
    "gaussian_ball_mass_log",
    "weak_lower_bound",
    "l1_upper_bound",
    "l1_upper_bound_log",
    "weak_bound_threshold",
    "growth_rate_series",
]

SQRT3_2 = math.sqrt(3.0) / 2.0


@dataclass
class CheckOutcome:
    """Result of a certified inequality check.

    ``status`` is "pass" when the inequality holds with the stated margin,
    "fail" when it is violated with margin, and "inconclusive" when a Monte
    Carlo confidence interval straddles the threshold (rerun with more
    samples).
    """

    name: str
    status: str
    lhs: float
    rhs: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status,
                "lhs": self.lhs, "rhs": self.rhs, **self.details}


# -- lemma-level ingredients -------------------------------------------------

def cap_measure_bound(d: int) -> CheckOutcome:
    """1 / (2^{d-1} sqrt(2 pi d)) against the exact normalized cap measure.

    The cap is the set of unit vectors with first coordinate >= sqrt(3)/2;
    its normalized surface measure is (1/2) I_{1/4}((d-1)/2, 1/2).  The
    closed-form bound must sit below it.  Log-domain values are attached so
    huge d stays finite.
    """
    if d < 2:
        raise ValueError("spherical caps need d >= 2")
    log_bound = -(d - 1) * math.log(2.0) - 0.5 * math.log(2.0 * math.pi * d)
    exact = 0.5 * betainc((d - 1) / 2.0, 0.5, 0.25)
    status = "pass" if (exact > 0 and log_bound <= math.log(exact)) else "fail"
    return CheckOutcome(name="cap-measure", status=status,
                        lhs=math.exp(log_bound), rhs=exact,
                        details={"log_bound": log_bound, "d": d})


def gamma_ratio_check(d: int) -> CheckOutcome:
    """(d/2)^{1/2} <= Gamma(1 + d/2) / Gamma(1/2 + d/2), via log-gamma."""
    if d < 1:
        raise ValueError("d >= 1")
    lhs = 0.5 * math.log(d / 2.0)
    rhs = gammaln(1.0 + d / 2.0) - gammaln(0.5 + d / 2.0)
    return CheckOutcome(name="gamma-ratio", status="pass" if lhs <= rhs else "fail",
                        lhs=math.exp(lhs), rhs=math.exp(rhs), details={"d": d})


def cap_volume_ratio(d: int) -> CheckOutcome:
    """Lens fraction lambda(B(0,1) ∩ B(e1,1)) / lambda(B(0,1)).

    Equals I_{3/4}((d+1)/2, 1/2) exactly (the slab integral of the section
    volumes collapses to a regularized incomplete beta).  Must dominate
    (sqrt3/2)^{d+1} / sqrt(pi (d+1)).
    """
    if d < 1:
        raise ValueError("d >= 1")
    value = betainc((d + 1) / 2.0, 0.5, 0.75)
    log_rhs = (d + 1) * math.log(SQRT3_2) - 0.5 * math.log(math.pi * (d + 1))
    ok = value > 0 and math.log(value) >= log_rhs
    return CheckOutcome(name="cap-volume-ratio", status="pass" if ok else "fail",
                        lhs=value, rhs=math.exp(log_rhs),
                        details={"log_rhs": log_rhs, "d": d})


def firstop_check(d: int, r: float, mc_samples: int = 1_000_000,
                  seed: int = 0) -> CheckOutcome:
    """gamma(B_cl(0,r)) <= 2^{d-1} sqrt(2 pi d) gamma(B_cl(v,r)), |v| = r.

    The centered mass is the radial closed form; the shifted one is seeded
    Monte Carlo, and the verdict requires a 3-sigma margin either way.
    """
    if d < 1 or r <= 0:
        raise ValueError("need d >= 1 and r > 0")
    lhs = float(gammainc(d / 2.0, r * r / 2.0))
    factor = math.exp((d - 1) * math.log(2.0) + 0.5 * math.log(2.0 * math.pi * d))
    m = GaussianMeasure(d)
    center = np.zeros(d)
    center[0] = r
    est, se = ball_mass_mc(m, Ball(center, r, closed=True), mc_samples, seed)
    details = {"d": d, "r": r, "shifted_mass": est, "std_error": se,
               "factor": factor, "seed": seed, "samples": mc_samples}
    if lhs <= factor * (est - 3.0 * se):
        status = "pass"
    elif lhs > factor * (est + 3.0 * se):
        status = "fail"
    else:
        status = "inconclusive"
    return CheckOutcome(name="centered-vs-shifted", status=status,
                        lhs=lhs, rhs=factor * est, details=details)


def secondopx_check(d: int, r: float, x, mc_samples: int = 1_000_000,
                    seed: int = 0) -> CheckOutcome:
    """Off-center lower bound for unnormalized gaussian ball mass.

    mu B(x,r) >= e^{-|x|^2/2} lambda(B(0,r)) (sqrt3/2)^{d+1} / sqrt(pi(d+1))
    for |x| >= r, checked with a 3-sigma Monte Carlo margin.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (d,):
        raise ValueError("center x must be a d-vector")
    norm = float(np.linalg.norm(x))
    if norm < r:
        raise ValueError("the bound applies for |x| >= r")
    m = GaussianMeasure(d, normalized=False)
    est, se = ball_mass_mc(m, Ball(x, r), mc_samples, seed)
    log_lam = 0.5 * d * math.log(math.pi) + d * math.log(r) - gammaln(1.0 + d / 2.0)
    log_rhs = (-0.5 * norm * norm + log_lam
               + (d + 1) * math.log(SQRT3_2) - 0.5 * math.log(math.pi * (d + 1)))
    rhs = math.exp(log_rhs)
    details = {"d": d, "r": r, "norm_x": norm, "estimate": est, "std_error": se,
               "seed": seed, "samples": mc_samples}
    if est - 3.0 * se >= rhs:
        status = "pass"
    elif est + 3.0 * se < rhs:
        status = "fail"
    else:
        status = "inconclusive"
    return CheckOutcome(name="offcenter-lower", status=status, lhs=est, rhs=rhs,
                        details=details)


# -- the shell auxiliary functions -------------------------------------------

def _t_of(R: float) -> float:
    return 2.0 + R * R - math.sqrt(1.0 + 4.0 * R * R)


def _F(t, R):
    return (t - (1.0 + t - R * R) ** 2 / 4.0) * np.exp(-t)


@dataclass
class CSFormulas:
    """Auxiliary quantities controlling near-shell gaussian ball masses."""

    R: float
    t: float
    G: float
    G_prime: float
    d: Optional[int] = None

    @staticmethod
    def F(t, R):
        return _F(t, R)

    def V_log(self, d: Optional[int] = None) -> float:
        """log of the shell-centered ball-mass envelope at dimension d.

        Convention matches the unnormalized gaussian e^{-|x|^2/2} dx.
        """
        d = d if d is not None else self.d
        if d is None or d < 3:
            raise ValueError("V needs a dimension d >= 3")
        R = self.R
        log_sigma = (math.log(d - 1.0) + 0.5 * (d - 1) * math.log(math.pi)
                     - gammaln((d + 1) / 2.0))
        return (math.log(2.0) + log_sigma + 0.5 * d * math.log(d - 1.0)
                + math.log(R) - math.log(d - 1.0) - 0.5 * math.log(1.0 - R * R)
                + 0.5 * (d - 1) * math.log(self.G))

    def V(self, d: Optional[int] = None) -> float:
        return math.exp(self.V_log(d))


def cs_formulas(R: float, d: Optional[int] = None, fd_step: float = 1e-6) -> CSFormulas:
    """Evaluate t(R), G(R) and the central-difference G'(R)."""
    if not (0.0 < R < 1.0):
        raise ValueError("R must lie in (0, 1)")
    t = _t_of(R)
    if not ((1.0 - R) ** 2 - 1e-12 <= t <= (1.0 + R) ** 2 + 1e-12):
        raise AssertionError("t(R) escaped its bracket")
    if t < 0.75 - 1e-12:
        raise AssertionError("t(R) fell below its global minimum 3/4")
    G = float(_F(t, R))
    gp = float((_F(_t_of(R + fd_step), R + fd_step)
                - _F(_t_of(R - fd_step), R - fd_step)) / (2.0 * fd_step))
    return CSFormulas(R=R, t=t, G=G, G_prime=gp, d=d)


def shell_mass(d: int) -> float:
    """gamma^d of the annulus between radii sqrt(d-1) - 1/sqrt(d-1) and sqrt(d-1)."""
    return math.exp(shell_mass_log(d))


def shell_mass_log(d: int) -> float:
    if d < 2:
        raise ValueError("d >= 2")
    a = 0.5 * d
    hi = 0.5 * (d - 1.0)
    lo_r = math.sqrt(d - 1.0) - 1.0 / math.sqrt(d - 1.0)
    lo = 0.5 * lo_r * lo_r
    lg_hi = float(log_gammainc_lower(a, hi))
    lg_lo = float(log_gammainc_lower(a, lo))
    return lg_hi + math.log1p(-math.exp(lg_lo - lg_hi))


def shell_threshold(d_max: int = 1000) -> dict:
    """First dimension from which the shell dominates 1/sqrt(pi e^3 d)."""
    failures = []
    first_pass = None
    for d in range(2, d_max + 1):
        ok = shell_mass_log(d) > -0.5 * math.log(math.pi * math.e ** 3 * d)
        if ok and first_pass is None:
            first_pass = d
        if not ok:
            failures.append(d)
    return {"d0": first_pass, "failures_after_d0": [f for f in failures
                                                    if first_pass and f > first_pass],
            "failures": failures, "d_max": d_max}


def G_ratio_check(d: int, fd_step: float = 1e-4) -> CheckOutcome:
    """(G(sqrt3/2) / G(sqrt3/2 + 1/(d-1)))^{(d-1)/2} > 1/e, plus concavity.

    The ratio converges to e^{-sqrt3/2} ~ 0.42062 from above as d grows.
    G'' at sqrt3/2 must be negative (second central difference).
    """
    if d < 3:
        raise ValueError("d >= 3")
    R0 = SQRT3_2
    h = 1.0 / (d - 1.0)
    g0 = float(_F(_t_of(R0), R0))
    g1 = float(_F(_t_of(R0 + h), R0 + h))
    ratio = (g0 / g1) ** ((d - 1) / 2.0)
    gpp = float((_F(_t_of(R0 + fd_step), R0 + fd_step) - 2.0 * g0
                 + _F(_t_of(R0 - fd_step), R0 - fd_step)) / fd_step ** 2)
    ok = ratio > math.exp(-1.0) and gpp < 0.0
    return CheckOutcome(name="shell-envelope-ratio", status="pass" if ok else "fail",
                        lhs=ratio, rhs=math.exp(-1.0),
                        details={"d": d, "G_second": gpp,
                                 "limit": math.exp(-SQRT3_2)})


# -- lens masses and the weak-type pipeline -----------------------------------

def intersection_mass_2d_log(d: int, rho: float, u: float, rp: float,
                             nodes: int = 512) -> float:
    """log gamma^d( B(0,rho) ∩ B(u e1, rp) ) by the rotational reduction."""
    return lens_mass_log(d, rho, u, rp, nodes=nodes)


def intersection_mass_2d(d: int, rho: float, u: float, rp: float,
                         nodes: int = 512) -> float:
    return math.exp(intersection_mass_2d_log(d, rho, u, rp, nodes=nodes))


def gaussian_ball_mass_log(d: int, center_norm: float, r: float,
                           nodes: int = 512) -> float:
    """log gamma^d of a ball at distance ``center_norm`` from the origin."""
    if center_norm == 0.0:
        return origin_ball_mass_log(d, r)
    return axis_ball_mass_log(d, center_norm, r, nodes=nodes)


@dataclass
class GaussBoundReport:
    d: int
    p: float
    strong_upper: float
    strong_upper_log: float
    weak_lower: float
    weak_lower_log: float
    alpha: float
    alpha_log: float
    region: str
    u_at_min: float
    shell_mass_log: float
    superlevel_mass_log: float
    ball_mass_log: float
    cap_bound_log: float
    grid: dict = field(default_factory=dict)
    quad_error: float = float("nan")

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in (
            "d", "p", "strong_upper", "strong_upper_log", "weak_lower",
            "weak_lower_log", "alpha", "alpha_log", "region", "u_at_min",
            "shell_mass_log", "superlevel_mass_log", "ball_mass_log",
            "cap_bound_log", "quad_error")}
        out["grid"] = self.grid
        return out


def _alpha_log(d: int, rho: float, u: float, nodes: int = 512) -> float:
    if u <= 0.0:
        return 0.0
    return (lens_mass_log(d, rho, u, rho, nodes=nodes)
            - axis_ball_mass_log(d, u, rho, nodes=nodes))


def weak_lower_bound(d: int, p: float = 1.0, region: str = "ball",
                     u_grid: int = 256, nodes: int = 512) -> GaussBoundReport:
    """Certified weak-type (p,p) lower bound at radius sqrt(3(d-1))/2.

    The probe is the indicator of B(0, sqrt3/2 sqrt(d-1)).  alpha is the grid
    minimum (256 points, one refinement pass) of its ball average over
    centers u e1; the superlevel set then contains the shell
    (region="shell") or the ball B(0, sqrt(d-1)) (region="ball").  The bound
    alpha * mass(superlevel)^{1/p} / mass(probe ball)^{1/p} is exact up to
    quadrature error, which is estimated by a half-resolution rerun.
    """
    if d < 10:
        raise ValueError("the shell construction needs d >= 10")
    if region not in ("ball", "shell"):
        raise ValueError("region must be 'ball' or 'shell'")
    rho = SQRT3_2 * math.sqrt(d - 1.0)
    hi = math.sqrt(d - 1.0)
    lo = hi - 1.0 / hi
    us = np.linspace(lo if region == "shell" else 0.0, hi, u_grid)
    vals = np.array([_alpha_log(d, rho, float(u), nodes) for u in us])
    i = int(np.argmin(vals))
    a, b = us[max(0, i - 1)], us[min(u_grid - 1, i + 1)]
    us2 = np.linspace(a, b, 64)
    vals2 = np.array([_alpha_log(d, rho, float(u), nodes) for u in us2])
    j = int(np.argmin(vals2))
    if vals2[j] < vals[i]:
        alpha_log, u_min = float(vals2[j]), float(us2[j])
    else:
        alpha_log, u_min = float(vals[i]), float(us[i])

    lb_log = origin_ball_mass_log(d, rho)
    sh_log = shell_mass_log(d)
    sup_log = sh_log if region == "shell" else float(log_gammainc_lower(0.5 * d, 0.5 * (d - 1.0)))
    bound_log = alpha_log + (sup_log - lb_log) / p

    coarse = _alpha_log(d, rho, u_min, nodes // 2)
    quad_err = abs(math.exp(coarse - alpha_log) - 1.0)

    up_log = l1_upper_bound_log(d) / p
    return GaussBoundReport(
        d=d, p=p,
        strong_upper=math.exp(up_log) if up_log < 700 else math.inf,
        strong_upper_log=up_log,
        weak_lower=math.exp(bound_log) if bound_log < 700 else math.inf,
        weak_lower_log=bound_log,
        alpha=math.exp(alpha_log), alpha_log=alpha_log,
        region=region, u_at_min=u_min,
        shell_mass_log=sh_log, superlevel_mass_log=sup_log,
        ball_mass_log=lb_log,
        cap_bound_log=-(d - 1) * math.log(2.0) - 0.5 * math.log(2.0 * math.pi * d),
        grid={"u_points": u_grid, "refined": 64, "nodes": nodes,
              "u_range": [float(us[0]), float(hi)]},
        quad_error=quad_err)


def l1_upper_bound_log(d: int) -> float:
    """log of 2^{d-1} sqrt(2 pi d) + sqrt(pi (d+1)) (2/sqrt3)^{d+1}."""
    if d < 1:
        raise ValueError("d >= 1")
    t1 = (d - 1) * math.log(2.0) + 0.5 * math.log(2.0 * math.pi * d)
    t2 = 0.5 * math.log(math.pi * (d + 1)) + (d + 1) * math.log(2.0 / math.sqrt(3.0))
    return float(np.logaddexp(t1, t2))


def l1_upper_bound(d: int) -> float:
    lg = l1_upper_bound_log(d)
    return math.exp(lg) if lg < 700 else math.inf


def growth_rate_series(ds, p: float = 1.0, region: str = "shell",
                       u_grid: int = 128) -> list:
    """(weak bound)^{p/d} along a dimension sweep (growth-rate witnesses)."""
    out = []
    for d in ds:
        rep = weak_lower_bound(int(d), p=p, region=region, u_grid=u_grid)
        out.append((int(d), math.exp(rep.weak_lower_log * p / d)))
    return out


def weak_bound_threshold(target_rate: float = 1.019, p: float = 1.0,
                         region: str = "shell", lo: int = 1000,
                         hi: Optional[int] = None, u_grid: int = 64,
                         rel: float = 0.01) -> dict:
    """Smallest dimension (to relative ``rel``) where the certified weak-type
    bound exceeds target_rate^{d/p}, found by doubling plus bisection."""
    def ok(d: int) -> bool:
        rep = weak_lower_bound(d, p=p, region=region, u_grid=u_grid)
        return rep.weak_lower_log > (d / p) * math.log(target_rate)

    evals = 0
    if hi is None:
        hi = lo
        while not ok(hi):
            evals += 1
            lo = hi
            hi *= 2
            if hi > 64_000_000:
                raise RuntimeError("no passing dimension found below 64e6")
    while hi - lo > rel * hi:
        mid = (lo + hi) // 2
        evals += 1
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return {"d0": hi, "bracket": [lo, hi], "target_rate": target_rate,
            "p": p, "region": region, "evaluations": evals}
