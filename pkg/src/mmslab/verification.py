"""The quantitative claims table: every desk-scale claim as a checked run.

``run_claims`` executes the full battery and returns one record per claim
with the computed value, the expected value or window, a pass flag and the
wall time.  ``quick=True`` skips the Monte Carlo legs and the threshold
search, keeping the run under a minute.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.linalg import svdvals

from . import gausslab, gallery, geometry, norms, operators
from .measures import (AtomicMeasure, Ball, DiracFunction, counting_measure,
                       exponential_measure, lebesgue_measure)
from .spaces import EuclideanSpace, PathGraphSpace, UltrametricSpace

__all__ = ["ClaimResult", "run_claims", "CLAIMS"]


@dataclass
class ClaimResult:
    claim: int
    title: str
    passed: bool
    value: object
    expected: str
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] claim {self.claim:2d}: {self.title} = {self.value} (want {self.expected})"

    def to_dict(self) -> dict:
        return {"claim": self.claim, "title": self.title, "passed": self.passed,
                "value": self.value, "expected": self.expected,
                "seconds": round(self.seconds, 3), "details": self.details}


def _claim_01(quick: bool, seed: int) -> ClaimResult:
    m = exponential_measure()
    s = EuclideanSpace(1)
    est = geometry.local_comparability(m, s, 1.0)
    err = abs(est.value - math.e)
    return ClaimResult(1, "exponential radius-1 comparability constant",
                       err < 1e-4, est.value, f"e = {math.e:.9f} within 1e-4",
                       details={"error": err, "probes": est.probes})


def _claim_02(quick: bool, seed: int) -> ClaimResult:
    m = exponential_measure()
    s = EuclideanSpace(1)
    probe = DiracFunction(1.0)

    def integrand(x):
        return operators.average(m, s, 1.0, probe, x) * math.exp(-x)

    v1, _ = quad(integrand, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12)
    v2, _ = quad(integrand, 1.0, 2.0, epsabs=1e-12, epsrel=1e-12)
    numeric = v1 + v2
    closed = math.e * math.log(math.e + 1.0) - math.e + 1.0 / (math.e - math.exp(-1.0))
    ok = abs(numeric - closed) < 1e-8 and closed > 1.27
    return ClaimResult(2, "exponential probe-norm quadrature", ok, numeric,
                       f"{closed:.10f} within 1e-8 and > 1.27",
                       details={"closed_form": closed,
                                "difference": abs(numeric - closed)})


def _claim_03(quick: bool, seed: int) -> ClaimResult:
    m = exponential_measure()
    s = EuclideanSpace(1)
    worst = 0.0
    per_radius = {}
    for k in range(-4, 5):
        r = 2.0 ** k
        grid = np.linspace(1e-9, max(12.0, 4.0 * r), 512 if quick else 2048)
        rep = norms.fubini_l1_upper(m, s, r, grid)
        per_radius[r] = rep.value
        worst = max(worst, rep.value)
    return ClaimResult(3, "exponential uniform L1 bound over radii", worst <= 2.0 + 1e-6,
                       worst, "<= 2 + 1e-6", details={"per_radius": per_radius})


def _claim_04(quick: bool, seed: int) -> ClaimResult:
    entry = gallery.build_broom(16)
    kern = norms.build_kernel(entry.measure, entry.space, 1.5)
    l1 = norms.op_norm_l1(kern)
    wk = norms.weak_type_constant(kern, p=1.0)
    ok = l1.value >= 8.0 and wk.value >= 8.0
    return ClaimResult(4, "broom n=16 kernel blow-up", ok,
                       {"l1": l1.value, "weak11": wk.value}, ">= 8 and >= 8",
                       details={"witness_column": l1.witness})


def _claim_05(quick: bool, seed: int) -> ClaimResult:
    R0 = gausslab.SQRT3_2
    cs = gausslab.cs_formulas(R0)
    t_err = abs(cs.t - 0.75)
    g_err = abs(cs.G - 0.5 * math.exp(-0.75))
    gp_err = abs(cs.G_prime - math.sqrt(3.0) / 2.0 * math.exp(-0.75))
    gpp = gausslab.G_ratio_check(100).details["G_second"]
    ok = t_err < 1e-12 and g_err < 1e-12 and gp_err < 1e-6 and gpp < 0
    return ClaimResult(5, "shell-envelope closed-form checkpoints", ok,
                       {"t": cs.t, "G": cs.G, "G_prime": cs.G_prime, "G_second": gpp},
                       "t=3/4, G=1/(2e^{3/4}) to 1e-12; G'=sqrt3/(2e^{3/4}) to 1e-6; G''<0")


def _gaussian_grid_measure(d: int, half_width: float, n_side: int) -> AtomicMeasure:
    axes = [np.linspace(-half_width, half_width, n_side)] * d
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in mesh], axis=1)
    w = np.exp(-0.5 * np.sum(pts ** 2, axis=1))
    return AtomicMeasure(pts, w, name=f"gaussian-grid-{d}d")


def _claim_06(quick: bool, seed: int) -> ClaimResult:
    worst = 0.0
    for d in range(60, 501):
        worst = max(worst, math.exp(gausslab.l1_upper_bound_log(d) / d))
    kernel_ok = True
    kernel_vals = {}
    for d, (hw, ns) in {1: (4.0, 41), 2: (3.0, 13), 3: (2.5, 9)}.items():
        m = _gaussian_grid_measure(d, hw, ns)
        s = EuclideanSpace(d)
        kern = norms.build_kernel(m, s, 1.0)
        val = norms.op_norm_l1(kern).value
        kernel_vals[d] = val
        kernel_ok = kernel_ok and val <= gausslab.l1_upper_bound(d)
    ok = worst < 2.15 and kernel_ok
    return ClaimResult(6, "gaussian L1 upper bound growth rate", ok, worst,
                       "(bound)^{1/d} < 2.15 on [60,500]; small-d kernels below bound",
                       details={"kernel_norms": kernel_vals})


def _claim_07(quick: bool, seed: int) -> ClaimResult:
    target = 200 * math.log(1.019)
    rep = gausslab.weak_lower_bound(200, p=1.0, region="ball")
    anchor_ok = rep.weak_lower_log > target
    series = gausslab.growth_rate_series([50, 100, 150, 200], p=1.0, region="shell")
    rates = [v for _, v in series]
    monotone_ok = all(b >= a for a, b in zip(rates, rates[1:]))
    details = {"anchor_bound": rep.weak_lower, "anchor_log": rep.weak_lower_log,
               "target_log": target, "alpha": rep.alpha,
               "shell_growth_rates": dict(series), "region": rep.region}
    if not quick:
        thr = gausslab.weak_bound_threshold(region="shell")
        confirm = gausslab.weak_lower_bound(thr["d0"], p=1.0, region="shell", u_grid=64)
        details["shell_threshold"] = thr
        details["shell_threshold_pass"] = bool(
            confirm.weak_lower_log > thr["d0"] * math.log(1.019))
        small = [d for d in (20, 30, 40, 50)
                 if gausslab.weak_lower_bound(d, 1.0, region="ball", u_grid=64)
                 .weak_lower_log > d * math.log(1.019)]
        details["ball_first_pass_scanned"] = small[0] if small else None
    ok = anchor_ok and monotone_ok
    return ClaimResult(7, "gaussian weak-type growth", ok,
                       {"bound_at_200": rep.weak_lower, "rates": rates},
                       f"> 1.019^200 = {math.exp(target):.2f}; shell rates nondecreasing",
                       details=details)


def _claim_08(quick: bool, seed: int) -> ClaimResult:
    details = {}
    ok = True
    for d in range(1, 201):
        if not gausslab.gamma_ratio_check(d).passed:
            ok = False
            details.setdefault("gamma_failures", []).append(d)
        if not gausslab.cap_volume_ratio(d).passed:
            ok = False
            details.setdefault("capvol_failures", []).append(d)
        if d >= 2 and not gausslab.cap_measure_bound(d).passed:
            ok = False
            details.setdefault("cap_failures", []).append(d)
    shell = gausslab.shell_threshold(1000)
    details["shell_d0"] = shell["d0"]
    ok = ok and shell["d0"] is not None and not shell["failures_after_d0"]
    if not quick:
        rng = np.random.default_rng(seed)
        escalation = (400_000, 6_400_000, 25_600_000)

        def settle(run):
            # an interval straddling the threshold is rerun with more samples
            for attempt, n in enumerate(escalation):
                out = run(n, attempt)
                if out.status != "inconclusive":
                    return out
            return out

        inconclusive = 0
        for i in range(10):
            d = int(rng.integers(1, 9))
            r = float(rng.uniform(0.75, 2.5))
            out = settle(lambda n, a: gausslab.firstop_check(
                d, r, n, seed=seed + 1000 * a + i))
            if out.status == "fail":
                ok = False
                details.setdefault("firstop_failures", []).append((d, r))
            elif out.status == "inconclusive":
                inconclusive += 1
        for i in range(10):
            d = int(rng.integers(1, 9))
            r = float(rng.uniform(0.75, 2.5))
            direction = rng.standard_normal(d)
            direction /= np.linalg.norm(direction)
            x = direction * float(rng.uniform(r, r + 2.0))
            out = settle(lambda n, a: gausslab.secondopx_check(
                d, r, x, n, seed=seed + 1000 * a + 100 + i))
            if out.status == "fail":
                ok = False
                details.setdefault("secondopx_failures", []).append((d, r))
            elif out.status == "inconclusive":
                inconclusive += 1
        details["inconclusive"] = inconclusive
        ok = ok and inconclusive == 0
    return ClaimResult(8, "lemma-level gaussian inequalities", ok,
                       {"shell_d0": shell["d0"]},
                       "all checks pass with 3-sigma margins",
                       details=details)


def _vitali_family(kind: str, rng) -> tuple:
    if kind == "lebesgue":
        m, s = lebesgue_measure(), EuclideanSpace(1)
        balls = [Ball(float(rng.uniform(-5, 5)), float(rng.uniform(0.2, 1.5)))
                 for _ in range(12)]
    elif kind == "exponential":
        m, s = exponential_measure(), EuclideanSpace(1)
        balls = [Ball(float(rng.uniform(0.1, 8.0)), float(rng.uniform(0.1, 2.0)))
                 for _ in range(12)]
    elif kind == "broom":
        entry = gallery.build_broom(6)
        m, s = entry.measure, entry.space
        n = len(s.universe)
        balls = [Ball(int(rng.integers(0, n)), float(rng.uniform(0.3, 4.0)))
                 for _ in range(12)]
    elif kind == "ultrametric":
        s = UltrametricSpace(7, 1.0)
        m = counting_measure(s)
        balls = [Ball(int(rng.integers(0, 7)), float(rng.uniform(0.5, 2.5)))
                 for _ in range(12)]
    else:
        raise ValueError(kind)
    return m, s, balls


def _claim_09(quick: bool, seed: int) -> ClaimResult:
    from .spaces import balls_intersect
    n_seeds = 20 if quick else 100
    ok = True
    worst = {}
    offsets = {"lebesgue": 1, "broom": 2, "ultrametric": 3, "exponential": 4}
    for kind in ("lebesgue", "broom", "ultrametric", "exponential"):
        worst_gap = 0.0
        for i in range(n_seeds):
            rng = np.random.default_rng(seed * 100003 + offsets[kind] * 10007 + i)
            m, s, balls = _vitali_family(kind, rng)
            res = geometry.vitali_select(m, s, balls)
            for a in range(len(res.selected)):
                for b in range(a + 1, len(res.selected)):
                    if balls_intersect(s, balls[res.selected[a]], balls[res.selected[b]]):
                        ok = False
            if res.k_reference is None or res.ratio > res.k_reference + 1e-9:
                ok = False
            else:
                worst_gap = max(worst_gap, res.ratio / res.k_reference)
        worst[kind] = worst_gap
    return ClaimResult(9, "greedy disjointification mass ratios", ok, worst,
                       "selected balls disjoint; ratio <= blossom reference",
                       details={"families_per_space": n_seeds})


def _exp_line_space(n: int, h: float) -> tuple:
    xs = np.arange(n) * h
    M = np.abs(xs[:, None] - xs[None, :])
    from .spaces import FiniteMetricSpace
    s = FiniteMetricSpace(M)
    m = AtomicMeasure(np.arange(n), np.exp(-xs), name="exp-line")
    return m, s


def _grid_space(side: int) -> tuple:
    pts = np.array([(i, j) for i in range(side) for j in range(side)], dtype=float)
    M = np.max(np.abs(pts[:, None, :] - pts[None, :, :]), axis=2)
    from .spaces import FiniteMetricSpace
    s = FiniteMetricSpace(M)
    m = AtomicMeasure(np.arange(side * side), np.ones(side * side), name="grid")
    return m, s


def _claim_10(quick: bool, seed: int) -> ClaimResult:
    _, s1 = _exp_line_space(24, 1.0)
    m1 = AtomicMeasure(np.arange(24), np.ones(24), name="uniform-line")
    m2, s2 = _exp_line_space(32, 0.5)
    m3, s3 = _grid_space(5)
    ok = True
    table = {}
    for name, (m, s) in {"uniform-line": (m1, s1), "exp-line": (m2, s2),
                         "grid-5x5": (m3, s3)}.items():
        D = np.unique(s.matrix)
        radii = D[D > 0] + 1e-9 * D[-1]
        c_est = geometry.comparability_sup(m, s, radii)
        d_count = 0
        for r in radii:
            for x in s.universe:
                d_count = max(d_count, geometry.geometric_doubling_number(
                    s, Ball(int(x), 2.0 * float(r)), list(s.universe)))
        bl = geometry.bl_constant(m, s, centers=list(s.universe), radii=radii)
        blu = geometry.blossom_constant(m, s, centers=list(s.universe), radii=radii)
        dbl = geometry.doubling_constant(m, s, centers=list(s.universe), radii=radii)
        k_chain, _ = geometry.measured_chain_length(s, radii=radii)
        row = {"C": c_est.value, "D": d_count, "K": k_chain,
               "bl": bl.value, "blu": blu.value, "doubling": dbl.value}
        row["bl_ok"] = bl.value <= d_count * c_est.value ** 3 + 1e-9
        row["blu_ok"] = blu.value <= d_count ** 2 * c_est.value ** 4 + 1e-9
        row["chain_ok"] = (math.isfinite(k_chain) and dbl.value <=
                           geometry.chain_doubling_bound(c_est.value, d_count,
                                                         max(k_chain, 1.0)) + 1e-9)
        ok = ok and row["bl_ok"] and row["blu_ok"] and row["chain_ok"]
        table[name] = row
    return ClaimResult(10, "constant interrelations on finite spaces", ok,
                       {k: (v["bl_ok"], v["blu_ok"], v["chain_ok"]) for k, v in table.items()},
                       "bl <= D C^3, blu <= D^2 C^4, doubling <= D C^(2K+3)",
                       details=table)


def _claim_11(quick: bool, seed: int) -> ClaimResult:
    vals = [gallery.onedir_probe_norm(n) for n in range(2, 21)]
    lows = [0.95 * math.log(1.0 + math.exp(2.0 * n)) for n in range(2, 21)]
    ok = all(v >= lo for v, lo in zip(vals, lows)) and \
        all(b > a for a, b in zip(vals, vals[1:]))
    return ClaimResult(11, "one-directional probe norms diverge", ok,
                       {"n=2": vals[0], "n=20": vals[-1]},
                       ">= 0.95 log(1+e^{2n}) and strictly increasing",
                       details={"values": vals})


def _claim_12(quick: bool, seed: int) -> ClaimResult:
    ok = True
    details = {}
    # kernel adjoint-column form vs brute dirac probes
    s_u3 = UltrametricSpace(3, 1.0)
    for name, (m, s, r) in {
        "counting3": (counting_measure(s_u3), s_u3, 1.5),
        "broom8": (None, None, 1.5),
        "expline": (*_exp_line_space(20, 0.7), 1.6),
    }.items():
        if name == "broom8":
            e = gallery.build_broom(8)
            m, s = e.measure, e.space
        kern = norms.build_kernel(m, s, r)
        closed = norms.op_norm_l1(kern).value
        brute = 0.0
        for y in range(kern.n):
            f = np.zeros(kern.n)
            f[y] = 1.0
            brute = max(brute, float(np.sum(kern.weights * np.abs(kern.apply(f))))
                        / kern.weights[y])
        details[f"l1_{name}"] = (closed, brute)
        ok = ok and abs(closed - brute) < 1e-12

    # centered maximal function vs a dense radius sweep
    e = gallery.build_broom(6)
    m, s = e.measure, e.space
    sweep = np.linspace(1e-6, float(np.max(s.matrix)) + 1.0, 4000)
    worst = 0.0
    for x in list(s.universe)[:12]:
        f = DiracFunction(int(s.universe[0]))
        auto = operators.maximal_centered(m, s, f, int(x))
        dense = operators.maximal_centered(m, s, f, int(x), radii=sweep)
        worst = max(worst, abs(auto - dense))
    details["maximal_sweep_gap"] = worst
    ok = ok and worst < 1e-12

    # analytic gallery metrics vs shortest-path recomputation
    e = gallery.build_broom(6)
    labels = e.space.labels
    idx = {lab: i for i, lab in enumerate(labels)}
    edges = []
    for (n, k), i in idx.items():
        if k > 0:
            edges.append((i, idx[(n, 0)], 1.0))
    groups = sorted({n for n, k in labels})
    for a, b in zip(groups[:-1], groups[1:]):
        edges.append((idx[(a, 0)], idx[(b, 0)], 3.0 * (b - a)))
    g = PathGraphSpace(len(labels), edges)
    gap_broom = float(np.max(np.abs(g.matrix - e.space.matrix)))

    nb = 12
    ib = gallery.build_infinite_broom(nb)
    edges = [(0, i, 1.0 / i) for i in range(1, nb + 1)]
    g2 = PathGraphSpace(nb + 1, edges)
    gap_ib = float(np.max(np.abs(g2.matrix - ib.space.matrix)))
    details["distance_gaps"] = {"broom": gap_broom, "infinite_broom": gap_ib}
    ok = ok and gap_broom < 1e-9 and gap_ib < 1e-9
    return ClaimResult(12, "oracle equivalences", ok, details["distance_gaps"],
                       "closed forms match brute force / graph recomputation",
                       details=details)


def _claim_13(quick: bool, seed: int) -> ClaimResult:
    s = UltrametricSpace(5, 1.0)
    m = counting_measure(s)
    est1 = geometry.comparability_sup(m, s, [0.5, 1.0 + 1e-9, 2.0])
    e2 = gallery.build_standard("twopoint")
    est2 = geometry.comparability_sup(e2.measure, e2.space, [0.5, 2.0])
    ok = est1.value == 1.0 and est1.direction == "exact" and est2.value == 1.0
    return ClaimResult(13, "ultrametric and two-point constants", ok,
                       {"ultrametric": est1.value, "twopoint": est2.value},
                       "exactly 1")


CLAIMS = [_claim_01, _claim_02, _claim_03, _claim_04, _claim_05, _claim_06,
          _claim_07, _claim_08, _claim_09, _claim_10, _claim_11, _claim_12,
          _claim_13]


def run_claims(quick: bool = False, seed: int = 20250809, only=None) -> list:
    """Run the claims table; ``only`` restricts to a set of claim numbers."""
    results = []
    for i, fn in enumerate(CLAIMS, start=1):
        if only and i not in only:
            continue
        t0 = time.perf_counter()
        res = fn(quick, seed)
        res.seconds = time.perf_counter() - t0
        results.append(res)
    return results
