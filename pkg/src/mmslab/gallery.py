"""Constructors for the example spaces, with executable expectations.

Each entry bundles a space, a measure and a list of named expectations.
``GalleryEntry.verify`` runs every expectation and returns a pass/fail table
keyed by expectation name (value, expected, pass flag).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import roots_legendre

from .geometry import (blossom_constant, comparability_sup,
                       geometric_doubling_number, local_comparability)
from .measures import (AtomicMeasure, Ball, Density1D, DiracFunction,
                       GaussianMeasure, Measure, counting_measure,
                       exponential_measure, gaussian_measure, lebesgue_measure)
from .norms import build_kernel, fubini_l1_upper, op_norm_l1, weak_type_constant
from .spaces import EuclideanSpace, FiniteMetricSpace, Space, UltrametricSpace

__all__ = [
    "Expectation",
    "GalleryEntry",
    "BroomSpace",
    "CurveSpace",
    "CurveMeasure",
    "build_broom",
    "build_infinite_broom",
    "build_arc_connected",
    "build_onedir",
    "build_standard",
    "onedir_measure",
    "onedir_probe_norm",
    "gallery_names",
    "build",
]


@dataclass
class Expectation:
    name: str
    operation: str
    run: Callable[["GalleryEntry"], dict]

    def check(self, entry: "GalleryEntry") -> dict:
        out = {"expectation": self.name, "operation": self.operation}
        out.update(self.run(entry))
        return out


@dataclass
class GalleryEntry:
    name: str
    space: Space
    measure: Measure
    expectations: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def verify(self) -> list:
        return [e.check(self) for e in self.expectations]


# -- broom with n spikes on the n-th circle -----------------------------------

class BroomSpace(FiniteMetricSpace):
    """Counting-measure broom: centers (3n, 0) with n unit spikes each.

    Path distances are analytic: spikes of one group meet only at their
    center, groups connect along the axis.  ``index(n, k)`` maps group n and
    spike k (k=0 is the center) to the node id.
    """

    def __init__(self, n_max: int):
        if n_max < 1:
            raise ValueError("n_max >= 1")
        labels = []
        for n in range(1, n_max + 1):
            labels.append((n, 0))
            labels.extend((n, k) for k in range(1, n + 1))
        N = len(labels)
        M = np.zeros((N, N))
        for i, (n, k) in enumerate(labels):
            for j in range(i + 1, N):
                m, l = labels[j]
                if n == m:
                    d = 1.0 if (k == 0 or l == 0) else 2.0
                else:
                    d = 3.0 * abs(n - m) + (1.0 if k > 0 else 0.0) + (1.0 if l > 0 else 0.0)
                M[i, j] = M[j, i] = d
        super().__init__(M, labels=labels, validate=True, kind="finite-matrix")
        self.n_max = n_max
        self._label_to_node = {lab: i for i, lab in enumerate(labels)}

    def index(self, n: int, k: int = 0) -> int:
        return self._label_to_node[(n, k)]


def build_broom(n_max: int = 16) -> GalleryEntry:
    space = BroomSpace(n_max)
    measure = counting_measure(space)
    ex = []

    def tip_mass(e):
        v = e.measure.ball_mass(e.space, Ball(e.space.index(n_max, 1), 1.5))
        return {"value": v, "expected": 2.0, "passed": v == 2.0}

    def center_mass(e):
        v = e.measure.ball_mass(e.space, Ball(e.space.index(n_max, 0), 1.5))
        return {"value": v, "expected": n_max + 1.0, "passed": v == n_max + 1.0}

    def l1_blowup(e):
        rep = op_norm_l1(build_kernel(e.measure, e.space, 1.5))
        return {"value": rep.value, "expected": f">= {n_max / 2}",
                "passed": rep.value >= n_max / 2.0}

    def weak_blowup(e):
        rep = weak_type_constant(build_kernel(e.measure, e.space, 1.5), p=1.0)
        return {"value": rep.value, "expected": f">= {n_max / 2}",
                "passed": rep.value >= n_max / 2.0}

    def comparability_fails(e):
        est = local_comparability(e.measure, e.space, 1.5)
        want = (n_max + 1.0) / 2.0
        return {"value": est.value, "expected": f">= {want}",
                "passed": est.value >= want}

    ex.append(Expectation("tip-ball-mass", "ball_mass", tip_mass))
    ex.append(Expectation("center-ball-mass", "ball_mass", center_mass))
    ex.append(Expectation("l1-norm-blowup", "op_norm_l1", l1_blowup))
    ex.append(Expectation("weak11-blowup", "weak_type_constant", weak_blowup))
    ex.append(Expectation("radius-3/2-comparability-ratio", "local_comparability",
                          comparability_fails))
    if n_max >= 5:
        def cross_group(e):
            v = e.space.distance(e.space.index(4, 1), e.space.index(5, 1))
            return {"value": v, "expected": 5.0, "passed": v == 5.0}
        ex.append(Expectation("cross-group-distance", "distance", cross_group))
    return GalleryEntry("broom", space, measure, ex, meta={"n_max": n_max})


# -- the point broom whose balls all contain the handle ------------------------

def build_infinite_broom(n_max: int = 32, full_support: bool = False) -> GalleryEntry:
    """Node 0 plus tips z_n at distance 1/n, d(z_n, z_m) = 1/n + 1/m."""
    if n_max < 2:
        raise ValueError("n_max >= 2")
    N = n_max + 1
    M = np.zeros((N, N))
    for n in range(1, N):
        M[0, n] = M[n, 0] = 1.0 / n
        for m in range(n + 1, N):
            M[n, m] = M[m, n] = 1.0 / n + 1.0 / m
    space = FiniteMetricSpace(M, kind="finite-matrix")
    if full_support:
        pts = list(range(N))
        ws = [1.0] + [2.0 ** -n for n in range(1, N)]
        measure = AtomicMeasure(pts, ws, name="handle-plus-dyadic")
    else:
        measure = AtomicMeasure([0], [1.0], name="handle-dirac")
    ex = []

    def comparability_one(e):
        radii = np.unique(M[np.triu_indices(N, 1)])
        est = comparability_sup(e.measure, e.space, radii + 1e-12)
        return {"value": est.value, "expected": 1.0,
                "passed": abs(est.value - 1.0) < 1e-12 and est.direction == "exact"}

    def not_geometrically_doubling(e):
        n = n_max // 2
        sample = [0] + [k for k in range(n + 1, 2 * n + 1)]
        count = geometric_doubling_number(e.space, Ball(0, 1.0 / n), sample)
        return {"value": count, "expected": f">= {n + 1}", "passed": count >= n + 1}

    ex.append(Expectation("comparability-constant-one", "comparability_sup",
                          comparability_one))
    ex.append(Expectation("covering-count-blowup", "geometric_doubling_number",
                          not_geometrically_doubling))
    if not full_support:
        def blossoms_boundedly(e):
            est = blossom_constant(e.measure, e.space)
            return {"value": est.value, "expected": 1.0,
                    "passed": est.value == 1.0}
        ex.append(Expectation("blossom-constant-one", "blossom_constant",
                              blossoms_boundedly))
    return GalleryEntry("infinite-broom", space, measure, ex,
                        meta={"n_max": n_max, "full_support": full_support})


# -- arc-connected curve with the sup-metric and a growing density -------------

class CurveSpace(EuclideanSpace):
    """Plane points of the embedded curve under the ambient sup metric.

    Only a one-dimensional subset of the plane is occupied, so the enlarged
    ball identifications for blossoms do not apply here.
    """

    full_normed_space = False

    def __init__(self, x_max: float):
        super().__init__(2, q=np.inf)
        self.kind = "curve-linf"
        self.x_max = float(x_max)


class CurveMeasure(Measure):
    """Pushforward of (1 for t<=1, t for t>=1) dt along the L-shaped curve.

    The embedding is t -> (-1-t, 0) for t <= -1, (0, 1+t) on [-1, 0] and
    (t, 1) for t >= 0, truncated to parameters in [-1-x_max, x_max].  Sup
    balls pull back to at most three parameter intervals with analytic
    endpoints, so masses are exact piecewise integrals.
    """

    def __init__(self, x_max: float):
        self.x_max = float(x_max)
        self.t_min = -1.0 - self.x_max
        self.t_max = self.x_max
        self.name = "curve-pushforward"

    # density mass of a parameter interval
    def _nu(self, a: float, b: float) -> float:
        a, b = max(a, self.t_min), min(b, self.t_max)
        if b <= a:
            return 0.0
        if b <= 1.0:
            return b - a
        if a >= 1.0:
            return 0.5 * (b * b - a * a)
        return (1.0 - a) + 0.5 * (b * b - 1.0)

    def embed(self, t):
        t = np.asarray(t, dtype=float)
        x = np.where(t <= -1.0, -1.0 - t, np.where(t <= 0.0, 0.0, t))
        y = np.where(t <= -1.0, 0.0, np.where(t <= 0.0, 1.0 + t, 1.0))
        return np.stack([x, y], axis=-1)

    def ball_preimage(self, ball: Ball) -> list:
        cx, cy = np.atleast_1d(np.asarray(ball.center, dtype=float))
        r = ball.radius
        ivs = []
        if abs(cy) < r:                              # axis piece, t <= -1
            lo, hi = -1.0 - (cx + r), -1.0 - (cx - r)
            lo, hi = max(lo, self.t_min), min(hi, -1.0)
            if hi > lo:
                ivs.append((lo, hi))
        if abs(cx) < r:                              # vertical piece, -1 <= t <= 0
            lo, hi = max(cy - r - 1.0, -1.0), min(cy + r - 1.0, 0.0)
            if hi > lo:
                ivs.append((lo, hi))
        if abs(1.0 - cy) < r:                        # top piece, t >= 0
            lo, hi = max(cx - r, 0.0), min(cx + r, self.t_max)
            if hi > lo:
                ivs.append((lo, hi))
        ivs.sort()
        merged: list = []
        for lo, hi in ivs:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return merged

    def ball_mass(self, space: Space, ball: Ball) -> float:
        return sum(self._nu(a, b) for a, b in self.ball_preimage(ball))

    def integrate(self, space: Space, f, region: Optional[Ball] = None) -> float:
        if isinstance(f, DiracFunction):
            if region is None or space.contains(region, f.location):
                return f.coefficient
            return 0.0
        raise NotImplementedError("curve integration supports dirac probes only")

    def validate_mc(self, space: Space, ball: Ball, n: int = 400_000,
                    seed: int = 0) -> tuple:
        """(exact, estimate, std error) against parameter-space Monte Carlo."""
        rng = np.random.Generator(np.random.Philox(key=int(seed)))
        t = rng.uniform(self.t_min, self.t_max, n)
        w = np.where(t <= 1.0, 1.0, t) * (self.t_max - self.t_min)
        pts = self.embed(t)
        c = np.atleast_1d(np.asarray(ball.center, dtype=float))
        hit = np.max(np.abs(pts - c[None, :]), axis=1) < ball.radius
        vals = w * hit
        est = float(np.mean(vals))
        se = float(np.std(vals) / math.sqrt(n))
        return self.ball_mass(space, ball), est, se


def arc_pair_source(x_max: float) -> list:
    """Comparability probe pairs for the curve: interior top-piece pairs,
    truncation-edge pairs (which realize ratios just under 2), and a small
    corner sweep."""
    pairs = []
    for r in (0.25, 0.5, 1.0, 2.0):
        d = r * (1.0 - 1e-9)
        pairs.append(((x_max, 1.0), (x_max - d, 1.0), r))
        for c in np.linspace(2.0, (x_max + 1) / 2.0, 25):
            rr = c - 1.0
            pairs.append(((c, 1.0), (c + rr * (1 - 1e-9), 1.0), rr))
    corner = [(0.0, 0.2), (0.0, 0.8), (0.3, 1.0), (1.0, 1.0), (0.5, 0.0), (1.5, 0.0)]
    for r in (0.4, 0.9, 1.3):
        for a in corner:
            for b in corner:
                pairs.append((a, b, r))
    return pairs


def build_arc_connected(x_max: float = 40.0) -> GalleryEntry:
    if x_max < 10:
        raise ValueError("x_max >= 10")
    space = CurveSpace(x_max)
    measure = CurveMeasure(x_max)
    ex = []

    def doubling_grows(e):
        xs = [10.0, 20.0, 40.0]
        xs = [x for x in xs if x <= e.measure.x_max]
        ratios = []
        for x in xs:
            small = e.measure.ball_mass(e.space, Ball((x, 0.0), 1.0))
            big = e.measure.ball_mass(e.space, Ball((x, 0.0), 2.0))
            ratios.append(big / small)
        ok = all(b > a for a, b in zip(ratios, ratios[1:]))
        return {"value": ratios, "expected": "strictly increasing", "passed": ok}

    def comparability_window(e):
        best = 1.0
        for a, b, r in arc_pair_source(e.measure.x_max):
            if e.space.distance(a, b) >= r:
                continue
            ma = e.measure.ball_mass(e.space, Ball(a, r))
            mb = e.measure.ball_mass(e.space, Ball(b, r))
            if ma > 0 and mb > 0:
                best = max(best, ma / mb, mb / ma)
        return {"value": best, "expected": "[1.95, 4]",
                "passed": 1.95 <= best <= 4.0}

    def two_centers(e):
        t, r = 5.0, 1.5
        m0 = e.measure.ball_mass(e.space, Ball((t, 0.0), r))
        m1 = e.measure.ball_mass(e.space, Ball((t, 1.0), r))
        return {"value": [m0, m1], "expected": "equal",
                "passed": abs(m0 - m1) < 1e-12}

    ex.append(Expectation("doubling-ratio-diverges", "ball_mass", doubling_grows))
    ex.append(Expectation("comparability-in-window", "ball_mass", comparability_window))
    ex.append(Expectation("two-centers-same-ball", "ball_mass", two_centers))
    return GalleryEntry("arc-connected", space, measure, ex, meta={"x_max": x_max})


# -- the line measure whose one-directional averages blow up -------------------

def onedir_measure(n_max: int = 20) -> Density1D:
    """Density 1 on the union of [2n, 2n+1) plus e^{-x}, on [0, 2 n_max + 2]."""
    hi = 2.0 * n_max + 2.0

    def block_len(x: float) -> float:
        if x <= 0:
            return 0.0
        m = math.floor(x / 2.0)
        return m + min(max(x - 2.0 * m, 0.0), 1.0)

    def pdf(t: float) -> float:
        inb = 1.0 if (t >= 0 and math.floor(t) % 2 == 0) else 0.0
        return inb + math.exp(-t)

    def cdf(t: float) -> float:
        t = min(max(t, 0.0), hi)
        return block_len(t) + (1.0 - math.exp(-t))

    return Density1D(pdf, (0.0, hi), cdf=cdf, name="onedir-nu")


_GL32 = roots_legendre(32)


def onedir_probe_norm(n: int, n_max: int = 20) -> float:
    """Exact L1 size of the window average of a point mass at 2n+1.

    For x in [2n, 2n+1) the window [x, x+1] holds mass
    (2n+1-x) + e^{-x}(1 - 1/e); substituting u = 2n+1-x keeps the tiny
    exponential term well-scaled near u = 0, and geometric panels resolve
    the 1/u spike down to u ~ e^{-(2n+1)}.
    """
    if not (1 <= n <= n_max):
        raise ValueError("need 1 <= n <= n_max")
    c1 = math.exp(-(2 * n + 1))
    c0 = c1 * (1.0 - math.exp(-1.0))
    edges = [0.0]
    e = max(c0, 1e-300)
    while e < 1.0:
        edges.append(e)
        e *= 10.0
    edges.append(1.0)
    gx, gw = _GL32
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        u = 0.5 * (a + b) + 0.5 * (b - a) * gx
        w = 0.5 * (b - a) * gw
        eu = np.exp(u)
        total += float(np.sum(w * (1.0 + c1 * eu) / (u + c0 * eu)))
    return total


def build_onedir(n_max: int = 20) -> GalleryEntry:
    measure = onedir_measure(n_max)
    space = EuclideanSpace(1)
    ex = []

    def block_density_exceeds_one(e):
        # mass([2n, 2n+1]) - 1 = e^{-2n}(1 - 1/e), evaluated in its own scale
        # so the strict excess stays visible beyond float addition to 1.0
        excess = [math.exp(-2.0 * n) * (1.0 - math.exp(-1.0)) for n in range(1, n_max)]
        small_n_mass = measure.interval_mass(2.0, 3.0)
        ok = all(v > 0.0 for v in excess) and small_n_mass > 1.0
        return {"value": min(excess), "expected": "positive excess over block length",
                "passed": ok}

    def probe_norm_n5(e):
        v = onedir_probe_norm(5, n_max)
        want = math.log(1.0 + math.exp(10.0))
        return {"value": v, "expected": f">= {want:.6f}", "passed": v >= want}

    def norms_increase(e):
        vals = [onedir_probe_norm(n, n_max) for n in range(1, n_max + 1)]
        ok = all(b > a for a, b in zip(vals, vals[1:]))
        return {"value": vals[-1], "expected": "strictly increasing in n", "passed": ok}

    ex.append(Expectation("block-mass-exceeds-length", "interval_mass",
                          block_density_exceeds_one))
    ex.append(Expectation("probe-norm-lower-bound", "directional_average_right",
                          probe_norm_n5))
    ex.append(Expectation("probe-norms-diverge", "directional_average_right",
                          norms_increase))
    return GalleryEntry("onedir", space, measure, ex, meta={"n_max": n_max})


# -- stock entries -------------------------------------------------------------

def build_standard(name: str) -> GalleryEntry:
    if name == "exponential":
        measure = exponential_measure()
        space = EuclideanSpace(1)
        ex = []

        def optimal_c1(e):
            est = local_comparability(e.measure, e.space, 1.0)
            return {"value": est.value, "expected": math.e,
                    "passed": abs(est.value - math.e) < 1e-4}

        def probe_norm(e):
            v = math.e * math.log(math.e + 1.0) - math.e + 1.0 / (math.e - math.exp(-1.0))
            return {"value": v, "expected": "> 1.27", "passed": v > 1.27}

        def uniform_l1(e):
            ok = True
            worst = 0.0
            for r in (0.25, 1.0, 4.0):
                grid = np.linspace(1e-6, max(10.0, 4 * r), 201)
                rep = fubini_l1_upper(e.measure, e.space, r, grid)
                worst = max(worst, rep.value)
                ok = ok and rep.value <= 2.0 + 1e-6
            return {"value": worst, "expected": "<= 2", "passed": ok}

        ex.append(Expectation("radius-one-constant", "local_comparability", optimal_c1))
        ex.append(Expectation("probe-norm-above-1.27", "integrate", probe_norm))
        ex.append(Expectation("uniform-l1-bound", "fubini_l1_upper", uniform_l1))
        return GalleryEntry("exponential", space, measure, ex)

    if name.startswith("gaussian"):
        d = int(name[len("gaussian"):] or 2)
        from .gausslab import cap_measure_bound, gamma_ratio_check
        space = EuclideanSpace(d)
        measure = gaussian_measure(d)
        ex = [
            Expectation("cap-measure-bound", "cap_measure_bound",
                        lambda e, d=d: {"value": cap_measure_bound(max(d, 2)).status,
                                        "expected": "pass",
                                        "passed": cap_measure_bound(max(d, 2)).passed}),
            Expectation("gamma-ratio", "gamma_ratio_check",
                        lambda e, d=d: {"value": gamma_ratio_check(d).status,
                                        "expected": "pass",
                                        "passed": gamma_ratio_check(d).passed}),
        ]
        return GalleryEntry(name, space, measure, ex, meta={"d": d})

    if name == "lebesgue1d":
        measure = lebesgue_measure()
        space = EuclideanSpace(1)

        def translation_invariant(e):
            worst = 0.0
            for r in (0.1, 1.0, 10.0):
                grid = np.linspace(-3 * r, 3 * r, 41)
                rep = fubini_l1_upper(e.measure, e.space, r, grid)
                worst = max(worst, abs(rep.value - 1.0))
            return {"value": worst, "expected": "~ 0", "passed": worst < 1e-9}

        return GalleryEntry("lebesgue1d", space, measure,
                            [Expectation("l1-norm-equals-one", "fubini_l1_upper",
                                         translation_invariant)])

    if name.startswith("ultrametric"):
        n = int(name[len("ultrametric"):] or 5)
        space = UltrametricSpace(n, 1.0)
        measure = counting_measure(space)

        def c_is_one(e):
            est = comparability_sup(e.measure, e.space, [0.5, 1.0 + 1e-9, 2.0])
            return {"value": est.value, "expected": 1.0,
                    "passed": est.value == 1.0 and est.direction == "exact"}

        return GalleryEntry(name, space, measure,
                            [Expectation("comparability-constant-one",
                                         "comparability_sup", c_is_one)],
                            meta={"n": n})

    if name == "twopoint":
        space = FiniteMetricSpace([[0.0, 1.0], [1.0, 0.0]])
        measure = AtomicMeasure([0], [1.0], name="one-atom")

        def c_is_one(e):
            est = comparability_sup(e.measure, e.space, [0.5, 2.0])
            return {"value": est.value, "expected": 1.0,
                    "passed": est.value == 1.0}

        return GalleryEntry("twopoint", space, measure,
                            [Expectation("comparability-constant-one",
                                         "comparability_sup", c_is_one)])

    raise ValueError(f"unknown standard entry {name!r}")


_BUILDERS = {
    "broom": build_broom,
    "infinite-broom": build_infinite_broom,
    "arc-connected": build_arc_connected,
    "onedir": build_onedir,
}

_STANDARD = ("exponential", "gaussian2", "gaussian3", "lebesgue1d",
             "ultrametric5", "twopoint")


def gallery_names() -> list:
    return sorted(list(_BUILDERS) + list(_STANDARD))


def build(name: str, **kwargs) -> GalleryEntry:
    if name in _BUILDERS:
        return _BUILDERS[name](**kwargs)
    return build_standard(name)
