"""Blossoms, comparability/doubling/covering constants and greedy covering.

Constants are reported as ``ConstantEstimate`` records carrying a certified
direction: ``exact`` only on finite spaces with exhaustive probes, ``lower``
when a probe grid witnesses the supremum from below.  Probe provenance is
recorded so runs are reproducible.

The s-blossom of a set is its s-neighborhood; the uncentered blossom is the
blossom of the blossom.  On a full normed space both collapse to enlarged
balls (radius r+s and r+2s); on finite spaces they are enumerated against
the whole universe, intermediate centers included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .measures import AtomicMeasure, Density1D, Measure
from .spaces import Ball, EuclideanSpace, IntersectResult, Space, balls_intersect

__all__ = [
    "ConstantEstimate",
    "VitaliResult",
    "pair_grid_1d",
    "finite_pairs",
    "local_comparability",
    "comparability_sup",
    "intersecting_comparability_check",
    "doubling_constant",
    "blossom_points",
    "blossom_mass",
    "blossom_constant",
    "geometric_doubling_number",
    "minimal_chain_length",
    "measured_chain_length",
    "chain_doubling_bound",
    "union_mass",
    "vitali_select",
    "closed_ball_equivalence_check",
]


@dataclass
class ConstantEstimate:
    """A named constant with certified direction and probe provenance."""

    name: str
    value: float
    direction: str                    # "exact" | "lower" | "upper"
    probes: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.direction not in ("exact", "lower", "upper"):
            raise ValueError(f"bad direction {self.direction!r}")
        if self.value < 1.0 and math.isfinite(self.value):
            # comparability-type constants are >= 1 by definition
            self.value = max(self.value, 1.0)

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value,
                "direction": self.direction, "probes": self.probes,
                **({"details": self.details} if self.details else {})}


@dataclass
class VitaliResult:
    selected: list
    mass_all: float
    mass_selected: float
    ratio: float
    k_reference: Optional[float]
    certified: bool

    def to_dict(self) -> dict:
        return {"selected": list(map(int, self.selected)),
                "mass_all": self.mass_all, "mass_selected": self.mass_selected,
                "ratio": self.ratio, "k_reference": self.k_reference,
                "certified": self.certified}


# -- probe pair sources ------------------------------------------------------

def pair_grid_1d(r: float, n: int = 2048, lo: float = 1e-3, hi: float = 20.0,
                 depth: int = 40, domain=( -math.inf, math.inf)) -> np.ndarray:
    """Pairs (x, y) on the line with separations climbing toward r.

    Base points on a geometric grid; separations r(1 - 2^-k) approach the
    open constraint |x - y| < r dyadically, which is where comparability
    ratios peak for monotone densities.  Pairs leaving ``domain`` are dropped.
    """
    xs = np.geomspace(lo, hi, n)
    # the exact separation r is admissible only for closed-ball sweeps
    seps = np.append(r * (1.0 - 2.0 ** -np.arange(1, depth + 1)), r)
    out = []
    for sign in (1.0, -1.0):
        y = xs[:, None] + sign * seps[None, :]
        ok = (y > domain[0]) & (y < domain[1])
        xx = np.broadcast_to(xs[:, None], y.shape)[ok]
        out.append(np.stack([xx, y[ok]], axis=1))
    return np.concatenate(out, axis=0)


def finite_pairs(s: Space, r: float, closed: bool = False) -> np.ndarray:
    """All ordered universe pairs with d(x,y) < r (or <= r when closed)."""
    if s.universe is None:
        raise ValueError("finite_pairs needs a finite space")
    D = np.array([s.distances_from(p, s.universe) for p in s.universe])
    tol = s.boundary_tol
    mask = D <= r + tol if closed else D < r - tol
    i, j = np.nonzero(mask)
    return np.stack([i, j], axis=1)


def _pair_ratio_sup(m: Measure, s: Space, r: float, pairs, closed: bool) -> tuple:
    """Max mass ratio over admissible pairs; returns (value, n_used)."""
    if (isinstance(m, Density1D) and isinstance(s, EuclideanSpace)
            and s.dim == 1 and isinstance(pairs, np.ndarray)):
        x, y = pairs[:, 0], pairs[:, 1]
        tol = s.boundary_tol
        d = np.abs(x - y)
        adm = d <= r + tol if closed else d < r - tol
        if not np.any(adm):
            raise ValueError("no admissible probe pairs")
        x, y = x[adm], y[adm]
        mx = m.interval_mass_many(x - r, x + r)
        my = m.interval_mass_many(y - r, y + r)
        both_zero = (mx == 0) & (my == 0)
        split = ((mx == 0) ^ (my == 0)) & ~both_zero
        used = int(np.sum(~both_zero))
        if used == 0:
            raise ValueError("no admissible probe pairs")
        if np.any(split):
            return math.inf, used
        live = ~both_zero
        ratios = np.maximum(mx[live] / my[live], my[live] / mx[live])
        return max(1.0, float(np.max(ratios))), used

    best = 1.0
    used = 0
    cache: dict = {}

    def mass(p):
        key = tuple(np.atleast_1d(p)) if not np.isscalar(p) else p
        if key not in cache:
            cache[key] = m.ball_mass(s, Ball(p, r, closed=closed))
        return cache[key]

    tol = s.boundary_tol
    for x, y in pairs:
        d = s.distance(x, y)
        admissible = d <= r + tol if closed else d < r - tol
        if not admissible:
            continue
        mx, my = mass(x), mass(y)
        if mx == 0.0 and my == 0.0:
            continue
        used += 1
        if mx == 0.0 or my == 0.0:
            return math.inf, used
        best = max(best, mx / my, my / mx)
    if used == 0:
        raise ValueError("no admissible probe pairs")
    return best, used


def _default_pairs(m: Measure, s: Space, r: float, closed: bool):
    if s.is_finite():
        return finite_pairs(s, r, closed=closed), True
    if isinstance(m, Density1D):
        lo = max(1e-3, m.support[0] + 1e-3)
        return pair_grid_1d(r, domain=m.support, lo=lo), False
    if isinstance(m, AtomicMeasure):
        pts = [p for p in m.points]
        return [(a, b) for a in pts for b in pts], False
    raise ValueError("supply probe pairs for this measure/space combination")


def local_comparability(m: Measure, s: Space, r: float, pairs=None,
                        closed: bool = False) -> ConstantEstimate:
    """Smallest C with mu B(x,r) <= C mu B(y,r) whenever d(x,y) < r.

    Exhaustive (exact) on finite spaces; a certified lower bound from the
    probe grid otherwise.  A pair with one zero and one positive mass makes
    the constant infinite.
    """
    exact = s.is_finite() and pairs is None
    if pairs is None:
        pairs, exact = _default_pairs(m, s, r, closed)
        if s.is_finite():
            pairs = [(s.universe[i], s.universe[j]) for i, j in pairs]
    value, used = _pair_ratio_sup(m, s, r, pairs, closed)
    return ConstantEstimate(
        name=f"C(mu,{r:g})", value=value,
        direction="exact" if exact else "lower",
        probes=f"{used} admissible pairs, closed={closed}",
        details={"radius": r})


def comparability_sup(m: Measure, s: Space, radii, pairs=None) -> ConstantEstimate:
    """Radius-uniform comparability constant: max over the radius grid."""
    best = 1.0
    directions = []
    per_radius = {}
    for r in radii:
        try:
            est = local_comparability(m, s, float(r), pairs=pairs)
        except ValueError:
            continue   # no admissible pairs at this radius
        per_radius[float(r)] = est.value
        directions.append(est.direction)
        best = max(best, est.value)
    if not per_radius:
        raise ValueError("no radius produced admissible pairs")
    direction = "exact" if directions and all(d == "exact" for d in directions) else "lower"
    return ConstantEstimate(name="C(mu)", value=best, direction=direction,
                            probes=f"{len(per_radius)} radii",
                            details={"per_radius": per_radius})


@dataclass
class CheckReport:
    passed: bool
    failures: list
    checked: int

    def to_dict(self):
        return {"passed": self.passed, "checked": self.checked,
                "failures": self.failures}


def intersecting_comparability_check(m: Measure, s: Space, r: float,
                                     ball_pairs, c: float) -> CheckReport:
    """Verify mu B(x,r) <= c^2 mu B(y,r) for intersecting sampled pairs."""
    failures = []
    checked = 0
    for x, y in ball_pairs:
        b1, b2 = Ball(x, r), Ball(y, r)
        if not balls_intersect(s, b1, b2):
            continue
        mx, my = m.ball_mass(s, b1), m.ball_mass(s, b2)
        if mx == 0.0 and my == 0.0:
            continue
        checked += 1
        bad = (my == 0.0 and mx > 0.0) or (mx == 0.0 and my > 0.0) or \
            max(mx / my, my / mx) > c * c * (1 + 1e-12)
        if bad:
            failures.append({"x": np.asarray(x).tolist(), "y": np.asarray(y).tolist(),
                             "ratio": math.inf if 0.0 in (mx, my) else max(mx / my, my / mx)})
    return CheckReport(passed=not failures, failures=failures, checked=checked)


def _finite_doubling_radii(s: Space) -> np.ndarray:
    D = np.array([s.distances_from(p, s.universe) for p in s.universe])
    d = np.unique(D)
    top = d[-1] if d[-1] > 0 else 1.0
    eps = 1e-9 * top
    return np.unique(np.concatenate([d + eps, d / 2.0 + eps]))


def doubling_constant(m: Measure, s: Space, centers=None, radii=None) -> ConstantEstimate:
    """sup mu B(x,2r) / mu B(x,r); infinite on a positive/zero split."""
    exact = False
    if centers is None or radii is None:
        if not s.is_finite():
            raise ValueError("continuous spaces need explicit centers and radii")
        centers = list(s.universe) if centers is None else centers
        radii = _finite_doubling_radii(s) if radii is None else radii
        exact = True
    best = 1.0
    used = 0
    for x in centers:
        for r in np.atleast_1d(radii):
            small = m.ball_mass(s, Ball(x, float(r)))
            big = m.ball_mass(s, Ball(x, 2.0 * float(r)))
            if small == 0.0 and big == 0.0:
                continue
            used += 1
            if small == 0.0:
                return ConstantEstimate("doubling", math.inf,
                                        "exact" if exact else "lower",
                                        probes=f"{used} probes (zero-mass split)")
            best = max(best, big / small)
    return ConstantEstimate("doubling", best, "exact" if exact else "lower",
                            probes=f"{used} probes over {len(centers)} centers")


# -- blossoms ----------------------------------------------------------------

def blossom_points(s: Space, base: Ball, step: float, uncentered: bool) -> np.ndarray:
    """Universe mask of the (uncentered) step-blossom of a ball, finite spaces."""
    if s.universe is None:
        raise ValueError("point enumeration needs a finite space")
    D = np.array([s.distances_from(p, s.universe) for p in s.universe])
    tol = s.boundary_tol
    core = s.members(base)
    if not np.any(core):
        return core
    layer = D[:, core].min(axis=1) < step - tol
    if not uncentered:
        return layer
    return D[:, layer].min(axis=1) < step - tol


def blossom_mass(m: Measure, s: Space, base: Ball, step: float,
                 uncentered: bool = False) -> float:
    """Mass of Bl(B, step) (or Blu): enlarged-ball identification on full
    normed spaces, exhaustive enumeration on finite ones."""
    if isinstance(s, EuclideanSpace):
        if not getattr(s, "full_normed_space", True):
            raise ValueError("blossoms on restricted subsets have no closed identification")
        grow = 2.0 * step if uncentered else step
        return m.ball_mass(s, Ball(base.center, base.radius + grow, closed=base.closed))
    if s.is_finite():
        if not isinstance(m, AtomicMeasure):
            raise ValueError("finite-space blossoms need an atomic measure")
        mask = blossom_points(s, base, step, uncentered)
        idx = np.asarray(m.points, dtype=int)
        return float(np.sum(m.weights[mask[idx]]))
    raise ValueError(f"blossom masses are not supported on {s.kind} spaces")


def blossom_constant(m: Measure, s: Space, centers=None, radii=None) -> ConstantEstimate:
    """sup mu Blu(x,r,r) / mu B(x,r); zero/zero probes are skipped."""
    exact = False
    if centers is None or radii is None:
        if not s.is_finite():
            raise ValueError("continuous spaces need explicit centers and radii")
        centers = list(s.universe) if centers is None else centers
        if radii is None:
            D = np.array([s.distances_from(p, s.universe) for p in s.universe])
            d = np.unique(D)
            radii = d + 1e-9 * (d[-1] if d[-1] > 0 else 1.0)
        exact = True
    best = 1.0
    used = 0
    for x in centers:
        for r in np.atleast_1d(radii):
            b = Ball(x, float(r))
            small = m.ball_mass(s, b)
            big = blossom_mass(m, s, b, float(r), uncentered=True)
            if small == 0.0 and big == 0.0:
                continue
            used += 1
            if small == 0.0:
                return ConstantEstimate("blossom-K", math.inf,
                                        "exact" if exact else "lower",
                                        probes=f"{used} probes (zero-mass split)")
            best = max(best, big / small)
    return ConstantEstimate("blossom-K", best, "exact" if exact else "lower",
                            probes=f"{used} probes")


def bl_constant(m: Measure, s: Space, centers=None, radii=None) -> ConstantEstimate:
    """Centered variant: sup mu Bl(x,r,r) / mu B(x,r)."""
    if centers is None or radii is None:
        if not s.is_finite():
            raise ValueError("continuous spaces need explicit centers and radii")
        centers = list(s.universe)
        D = np.array([s.distances_from(p, s.universe) for p in s.universe])
        d = np.unique(D)
        radii = d + 1e-9 * (d[-1] if d[-1] > 0 else 1.0)
    best = 1.0
    used = 0
    for x in centers:
        for r in np.atleast_1d(radii):
            b = Ball(x, float(r))
            small = m.ball_mass(s, b)
            big = blossom_mass(m, s, b, float(r), uncentered=False)
            if small == 0.0 and big == 0.0:
                continue
            used += 1
            if small == 0.0:
                return ConstantEstimate("blossom-K1", math.inf, "exact",
                                        probes=f"{used} probes (zero-mass split)")
            best = max(best, big / small)
    return ConstantEstimate("blossom-K1", best, "exact", probes=f"{used} probes")


# -- covering ----------------------------------------------------------------

def _pairwise(s: Space, pts) -> np.ndarray:
    return np.array([s.distances_from(p, pts) for p in pts])


def geometric_doubling_number(s: Space, ball: Ball, sample) -> int:
    """Greedy count of radius-r/2 balls at sample points covering the sample.

    Max-coverage greedy (ties by index).  The count upper-bounds the minimal
    cover of the sample and lower-bounds the true covering number when the
    sample is a fine net of the ball.
    """
    sample = list(sample)
    if not sample:
        raise ValueError("empty sample")
    inside = s.members(ball, sample if not s.is_finite() else np.asarray(sample))
    pts = [p for p, ok in zip(sample, inside) if ok]
    if not pts:
        return 0
    D = _pairwise(s, pts)
    half = ball.radius / 2.0
    tol = s.boundary_tol
    covers = D < half - tol if not ball.closed else D <= half + tol
    np.fill_diagonal(covers, True)
    covered = np.zeros(len(pts), dtype=bool)
    count = 0
    while not covered.all():
        gains = np.sum(covers & ~covered[None, :], axis=1)
        gains[covered & (gains == 0)] = -1
        i = int(np.argmax(gains))
        if gains[i] <= 0:
            i = int(np.nonzero(~covered)[0][0])
        covered |= covers[i]
        count += 1
    return count


def minimal_chain_length(s: Space, r: float, x, z) -> float:
    """Minimal m with an intersecting chain B(x,r)=B(y_0,r),..,B(y_m,r) and
    z in B(y_m, r), centers in the universe; inf when unreachable."""
    if s.universe is None:
        raise ValueError("chains are enumerated on finite spaces")
    n = len(s.universe)
    members = np.array([s.members(Ball(p, r)) for p in s.universe])
    adj = (members.astype(np.int64) @ members.astype(np.int64).T) > 0
    xi, zi = int(x), int(z)
    targets = members[:, zi]
    depth = np.full(n, -1)
    depth[xi] = 0
    frontier = [xi]
    while frontier:
        if np.any(targets[np.array(frontier)]):
            hits = [f for f in frontier if targets[f]]
            return float(depth[hits[0]])
        new = []
        for f in frontier:
            for g in np.nonzero(adj[f])[0]:
                if depth[g] < 0:
                    depth[g] = depth[f] + 1
                    new.append(int(g))
        frontier = new
    return math.inf


def measured_chain_length(s: Space, radii=None) -> tuple:
    """Max over (r, x, z) with d(x,z) < 2r of the minimal chain length.

    Returns (K, detail dict).  K is inf as soon as one admissible pair has
    no chain; radii with no admissible pairs are vacuous and skipped.
    """
    if s.universe is None:
        raise ValueError("chains are enumerated on finite spaces")
    D = _pairwise(s, s.universe)
    if radii is None:
        d = np.unique(D)
        radii = d[d > 0] + 1e-9 * d[-1]
    n = len(s.universe)
    worst = 0.0
    detail = {}
    for r in np.atleast_1d(radii):
        r = float(r)
        members = D < r - s.boundary_tol           # members[y] = row mask of B(y,r)
        adj = (members.astype(np.int64) @ members.astype(np.int64).T) > 0
        kr = 0.0
        for xi in range(n):
            targets = np.nonzero(D[xi] < 2.0 * r - s.boundary_tol)[0]
            targets = targets[targets != xi]
            if len(targets) == 0:
                continue
            depth = np.full(n, -1)
            depth[xi] = 0
            frontier = [xi]
            while frontier:
                new = []
                for fy in frontier:
                    for gy in np.nonzero(adj[fy])[0]:
                        if depth[gy] < 0:
                            depth[gy] = depth[fy] + 1
                            new.append(int(gy))
                frontier = new
            # chain length to z: min depth over centers whose ball holds z
            for zi in targets:
                holders = depth[members[:, zi]]
                holders = holders[holders >= 0]
                mlen = float(np.min(holders)) if len(holders) else math.inf
                kr = max(kr, mlen)
                if math.isinf(kr):
                    break
            if math.isinf(kr):
                break
        detail[r] = kr
        worst = max(worst, kr)
        if math.isinf(worst):
            break
    return worst, detail


def chain_doubling_bound(c: float, d_count: float, k: float) -> float:
    """The chained comparability-to-doubling bound D * C^(2K+3)."""
    if c < 1 or d_count < 1 or k < 1:
        raise ValueError("need C >= 1, D >= 1, K >= 1")
    return d_count * c ** (2.0 * k + 3.0)


# -- unions and the greedy disjointification ---------------------------------

def union_mass(m: Measure, s: Space, balls: Sequence[Ball]) -> float:
    """Exact mass of a union of balls (atomic masks or 1-D interval merge)."""
    if isinstance(m, AtomicMeasure):
        mask = np.zeros(len(m.points), dtype=bool)
        for b in balls:
            mask |= m.atom_mask(s, b)
        return float(np.sum(m.weights[mask]))
    if isinstance(m, Density1D):
        ivs = []
        for b in balls:
            c = float(np.atleast_1d(np.asarray(b.center, float))[0])
            lo, hi = max(c - b.radius, m.support[0]), min(c + b.radius, m.support[1])
            if hi > lo:
                ivs.append((lo, hi))
        ivs.sort()
        total = 0.0
        cur = None
        for lo, hi in ivs:
            if cur is None:
                cur = [lo, hi]
            elif lo <= cur[1]:
                cur[1] = max(cur[1], hi)
            else:
                total += m.interval_mass(cur[0], cur[1])
                cur = [lo, hi]
        if cur is not None:
            total += m.interval_mass(cur[0], cur[1])
        return total
    raise ValueError("union masses need an atomic or 1-D measure")


def vitali_select(m: Measure, s: Space, balls: Sequence[Ball],
                  k_reference: Optional[float] = None) -> VitaliResult:
    """Greedy disjoint subfamily: decreasing radius, ties by input order.

    Each ball is kept iff it intersects no previously kept ball.  The result
    carries mu(union of all) / mu(union of kept) and the blossom ratio of the
    kept balls (or the supplied reference), which the covering argument
    guarantees is an upper bound for the ratio when intersections are exact.
    """
    balls = list(balls)
    order = np.argsort([-b.radius for b in balls], kind="stable")
    selected: list[int] = []
    certified = True
    for i in order:
        hit = False
        for j in selected:
            res = balls_intersect(s, balls[i], balls[j])
            certified = certified and res.exact
            if res:
                hit = True
                break
        if not hit:
            selected.append(int(i))
    mass_all = union_mass(m, s, balls)
    mass_sel = union_mass(m, s, [balls[j] for j in selected])
    ratio = mass_all / mass_sel if mass_sel > 0 else math.inf
    if k_reference is None:
        try:
            ks = []
            for j in selected:
                b = balls[j]
                small = m.ball_mass(s, b)
                if small > 0:
                    ks.append(blossom_mass(m, s, b, b.radius, uncentered=True) / small)
            k_reference = max(ks) if ks else None
        except ValueError:
            k_reference = None
    return VitaliResult(selected=selected, mass_all=mass_all,
                        mass_selected=mass_sel, ratio=ratio,
                        k_reference=k_reference, certified=certified)


@dataclass
class ClosedOpenReport:
    open_value: float
    closed_value: float
    difference: float
    within: Optional[float] = None
    agree: Optional[bool] = None


def closed_ball_equivalence_check(m: Measure, s: Space, r: float, pairs=None,
                                  tol: float = 1e-6) -> ClosedOpenReport:
    """Compare the closed-ball comparability sup (d <= r) with the open one.

    For continuous measures the two must agree within tolerance; for atomic
    measures with boundary atoms they may differ, so the report only states
    the values.
    """
    op = local_comparability(m, s, r, pairs=pairs, closed=False)
    cl = local_comparability(m, s, r, pairs=pairs, closed=True)
    diff = abs(op.value - cl.value)
    continuous = not isinstance(m, AtomicMeasure)
    return ClosedOpenReport(open_value=op.value, closed_value=cl.value,
                            difference=diff, within=tol if continuous else None,
                            agree=(diff <= tol) if continuous else None)
