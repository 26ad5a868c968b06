"""Ball-mass and integration oracles.

Measure variants:

* ``AtomicMeasure``: weighted atoms; all masses are exact finite sums.
* ``Density1D``: a density on an interval of the line, with an optional
  closed-form antiderivative.  Ball masses go through the antiderivative
  when available and through adaptive quadrature otherwise.
* ``GaussianMeasure``: the standard gaussian in dimension d, normalized or
  not.  d=1 masses use erf, origin-centered balls the radial closed form,
  and general centers the rotational 2-D reduction (deterministic
  quadrature).  ``ball_mass_mc`` is the seeded Monte Carlo companion.

Functions on a space come in three flavors: per-atom tables, callables, and
point masses (``DiracFunction``) used as operator probes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import integrate as _sciint
from scipy.special import erf

from ._gaussquad import axis_ball_mass_log, origin_ball_mass_log
from .spaces import Ball, EuclideanSpace, Space

__all__ = [
    "Measure",
    "AtomicMeasure",
    "Density1D",
    "GaussianMeasure",
    "TableFunction",
    "CallableFunction",
    "DiracFunction",
    "ball_mass",
    "ball_mass_mc",
    "integrate",
    "exponential_measure",
    "lebesgue_measure",
    "gaussian_measure",
    "counting_measure",
    "QuadratureError",
    "MeasureError",
]


class MeasureError(ValueError):
    """Unsupported measure/space/function pairing or invalid construction."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


# -- functions on a space ---------------------------------------------------

@dataclass(frozen=True)
class TableFunction:
    """One value per atom of an atomic measure."""

    values: np.ndarray

    def __init__(self, values):
        object.__setattr__(self, "values", np.asarray(values, dtype=float))


@dataclass(frozen=True)
class CallableFunction:
    fn: Callable


@dataclass(frozen=True)
class DiracFunction:
    """Point mass probe: integrates to ``coefficient`` when captured."""

    location: object
    coefficient: float = 1.0


class Measure:
    """Base class; concrete variants implement ``ball_mass``."""

    name: str = "measure"

    def ball_mass(self, space: Space, ball: Ball) -> float:
        raise NotImplementedError

    def integrate(self, space: Space, f, region: Optional[Ball] = None) -> float:
        raise NotImplementedError


class AtomicMeasure(Measure):
    """Finitely many atoms with strictly positive weights.

    On finite spaces atoms are node indices; on euclidean spaces they are
    coordinate rows.  ``points`` may cover only part of the universe.
    """

    def __init__(self, points, weights, name: str = "atomic"):
        w = np.asarray(weights, dtype=float)
        if np.any(w <= 0):
            raise MeasureError("atomic weights must be strictly positive")
        if not np.all(np.isfinite(w)):
            raise MeasureError("atomic weights must be finite")
        self.weights = w
        self.points = np.asarray(points)
        if len(self.points) != len(w):
            raise MeasureError("points and weights length mismatch")
        self.name = name

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def atom_mask(self, space: Space, ball: Ball) -> np.ndarray:
        return space.members(ball, self.points)

    def ball_mass(self, space: Space, ball: Ball) -> float:
        return float(np.sum(self.weights[self.atom_mask(space, ball)]))

    def _values(self, space: Space, f) -> np.ndarray:
        if isinstance(f, TableFunction):
            if len(f.values) != len(self.points):
                raise MeasureError("table length does not match atom count")
            return f.values
        if isinstance(f, CallableFunction):
            return np.array([f.fn(p) for p in self.points], dtype=float)
        raise MeasureError(f"unsupported function variant {type(f).__name__}")

    def integrate(self, space: Space, f, region: Optional[Ball] = None) -> float:
        if isinstance(f, DiracFunction):
            if region is None or space.contains(region, f.location):
                return f.coefficient
            return 0.0
        vals = self._values(space, f)
        if region is None:
            return float(np.sum(self.weights * vals))
        mask = self.atom_mask(space, region)
        return float(np.sum(self.weights[mask] * vals[mask]))


class Density1D(Measure):
    """Absolutely continuous measure on an interval of the real line."""

    def __init__(self, pdf: Callable[[float], float], support: Tuple[float, float],
                 cdf: Optional[Callable[[float], float]] = None,
                 interval_fn: Optional[Callable] = None,
                 name: str = "density1d", rel_tol: float = 1e-9):
        self.pdf = pdf
        self.support = (float(support[0]), float(support[1]))
        self.cdf = cdf
        # closed form for mass([lo, hi]); preferred over the cdf difference,
        # which loses relative precision on small tail masses
        self.interval_fn = interval_fn
        self.name = name
        self.rel_tol = rel_tol

    def _clip(self, lo: float, hi: float) -> Tuple[float, float]:
        a, b = self.support
        return max(lo, a), min(hi, b)

    def interval_mass(self, lo: float, hi: float) -> float:
        """Measure of [lo, hi] (boundaries are null, open = closed)."""
        lo, hi = self._clip(lo, hi)
        if hi <= lo:
            return 0.0
        if self.interval_fn is not None:
            return float(self.interval_fn(lo, hi))
        if self.cdf is not None:
            return float(self.cdf(hi) - self.cdf(lo))
        val, err = _sciint.quad(self.pdf, lo, hi, epsrel=self.rel_tol, limit=200)
        return val

    def interval_mass_many(self, lo, hi) -> np.ndarray:
        """Vectorized interval masses (clipped to the support)."""
        lo = np.maximum(np.asarray(lo, dtype=float), self.support[0])
        hi = np.minimum(np.asarray(hi, dtype=float), self.support[1])
        fn = self.interval_fn or (None if self.cdf is None
                                  else (lambda a, b: self.cdf(b) - self.cdf(a)))
        if fn is not None:
            try:
                out = np.asarray(fn(lo, hi), dtype=float)
                return np.where(hi > lo, out, 0.0)
            except (TypeError, ValueError):
                pass
        return np.array([self.interval_mass(a, b) for a, b in
                         zip(np.atleast_1d(lo), np.atleast_1d(hi))])

    def ball_mass(self, space: Space, ball: Ball) -> float:
        c = float(np.atleast_1d(np.asarray(ball.center, float))[0])
        return self.interval_mass(c - ball.radius, c + ball.radius)

    def integrate(self, space: Space, f, region: Optional[Ball] = None) -> float:
        if region is None:
            lo, hi = self.support
        else:
            c = float(np.atleast_1d(np.asarray(region.center, float))[0])
            lo, hi = self._clip(c - region.radius, c + region.radius)
            if hi <= lo:
                return 0.0
        if isinstance(f, DiracFunction):
            x = float(f.location)
            return f.coefficient if lo <= x <= hi else 0.0
        if not isinstance(f, CallableFunction):
            raise MeasureError(f"unsupported function variant {type(f).__name__} for a density")
        fn = f.fn
        val, err, info, *msg = _sciint.quad(lambda t: fn(t) * self.pdf(t), lo, hi,
                                            epsrel=self.rel_tol, limit=500,
                                            full_output=True)
        if msg:
            raise QuadratureError(f"quadrature did not converge: {msg[0]}", achieved=err)
        if abs(val) > 0 and err > 10 * self.rel_tol * abs(val) and err > 1e-12:
            raise QuadratureError(
                f"quadrature achieved {err:g}, wanted rel {self.rel_tol:g}", achieved=err)
        return val


class GaussianMeasure(Measure):
    """Standard gaussian in R^d; ``normalized=False`` drops (2 pi)^{-d/2}."""

    def __init__(self, d: int, normalized: bool = True, nodes: int = 512):
        if d < 1:
            raise MeasureError("gaussian dimension must be >= 1")
        self.d = int(d)
        self.normalized = normalized
        self.nodes = nodes
        self.name = f"gaussian{d}" + ("" if normalized else "-unnormalized")

    @property
    def log_norm_factor(self) -> float:
        return 0.0 if self.normalized else 0.5 * self.d * math.log(2.0 * math.pi)

    def _check_space(self, space: Space) -> None:
        if not isinstance(space, EuclideanSpace) or space.q != 2.0 or space.dim != self.d:
            raise MeasureError("gaussian measure needs the euclidean l2 space of matching dimension")

    def log_ball_mass(self, space: Space, ball: Ball) -> float:
        self._check_space(space)
        c = np.atleast_1d(np.asarray(ball.center, float))
        u = float(np.linalg.norm(c))
        r = ball.radius
        if self.d == 1:
            lo, hi = (u - r) / math.sqrt(2.0), (u + r) / math.sqrt(2.0)
            val = 0.5 * (erf(hi) - erf(lo))
            logv = math.log(val) if val > 0 else -math.inf
        elif u == 0.0:
            logv = origin_ball_mass_log(self.d, r)
        else:
            logv = axis_ball_mass_log(self.d, u, r, nodes=self.nodes)
        return logv + self.log_norm_factor

    def ball_mass(self, space: Space, ball: Ball) -> float:
        return math.exp(self.log_ball_mass(space, ball))

    def integrate(self, space: Space, f, region: Optional[Ball] = None) -> float:
        if isinstance(f, DiracFunction):
            if region is None or space.contains(region, f.location):
                return f.coefficient
            return 0.0
        raise MeasureError("gaussian integration supports dirac probes; "
                           "use ball_mass / intersection quadrature for indicators")


# -- free functions matching the oracle surface -----------------------------

def ball_mass(m: Measure, s: Space, b: Ball) -> float:
    """Mass of a ball under the measure (exact or deterministic quadrature)."""
    return m.ball_mass(s, b)


def integrate(m: Measure, f, region: Optional[Ball] = None, space: Optional[Space] = None) -> float:
    """Integral of ``f`` against ``m`` over an optional ball."""
    return m.integrate(space, f, region)


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("MMSLAB_THREADS", "1")))
    except ValueError:
        return 1


def ball_mass_mc(m: GaussianMeasure, b: Ball, n: int, seed: int,
                 chunk: int = 1 << 19) -> Tuple[float, float]:
    """Monte Carlo gaussian ball mass: (estimate, standard error).

    Sampling is split into fixed-size chunks, each driven by a Philox stream
    keyed on (seed, chunk index), so the estimate is identical however the
    chunks are scheduled across workers.
    """
    if not isinstance(m, GaussianMeasure):
        raise MeasureError("ball_mass_mc applies to gaussian measures")
    if n < 1000:
        raise MeasureError("need at least 10^3 samples")
    d = m.d
    c = np.atleast_1d(np.asarray(b.center, float))
    if c.shape != (d,):
        raise MeasureError("ball center dimension mismatch")
    sizes = [chunk] * (n // chunk)
    if n % chunk:
        sizes.append(n % chunk)

    def run(args):
        idx, size = args
        rng = np.random.Generator(np.random.Philox(key=(int(seed), int(idx))))
        x = rng.standard_normal((size, d))
        dist = np.linalg.norm(x - c[None, :], axis=1)
        if b.closed:
            return int(np.count_nonzero(dist <= b.radius))
        return int(np.count_nonzero(dist < b.radius))

    jobs = list(enumerate(sizes))
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            hits = sum(ex.map(run, jobs))
    else:
        hits = sum(map(run, jobs))
    p = hits / n
    se = math.sqrt(max(p * (1.0 - p), 1.0 / n) / n)
    scale = math.exp(m.log_norm_factor)
    return p * scale, se * scale


# -- stock measures ----------------------------------------------------------

def exponential_measure() -> Density1D:
    """Standard exponential distribution on (0, inf)."""
    return Density1D(lambda t: np.exp(-t), (0.0, math.inf),
                     cdf=lambda t: -np.expm1(-t),
                     interval_fn=lambda lo, hi: np.exp(-lo) - np.exp(-hi),
                     name="exponential")


def lebesgue_measure(lo: float = -math.inf, hi: float = math.inf) -> Density1D:
    """Length measure on an interval of the line."""
    return Density1D(lambda t: np.ones_like(np.asarray(t, dtype=float)),
                     (lo, hi), cdf=lambda t: np.asarray(t, dtype=float),
                     name="lebesgue1d")


def gaussian_measure(d: int, normalized: bool = True) -> GaussianMeasure:
    return GaussianMeasure(d, normalized=normalized)


def counting_measure(space: Space) -> AtomicMeasure:
    """Unit weight on every point of a finite space."""
    if space.universe is None:
        raise MeasureError("counting measure needs a finite space")
    return AtomicMeasure(space.universe.copy(), np.ones(len(space.universe)),
                         name="counting")


def load_atomic(path, space: Space) -> AtomicMeasure:
    """Atomic measure from a whitespace file: point (index or coords), weight."""
    pts, ws = [], []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if space.is_finite():
                if len(parts) != 2:
                    raise MeasureError("finite-space atom rows are: index weight")
                pts.append(int(parts[0]))
            else:
                pts.append([float(v) for v in parts[:-1]])
            ws.append(float(parts[-1]))
    return AtomicMeasure(pts, ws)
