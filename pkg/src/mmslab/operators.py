"""Averaging, maximal and one-directional averaging operators.

``average`` is the ball average of a function at a point.  The maximal
operators take suprema of such averages; on finite spaces the radius (and
center) grids are generated automatically from the distinct distances, which
makes the supremum exact, while on continuous spaces a caller-supplied grid
yields a certified lower bound.  ``directional_average_right`` averages over
the closed window [x, x + span] on the line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .measures import (AtomicMeasure, CallableFunction, Density1D,
                       DiracFunction, GaussianMeasure, Measure, MeasureError,
                       TableFunction)
from .spaces import Ball, EuclideanSpace, Space

__all__ = [
    "ZeroMassBall",
    "average",
    "maximal_centered",
    "maximal_uncentered",
    "directional_average_right",
    "auto_radius_grid",
    "OperatorSpec",
]

# fraction of the largest distance added past each distinct distance so that
# the open ball of the offset radius captures exactly that distance class
RADIUS_EPS_SCALE = 1e-9


class ZeroMassBall(ArithmeticError):
    """The averaging operator is undefined where the ball has zero mass."""


def _abs_function(f):
    if isinstance(f, TableFunction):
        return TableFunction(np.abs(f.values))
    if isinstance(f, DiracFunction):
        return DiracFunction(f.location, abs(f.coefficient))
    if isinstance(f, CallableFunction):
        fn = f.fn
        return CallableFunction(lambda t: abs(fn(t)))
    raise MeasureError(f"unsupported function variant {type(f).__name__}")


def average(m: Measure, s: Space, r: float, f, x, closed: bool = False) -> float:
    """Ball average (1/mu B(x,r)) * int_B f dmu; raises on zero-mass balls."""
    ball = Ball(x, r, closed=closed)
    mass = m.ball_mass(s, ball)
    if mass <= 0.0:
        raise ZeroMassBall(f"ball at {x!r} with radius {r} has zero mass")
    return m.integrate(s, f, region=ball) / mass


def auto_radius_grid(s: Space, x, points=None) -> np.ndarray:
    """Radii realizing every distinct ball centered at x over a finite set."""
    if points is None:
        if s.universe is None:
            raise MeasureError("auto radius grids need a finite point set")
        points = s.universe
    d = np.unique(s.distances_from(x, points))
    top = d[-1] if d[-1] > 0 else 1.0
    return d + RADIUS_EPS_SCALE * top


def _atom_points(m: Measure, s: Space):
    if isinstance(m, AtomicMeasure):
        return m.points
    raise MeasureError("maximal operators need an atomic measure or explicit grids")


def _sup_of_averages(m: Measure, s: Space, f, centers_radii) -> float:
    best = -np.inf
    found = False
    for center, radii in centers_radii:
        for r in np.atleast_1d(radii):
            try:
                v = average(m, s, float(r), f, center)
            except ZeroMassBall:
                continue
            found = True
            if v > best:
                best = v
    if not found:
        raise ZeroMassBall("no ball in the grid has positive mass")
    return best


def maximal_centered(m: Measure, s: Space, f, x, radii=None) -> float:
    """Centered maximal function sup_r A_r |f| (x).

    Finite spaces enumerate every distinct ball (exact value); otherwise the
    supremum runs over the supplied radius grid and is a lower bound.
    """
    g = _abs_function(f)
    if radii is None:
        if s.is_finite():
            radii = auto_radius_grid(s, x)
        elif isinstance(m, AtomicMeasure):
            radii = auto_radius_grid(s, x, points=m.points)
        else:
            raise MeasureError("continuous spaces need an explicit radius grid")
    return _sup_of_averages(m, s, g, [(x, radii)])


def maximal_uncentered(m: Measure, s: Space, f, x, radii=None, centers=None) -> float:
    """Uncentered maximal function: sup over balls containing x.

    The admissibility constraint d(x, y) < r restricts each center's radius
    grid.  Finite spaces enumerate all universe centers (plus x itself on
    euclidean spaces with atomic measures), which is exact.
    """
    g = _abs_function(f)
    if centers is None:
        if s.is_finite():
            centers = list(s.universe)
        elif isinstance(m, AtomicMeasure):
            centers = [p for p in m.points] + [x]
        else:
            raise MeasureError("continuous spaces need an explicit center grid")
    pairs = []
    for y in centers:
        dxy = s.distance(x, y)
        if radii is None:
            if s.is_finite():
                cand = auto_radius_grid(s, y)
            else:
                cand = auto_radius_grid(s, y, points=_atom_points(m, s))
            extra = dxy + RADIUS_EPS_SCALE * max(1.0, dxy)
            cand = np.append(cand, extra)
        else:
            cand = np.atleast_1d(np.asarray(radii, float))
        cand = cand[cand > dxy]
        if len(cand):
            pairs.append((y, cand))
    return _sup_of_averages(m, s, g, pairs)


def directional_average_right(m: Measure, span: float, f, x: float) -> float:
    """Average of f over the closed window [x, x + span] on the line."""
    if span <= 0:
        raise ValueError("span must be positive")
    if isinstance(m, Density1D):
        mass = m.interval_mass(x, x + span)
        if mass <= 0.0:
            raise ZeroMassBall(f"window [{x}, {x + span}] has zero mass")
        if isinstance(f, DiracFunction):
            loc = float(f.location)
            return (f.coefficient if x <= loc <= x + span else 0.0) / mass
        if isinstance(f, CallableFunction):
            lo, hi = max(x, m.support[0]), min(x + span, m.support[1])
            from scipy.integrate import quad
            val, _ = quad(lambda t: f.fn(t) * m.pdf(t), lo, hi,
                          epsrel=m.rel_tol, limit=200)
            return val / mass
        raise MeasureError(f"unsupported function variant {type(f).__name__}")
    if isinstance(m, AtomicMeasure):
        pts = np.asarray(m.points, dtype=float).reshape(-1)
        tol = 1e-12
        mask = (pts >= x - tol) & (pts <= x + span + tol)
        mass = float(np.sum(m.weights[mask]))
        if mass <= 0.0:
            raise ZeroMassBall(f"window [{x}, {x + span}] has zero mass")
        if isinstance(f, DiracFunction):
            loc = float(f.location)
            return (f.coefficient if x - tol <= loc <= x + span + tol else 0.0) / mass
        if isinstance(f, TableFunction):
            return float(np.sum(m.weights[mask] * f.values[mask])) / mass
        if isinstance(f, CallableFunction):
            vals = np.array([f.fn(p) for p in pts[mask]])
            return float(np.sum(m.weights[mask] * vals)) / mass
    raise MeasureError("one-directional averages need a line measure")


@dataclass
class OperatorSpec:
    """Declarative operator description used by the command-line driver."""

    kind: str                      # average | maximal-centered | maximal-uncentered | directional-right
    measure: Measure
    space: Space
    radius: Optional[float] = None
    radii: Optional[np.ndarray] = None
    centers: Optional[list] = None
    span: Optional[float] = None

    def __post_init__(self):
        kinds = ("average", "maximal-centered", "maximal-uncentered", "directional-right")
        if self.kind not in kinds:
            raise ValueError(f"operator kind must be one of {kinds}")
        if self.kind == "average" and not (self.radius and self.radius > 0):
            raise ValueError("average needs a positive radius")
        if self.kind == "directional-right" and not (self.span and self.span > 0):
            raise ValueError("directional-right needs a positive span")

    def evaluate(self, f, points):
        """Yield (point, value) rows; undefined points yield NaN."""
        for x in points:
            try:
                if self.kind == "average":
                    v = average(self.measure, self.space, self.radius, f, x)
                elif self.kind == "maximal-centered":
                    v = maximal_centered(self.measure, self.space, f, x, radii=self.radii)
                elif self.kind == "maximal-uncentered":
                    v = maximal_uncentered(self.measure, self.space, f, x,
                                           radii=self.radii, centers=self.centers)
                else:
                    v = directional_average_right(self.measure, self.span, f, float(x))
            except ZeroMassBall:
                v = float("nan")
            yield x, v
