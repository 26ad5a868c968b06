"""Point universes, distance oracles and balls.

Four space kinds are supported:

* ``EuclideanSpace``: R^d with an l_q norm (q in [1, inf]); points are
  coordinate vectors (floats are accepted for d=1).
* ``FiniteMetricSpace``: n points with an explicit symmetric distance table;
  points are integer node indices.
* ``PathGraphSpace``: weighted undirected graph, distances by shortest path.
* ``UltrametricSpace``: n points at one constant distance.

Balls are center + radius + open/closed flag.  Boundary comparisons use an
absolute tolerance (``boundary_tol``, default 1e-12): an open ball requires
d < r - tol and a closed one d <= r + tol, so that open/closed stays a real
distinction for atomic measures with atoms sitting on a boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

__all__ = [
    "Ball",
    "Point",
    "Space",
    "EuclideanSpace",
    "FiniteMetricSpace",
    "PathGraphSpace",
    "UltrametricSpace",
    "IntersectResult",
    "distance",
    "contains",
    "balls_intersect",
    "load_space",
    "parse_space",
]

Point = Union[int, float, Sequence[float], np.ndarray]

DEFAULT_BOUNDARY_TOL = 1e-12


class SpaceError(ValueError):
    """Invalid space construction or point/space mismatch."""


@dataclass(frozen=True)
class Ball:
    """A metric ball: open by default, closed when ``closed=True``."""

    center: Point
    radius: float
    closed: bool = False

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")


class Space:
    """Base distance oracle.  Subclasses implement ``distance``.

    Instances are immutable after construction and safe to share between
    workers; every operation here is pure.
    """

    kind: str = "abstract"
    boundary_tol: float = DEFAULT_BOUNDARY_TOL

    #: finite list of points when the universe is finite, else None
    universe: Optional[np.ndarray] = None

    def distance(self, a: Point, b: Point) -> float:
        raise NotImplementedError

    def distances_from(self, p: Point, points) -> np.ndarray:
        """Vector of distances from ``p`` to each element of ``points``."""
        return np.array([self.distance(p, q) for q in points], dtype=float)

    def is_finite(self) -> bool:
        return self.universe is not None

    # -- ball predicates -------------------------------------------------

    def contains(self, ball: Ball, p: Point) -> bool:
        d = self.distance(ball.center, p)
        if ball.closed:
            return d <= ball.radius + self.boundary_tol
        return d < ball.radius - self.boundary_tol

    def members(self, ball: Ball, points=None) -> np.ndarray:
        """Boolean mask of points (default: universe) inside the ball."""
        if points is None:
            if self.universe is None:
                raise SpaceError(f"{self.kind} space has no finite universe")
            points = self.universe
        d = self.distances_from(ball.center, points)
        if ball.closed:
            return d <= ball.radius + self.boundary_tol
        return d < ball.radius - self.boundary_tol


@dataclass(frozen=True)
class IntersectResult:
    """Ball-intersection verdict with provenance.

    ``exact`` is False when the test only consulted a witness sample and a
    miss may therefore under-report.  Truthiness follows ``hit`` so the
    result can be used directly as a boolean.
    """

    hit: bool
    exact: bool = True

    def __bool__(self) -> bool:
        return self.hit


class EuclideanSpace(Space):
    """R^d with the l_q metric.  ``samples`` is an optional probe grid."""

    def __init__(self, dim: int, q: float = 2.0, samples=None,
                 boundary_tol: float = DEFAULT_BOUNDARY_TOL):
        if dim < 1:
            raise SpaceError(f"dimension must be >= 1, got {dim}")
        if not (q >= 1):
            raise SpaceError(f"l_q exponent must be >= 1 (or inf), got {q}")
        self.dim = int(dim)
        self.q = float(q)
        self.kind = "euclidean-lq"
        self.boundary_tol = boundary_tol
        self.samples = None if samples is None else np.atleast_2d(np.asarray(samples, float))
        self.universe = None

    def _coerce(self, p: Point) -> np.ndarray:
        a = np.atleast_1d(np.asarray(p, dtype=float))
        if a.shape != (self.dim,):
            raise SpaceError(f"point {p!r} does not live in R^{self.dim}")
        return a

    def distance(self, a: Point, b: Point) -> float:
        va, vb = self._coerce(a), self._coerce(b)
        if np.isinf(self.q):
            return float(np.max(np.abs(va - vb)))
        return float(np.linalg.norm(va - vb, ord=self.q))

    def distances_from(self, p: Point, points) -> np.ndarray:
        v = self._coerce(p)
        pts = np.asarray(points, dtype=float).reshape(-1, self.dim)
        diff = pts - v[None, :]
        if np.isinf(self.q):
            return np.max(np.abs(diff), axis=1)
        return np.linalg.norm(diff, ord=self.q, axis=1)


class FiniteMetricSpace(Space):
    """n points with an explicit distance table, validated as a metric."""

    def __init__(self, matrix, labels=None, boundary_tol: float = DEFAULT_BOUNDARY_TOL,
                 validate: bool = True, kind: str = "finite-matrix"):
        M = np.asarray(matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise SpaceError("distance table must be square")
        if validate:
            self._validate(M)
        self.matrix = M
        self.n = M.shape[0]
        self.labels = labels
        self.kind = kind
        self.boundary_tol = boundary_tol
        self.universe = np.arange(self.n)

    @staticmethod
    def _validate(M: np.ndarray, tol: float = 1e-9) -> None:
        if np.any(np.abs(np.diag(M)) > tol):
            raise SpaceError("distance table has a nonzero diagonal")
        if np.any(np.abs(M - M.T) > tol):
            raise SpaceError("distance table is not symmetric")
        if np.any(M < -tol):
            raise SpaceError("distance table has negative entries")
        # triangle inequality: M[i,j] <= M[i,k] + M[k,j] for all k
        n = M.shape[0]
        for k in range(n):
            through = M[:, k][:, None] + M[k, :][None, :]
            if np.any(M > through + tol):
                raise SpaceError("distance table violates the triangle inequality")

    def _index(self, p: Point) -> int:
        i = int(p)
        if i != p or not (0 <= i < self.n):
            raise SpaceError(f"point {p!r} is not a node index of this {self.n}-point space")
        return i

    def distance(self, a: Point, b: Point) -> float:
        return float(self.matrix[self._index(a), self._index(b)])

    def distances_from(self, p: Point, points) -> np.ndarray:
        row = self.matrix[self._index(p)]
        idx = np.asarray(points, dtype=int)
        return row[idx]


class PathGraphSpace(FiniteMetricSpace):
    """Vertices of a weighted graph with shortest-path distances."""

    def __init__(self, n_vertices: int, edges, boundary_tol: float = DEFAULT_BOUNDARY_TOL):
        edges = list(edges)
        if not edges:
            raise SpaceError("path-graph space needs at least one edge")
        u = np.array([e[0] for e in edges], dtype=int)
        v = np.array([e[1] for e in edges], dtype=int)
        w = np.array([e[2] for e in edges], dtype=float)
        if np.any(w <= 0):
            raise SpaceError("edge weights must be positive")
        g = coo_matrix((np.concatenate([w, w]),
                        (np.concatenate([u, v]), np.concatenate([v, u]))),
                       shape=(n_vertices, n_vertices))
        M = dijkstra(g.tocsr(), directed=False)
        if np.any(np.isinf(M)):
            raise SpaceError("graph is disconnected; distances are not a metric on all vertices")
        super().__init__(M, boundary_tol=boundary_tol, validate=False, kind="path-graph")
        self.edges = edges


class UltrametricSpace(FiniteMetricSpace):
    """n points, all pairwise distances equal to one constant."""

    def __init__(self, n: int, const: float = 1.0,
                 boundary_tol: float = DEFAULT_BOUNDARY_TOL):
        if n < 1:
            raise SpaceError("ultrametric space needs n >= 1")
        if const <= 0:
            raise SpaceError("constant distance must be positive")
        M = const * (1.0 - np.eye(n))
        super().__init__(M, boundary_tol=boundary_tol, validate=False,
                         kind="ultrametric-discrete")
        self.const = float(const)


# -- free-function forms of the oracle ------------------------------------

def distance(space: Space, a: Point, b: Point) -> float:
    """d(a, b) in ``space``."""
    return space.distance(a, b)


def contains(space: Space, ball: Ball, p: Point) -> bool:
    """Whether ``p`` lies in ``ball`` (strict for open balls)."""
    return space.contains(ball, p)


def balls_intersect(space: Space, b1: Ball, b2: Ball,
                    witness_set=None) -> IntersectResult:
    """Do two balls share a point of the space?

    Euclidean spaces use the center-distance criterion (exact for any l_q
    norm: balls are convex and the segment between centers realizes the
    distance).  Finite spaces check every universe point.  Otherwise a
    witness sample is required and a negative answer is only as good as the
    sample, which the result flags via ``exact=False``.
    """
    if isinstance(space, EuclideanSpace):
        d = space.distance(b1.center, b2.center)
        tol = space.boundary_tol
        if b1.closed and b2.closed:
            return IntersectResult(bool(d <= b1.radius + b2.radius + tol))
        return IntersectResult(bool(d < b1.radius + b2.radius - tol))
    if space.is_finite():
        m = space.members(b1) & space.members(b2)
        return IntersectResult(bool(np.any(m)))
    if witness_set is None:
        raise SpaceError(f"{space.kind} space needs a witness_set for intersection tests")
    for p in witness_set:
        if space.contains(b1, p) and space.contains(b2, p):
            return IntersectResult(True, exact=False)
    return IntersectResult(False, exact=False)


# -- plain-text space files ------------------------------------------------
#
# Grammar (whitespace separated, '#' starts a comment):
#
#   euclidean <d> <q|inf>        optional following rows: d floats (samples)
#   matrix <n>                   then n rows of n entries
#   pathgraph <nv> <ne>          then ne rows "u v w"
#   ultrametric <n> <c>

def parse_space(text: str) -> Space:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise SpaceError("empty space description")
    head, rest = rows[0], rows[1:]
    tag = head[0].lower()
    if tag == "euclidean":
        d = int(head[1])
        q = np.inf if head[2].lower() in ("inf", "oo") else float(head[2])
        samples = [list(map(float, r)) for r in rest] or None
        if samples is not None and any(len(s) != d for s in samples):
            raise SpaceError("sample rows must have d coordinates")
        return EuclideanSpace(d, q, samples=samples)
    if tag == "matrix":
        n = int(head[1])
        if len(rest) != n:
            raise SpaceError(f"expected {n} matrix rows, got {len(rest)}")
        M = [list(map(float, r)) for r in rest]
        if any(len(r) != n for r in M):
            raise SpaceError("matrix rows must have n entries")
        return FiniteMetricSpace(M)
    if tag == "pathgraph":
        nv, ne = int(head[1]), int(head[2])
        if len(rest) != ne:
            raise SpaceError(f"expected {ne} edge rows, got {len(rest)}")
        edges = [(int(r[0]), int(r[1]), float(r[2])) for r in rest]
        return PathGraphSpace(nv, edges)
    if tag == "ultrametric":
        return UltrametricSpace(int(head[1]), float(head[2]))
    raise SpaceError(f"unknown space kind tag {tag!r}")


def load_space(path) -> Space:
    with open(path) as fh:
        return parse_space(fh.read())
