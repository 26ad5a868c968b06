import numpy as np
import pytest

from mmslab.spaces import (Ball, EuclideanSpace, FiniteMetricSpace,
                           PathGraphSpace, SpaceError, UltrametricSpace,
                           balls_intersect, contains, distance, parse_space)
from mmslab.gallery import BroomSpace


def test_linf_distance():
    s = EuclideanSpace(2, q=np.inf)
    assert distance(s, (0.0, 0.0), (3.0, 4.0)) == 4.0


def test_ultrametric_distance():
    s = UltrametricSpace(5, 1.0)
    assert distance(s, 2, 3) == 1.0
    assert distance(s, 2, 2) == 0.0


def test_broom_spike_distance():
    s = BroomSpace(3)
    assert distance(s, s.index(1, 1), s.index(1, 0)) == 1.0
    assert distance(s, s.index(2, 1), s.index(2, 2)) == 2.0


def test_open_closed_boundary():
    s = EuclideanSpace(1)
    assert not contains(s, Ball(0.0, 1.0), 1.0)
    assert contains(s, Ball(0.0, 1.0, closed=True), 1.0)


def test_broom_open_ball_holds_spike():
    s = BroomSpace(4)
    assert contains(s, Ball(s.index(3, 0), 1.5), s.index(3, 1))


def test_balls_intersect_line():
    s = EuclideanSpace(1)
    assert balls_intersect(s, Ball(0.0, 1.0), Ball(1.5, 0.9))
    assert not balls_intersect(s, Ball(0.0, 1.0), Ball(3.0, 1.0))


def test_balls_intersect_point_broom():
    # tips 3 and 4 sit at distance 1/3 + 1/4, past the radius sum 1/3
    from mmslab.gallery import build_infinite_broom
    e = build_infinite_broom(6)
    res = balls_intersect(e.space, Ball(3, 1.0 / 6.0), Ball(4, 1.0 / 6.0))
    assert not res and res.exact


def test_intersect_result_provenance():
    s = EuclideanSpace(2)
    assert balls_intersect(s, Ball((0, 0), 1.0), Ball((1, 0), 1.0)).exact


@pytest.mark.parametrize("make", [
    lambda: (EuclideanSpace(3, q=1), "euclid"),
    lambda: (EuclideanSpace(3, q=2), "euclid"),
    lambda: (EuclideanSpace(3, q=np.inf), "euclid"),
    lambda: (EuclideanSpace(3, q=3.5), "euclid"),
    lambda: (UltrametricSpace(40, 2.5), "finite"),
    lambda: (PathGraphSpace(30, [(i, i + 1, 0.5 + (i % 3)) for i in range(29)]
                            + [(0, 29, 4.0)]), "finite"),
    lambda: (BroomSpace(6), "finite"),
])
def test_metric_axioms_random_triples(make):
    s, kind = make()
    rng = np.random.default_rng(7)
    n = 10_000
    if kind == "euclid":
        pts = rng.normal(size=(n, 3, 3)) * 3.0
        for i in range(0, n, 500):   # vectorized in blocks below
            pass
        a, b, c = pts[:, 0], pts[:, 1], pts[:, 2]
        dab = np.array([s.distance(x, y) for x, y in zip(a[:2000], b[:2000])])
        dba = np.array([s.distance(y, x) for x, y in zip(a[:2000], b[:2000])])
        assert np.allclose(dab, dba, atol=1e-12)
        dac = np.array([s.distance(x, y) for x, y in zip(a[:2000], c[:2000])])
        dcb = np.array([s.distance(x, y) for x, y in zip(c[:2000], b[:2000])])
        assert np.all(dab <= dac + dcb + 1e-9)
        assert all(s.distance(x, x) == 0.0 for x in a[:50])
    else:
        N = len(s.universe)
        idx = rng.integers(0, N, size=(n, 3))
        M = s.matrix
        dab = M[idx[:, 0], idx[:, 1]]
        assert np.allclose(dab, M[idx[:, 1], idx[:, 0]], atol=1e-12)
        assert np.all(dab <= M[idx[:, 0], idx[:, 2]] + M[idx[:, 2], idx[:, 1]] + 1e-9)
        assert np.all(np.diag(M) == 0.0)


def test_ultrametric_ball_classes_coincide():
    s = UltrametricSpace(8, 1.0)
    for r in (0.5, 1.0 + 1e-9, 3.0):
        b0 = Ball(0, r)
        m0 = s.members(b0)
        for y in range(8):
            if contains(s, b0, y):
                assert np.array_equal(s.members(Ball(y, r)), m0)


def test_euclid_intersect_matches_witness_grid():
    rng = np.random.default_rng(3)
    for d in (1, 2, 3):
        s = EuclideanSpace(d)
        axes = [np.linspace(-4, 4, 33)] * d
        grid = np.stack([g.ravel() for g in np.meshgrid(*axes)], axis=1)
        for _ in range(40):
            c1 = rng.uniform(-2, 2, d)
            c2 = rng.uniform(-2, 2, d)
            r1, r2 = rng.uniform(0.4, 1.6, 2)
            gap = np.linalg.norm(c1 - c2) - (r1 + r2)
            if abs(gap) < 0.3:   # keep clear of the witness grid's resolution
                continue
            b1, b2 = Ball(c1, r1), Ball(c2, r2)
            brute = any(s.contains(b1, p) and s.contains(b2, p) for p in grid)
            assert bool(balls_intersect(s, b1, b2)) == brute


def test_matrix_space_validation():
    with pytest.raises(SpaceError):
        FiniteMetricSpace([[0, 1], [2, 0]])            # asymmetric
    with pytest.raises(SpaceError):
        FiniteMetricSpace([[0, 5, 1], [5, 0, 1], [1, 1, 0]])   # triangle fails
    with pytest.raises(SpaceError):
        FiniteMetricSpace([[1, 1], [1, 0]])            # nonzero diagonal


def test_parse_space_formats():
    s = parse_space("euclidean 2 inf\n0 0\n1 1\n")
    assert s.dim == 2 and np.isinf(s.q) and len(s.samples) == 2
    s = parse_space("# comment\nmatrix 2\n0 1\n1 0\n")
    assert s.distance(0, 1) == 1.0
    s = parse_space("pathgraph 3 2\n0 1 1.0\n1 2 2.0\n")
    assert s.distance(0, 2) == 3.0
    s = parse_space("ultrametric 4 2.0\n")
    assert s.distance(1, 3) == 2.0
    with pytest.raises(SpaceError):
        parse_space("weird 1\n")


def test_pathgraph_rejects_disconnected():
    with pytest.raises(SpaceError):
        PathGraphSpace(4, [(0, 1, 1.0)])
