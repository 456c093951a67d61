import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dispersion import (
    Instance,
    InvalidInstance,
    Point,
    TooFewNeighbors,
    cost_point,
    cost_set,
    dist,
    nearest_indices,
)
from dispersion.core import distance_matrix

from conftest import TRIANGLE, line, plane


@pytest.mark.parametrize(
    "p, q, expected",
    [((0, 0), (3, 4), 5.0), ((1, 1), (1, 1), 0.0), ((0, 0), (1, 0), 1.0)],
)
def test_dist_examples(p, q, expected):
    assert dist(Point(*p), Point(*q)) == expected


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_point_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        Point(bad, 0.0)
    with pytest.raises(ValueError):
        Point(0.0, bad)


def test_cost_point_examples():
    pts = [Point(0, 0), Point(3, 0), Point(0, 4), Point(5, 5)]
    assert cost_point(pts, 0, {1, 2, 3}, 2) == 7.0
    assert cost_point(pts, 0, {1, 2}, 1) == 3.0
    dup = [Point(0, 0), Point(1, 0), Point(1, 0)]
    assert cost_point(dup, 0, {1, 2}, 2) == 2.0


def test_cost_point_outside_member_set():
    pts = [Point(0, 0), Point(3, 0), Point(0, 4)]
    # the evaluated point need not belong to s
    assert cost_point(pts, 0, {1, 2}, 2) == 7.0
    assert cost_point(pts, 0, {0, 1, 2}, 2) == 7.0


def test_cost_point_too_few():
    pts = [Point(0, 0), Point(1, 0)]
    with pytest.raises(TooFewNeighbors):
        cost_point(pts, 0, {0, 1}, 2)


def test_cost_set_examples():
    assert cost_set([Point(*p) for p in TRIANGLE], {0, 1, 2}, 2) == pytest.approx(2.0, abs=1e-12)
    assert cost_set([Point(0), Point(1), Point(3)], {0, 1, 2}, 2) == 3.0
    assert cost_set([Point(0.3, 1.1), Point(-2.0, 4.5)], {0, 1}, 1) == dist(
        Point(0.3, 1.1), Point(-2.0, 4.5)
    )


def test_cost_set_too_few():
    with pytest.raises(TooFewNeighbors):
        cost_set([Point(0), Point(1)], {0, 1}, 2)
    with pytest.raises(TooFewNeighbors):
        cost_set([Point(0)], {0}, 1)


def test_coincident_points_have_zero_cost():
    pts = [Point(2, 2)] * 3 + [Point(9, 9)]
    assert cost_set(pts, {0, 1, 2}, 2) == 0.0


def test_nearest_indices_examples():
    assert nearest_indices([Point(0), Point(1), Point(2)], 0, {0, 1, 2}, 2) == [1, 2]
    assert nearest_indices([Point(0), Point(1), Point(-1)], 0, {0, 1, 2}, 1) == [1]
    assert nearest_indices([Point(0, 0), Point(5, 5), Point(1, 0)], 2, {0, 1, 2}, 1) == [0]


def test_instance_invariants():
    with pytest.raises(InvalidInstance):
        plane(TRIANGLE, 4)
    with pytest.raises(InvalidInstance):
        plane(TRIANGLE, 2, gamma=2)
    with pytest.raises(InvalidInstance):
        plane(TRIANGLE, 2, gamma=3)
    with pytest.raises(InvalidInstance):
        Instance.from_coords([(0, 0), (1, 1), (2, 0)], 3, 2, "line")
    assert line([0, 1, 2], 3).n == 3


def test_distance_matrix_matches_dist():
    rng = np.random.default_rng(5)
    pts = [Point(*xy) for xy in rng.normal(size=(9, 2))]
    D = distance_matrix(pts)
    for i, j in itertools.product(range(9), repeat=2):
        assert D[i, j] == dist(pts[i], pts[j])


# ---- properties ----------------------------------------------------------

coord = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
point = st.builds(Point, coord, coord)


@settings(max_examples=300, deadline=None)
@given(point, point)
def test_dist_symmetric(p, q):
    assert dist(p, q) == dist(q, p)
    assert (dist(p, q) == 0) == (p == q)


@settings(max_examples=300, deadline=None)
@given(st.lists(point, min_size=4, max_size=9), st.integers(1, 2), st.data())
def test_monotone_under_superset(pts, gamma, data):
    n = len(pts)
    big = data.draw(st.sets(st.integers(0, n - 1), min_size=gamma + 2, max_size=n))
    small = data.draw(st.sets(st.sampled_from(sorted(big)), min_size=gamma + 1, max_size=len(big)))
    assert cost_set(pts, big, gamma) <= cost_set(pts, small, gamma)


@settings(max_examples=300, deadline=None)
@given(st.lists(point, min_size=3, max_size=8), st.integers(1, 2), st.data())
def test_cost_point_is_sum_over_nearest(pts, gamma, data):
    n = len(pts)
    s = data.draw(st.sets(st.integers(0, n - 1), min_size=gamma + 1, max_size=n))
    p = data.draw(st.integers(0, n - 1))
    near = nearest_indices(pts, p, s, gamma)
    assert cost_point(pts, p, s, gamma) == sum(dist(pts[p], pts[q]) for q in near)


@settings(max_examples=200, deadline=None)
@given(
    # eighth-unit lattice keeps coordinate differences well conditioned
    st.lists(st.tuples(st.integers(-80, 80), st.integers(-80, 80)), min_size=3, max_size=8),
    st.integers(1, 2),
    st.floats(0, 2 * math.pi),
    st.floats(-50, 50),
    st.floats(-50, 50),
    st.floats(0.01, 100),
)
def test_rigid_motion_and_scale(xy, gamma, theta, tx, ty, c):
    pts = [Point(x / 8, y / 8) for x, y in xy]
    members = range(len(pts))
    base = cost_set(pts, members, gamma)
    ct, sn = math.cos(theta), math.sin(theta)
    moved = [Point(ct * p.x - sn * p.y + tx, sn * p.x + ct * p.y + ty) for p in pts]
    assert cost_set(moved, members, gamma) == pytest.approx(base, rel=1e-9, abs=1e-9)
    scaled = [Point(c * p.x, c * p.y) for p in pts]
    assert cost_set(scaled, members, gamma) == pytest.approx(c * base, rel=1e-12, abs=1e-300)
