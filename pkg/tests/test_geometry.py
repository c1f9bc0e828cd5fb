import math
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from onionpeel.geometry import (
    DuplicatePointError,
    EmptyInputError,
    GeometryError,
    LayerKind,
    Orientation,
    Point,
    as_points,
    convex_hull,
    convex_layers,
    orientation,
    point_in_convex,
    polygon_signed_area,
    segments_properly_intersect,
)


def exact_cross(p, q, r):
    p, q, r = ([Fraction(v) for v in t] for t in (p, q, r))
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def boundary_oracle(pts):
    """Indices on the hull boundary: p lies on a segment a-b with every point
    left-of-or-on the directed line a->b. O(n^3), exact arithmetic."""
    n = len(pts)
    if n <= 2:
        return set(range(n))
    supporting = []
    for a in range(n):
        for b in range(n):
            if a != b and all(exact_cross(pts[a], pts[b], pts[k]) >= 0 for k in range(n)):
                supporting.append((a, b))
    on = set()
    for a, b in supporting:
        for k in range(n):
            if exact_cross(pts[a], pts[b], pts[k]) == 0:
                lo_x, hi_x = sorted((pts[a][0], pts[b][0]))
                lo_y, hi_y = sorted((pts[a][1], pts[b][1]))
                if lo_x <= pts[k][0] <= hi_x and lo_y <= pts[k][1] <= hi_y:
                    on.add(k)
    if not supporting:
        return set(range(n))
    return on


def distinct_int_points(min_size=1, max_size=40, lo=-20, hi=20):
    return st.lists(
        st.tuples(st.integers(lo, hi), st.integers(lo, hi)),
        min_size=min_size,
        max_size=max_size,
        unique=True,
    )


# -- orientation --------------------------------------------------------------


def test_orientation_examples():
    assert orientation((0, 0), (1, 0), (0, 1)) is Orientation.COUNTERCLOCKWISE
    assert orientation((0, 0), (1, 1), (2, 2)) is Orientation.COLLINEAR
    assert orientation((0, 0), (0, 1), (1, 1)) is Orientation.CLOCKWISE


def test_orientation_exact_for_large_integers():
    # float64 would lose the 1 in this cross product
    big = 2**53
    assert orientation((0, 0), (big, big + 1), (big - 1, big)) is Orientation.COUNTERCLOCKWISE


def test_orientation_relative_tolerance_for_reals():
    assert orientation((0.1, 0.1), (0.2, 0.2), (0.3, 0.3 + 1e-13)) is Orientation.COLLINEAR
    assert orientation((0.1, 0.1), (0.2, 0.2), (0.3, 0.3 + 1e-6)) is Orientation.COUNTERCLOCKWISE


def test_point_rejects_non_finite():
    with pytest.raises(GeometryError):
        Point(float("nan"), 0.0)
    with pytest.raises(GeometryError):
        Point(0.0, float("inf"))


# -- hull ---------------------------------------------------------------------


def test_hull_square_with_center():
    pts = [(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)]
    hull = convex_hull(pts)
    assert hull.vertex_ids == (0, 1, 2, 3)
    assert hull.kind is LayerKind.POLYGON


def test_hull_triangle():
    assert set(convex_hull([(0, 0), (4, 1), (1, 3)]).vertex_ids) == {0, 1, 2}


def test_hull_starts_lexicographically_smallest_ccw():
    pts = [(3, 3), (0, 3), (3, 0), (0, 0)]
    hull = convex_hull(pts)
    assert hull.vertex_ids[0] == 3
    ring = as_points(pts[i] for i in hull.vertex_ids)
    assert polygon_signed_area(ring).signed > 0


def test_hull_includes_edge_points():
    pts = [(0, 0), (2, 0), (4, 0), (4, 4), (0, 4), (2, 2)]
    assert convex_hull(pts).vertex_ids == (0, 1, 2, 3, 4)


def test_hull_random_matches_cubic_oracle():
    rng = np.random.default_rng(20)
    pts = [tuple(p) for p in rng.uniform(0, 100, size=(20, 2))]
    hull = convex_hull(pts)
    ring = as_points(pts[i] for i in hull.vertex_ids)
    for p in as_points(pts):
        assert point_in_convex(ring, p)
    assert set(hull.vertex_ids) == boundary_oracle(pts)


def test_hull_errors():
    with pytest.raises(EmptyInputError):
        convex_hull([])
    with pytest.raises(DuplicatePointError):
        convex_hull([(0, 0), (1, 1), (0, 0)])


@settings(max_examples=150, deadline=None)
@given(distinct_int_points(min_size=1, max_size=30))
def test_hull_matches_oracle_on_integer_grids(pts):
    assert set(convex_hull(pts).vertex_ids) == boundary_oracle(pts)


@settings(max_examples=100, deadline=None)
@given(distinct_int_points(min_size=1, max_size=30))
def test_hull_idempotent(pts):
    hull = convex_hull(pts)
    sub = [pts[i] for i in hull.vertex_ids]
    again = convex_hull(sub)
    assert [hull.vertex_ids[i] for i in again.vertex_ids] == list(hull.vertex_ids)


# -- layers -------------------------------------------------------------------


def test_nested_squares():
    outer = [(2, 2), (-2, 2), (-2, -2), (2, -2)]
    inner = [(1, 1), (-1, 1), (-1, -1), (1, -1)]
    layers = convex_layers(outer + inner)
    assert layers.sizes() == [4, 4]
    assert set(layers[0].vertex_ids) == {0, 1, 2, 3}

    layers = convex_layers(outer + inner + [(0, 0)])
    assert layers.sizes() == [4, 4, 1]
    assert layers[2].kind is LayerKind.SINGLETON


def test_all_collinear_is_one_segment_layer():
    pts = [(k, 2 * k) for k in (3, 0, 5, 1, 4, 2)]
    layers = convex_layers(pts)
    assert len(layers) == 1
    assert layers[0].kind is LayerKind.SEGMENT
    assert layers[0].vertex_ids == (1, 3, 5, 0, 4, 2)


def test_collinear_inner_remainder():
    pts = [(0, 0), (10, 0), (10, 10), (0, 10), (3, 5), (5, 5), (7, 5)]
    layers = convex_layers(pts)
    assert layers.sizes() == [4, 3]
    assert layers[1].kind is LayerKind.SEGMENT


def test_dantzig42_layer_count(dantzig):
    layers = convex_layers(dantzig.points())
    # frozen from the bundled display data; matches the six layers of the 48-city map
    assert len(layers) == 6
    assert layers.sizes() == [8, 10, 9, 8, 6, 1]


def check_decomposition(pts, layers):
    ids = [i for layer in layers for i in layer.vertex_ids]
    assert sorted(ids) == list(range(len(pts)))
    P = as_points(pts)
    for k, layer in enumerate(layers):
        ring = [P[i] for i in layer.vertex_ids]
        assert len(set(layer.vertex_ids)) == len(layer.vertex_ids)
        if layer.kind is LayerKind.POLYGON:
            m = len(ring)
            for j in range(m):
                assert orientation(ring[j], ring[(j + 1) % m], ring[(j + 2) % m]) is not Orientation.CLOCKWISE
        if k + 1 < len(layers):
            for i in layers[k + 1].vertex_ids:
                assert point_in_convex(ring, P[i])
            # only the last layer may be degenerate unless collinearity forces it
            if layer.kind is not LayerKind.POLYGON:
                rest = [P[i] for l in layers.layers[k:] for i in l.vertex_ids]
                assert all(orientation(rest[0], rest[1], r) is Orientation.COLLINEAR for r in rest[2:])


@settings(max_examples=150, deadline=None)
@given(distinct_int_points(min_size=1, max_size=40))
def test_layer_invariants(pts):
    check_decomposition(pts, convex_layers(pts))


@settings(max_examples=100, deadline=None)
@given(distinct_int_points(min_size=1, max_size=30), st.integers(0, 3), st.integers(-50, 50), st.integers(-50, 50))
def test_layers_invariant_under_rigid_motion(pts, quarter_turns, dx, dy):
    moved = []
    for x, y in pts:
        for _ in range(quarter_turns):
            x, y = -y, x
        moved.append((x + dx, y + dy))

    def cyclic(layers):
        out = []
        for layer in layers:
            ids = list(layer.vertex_ids)
            if layer.kind is LayerKind.POLYGON:
                k = ids.index(min(ids))
                out.append(tuple(ids[k:] + ids[:k]))
            else:
                out.append(frozenset(ids))
        return out

    assert cyclic(convex_layers(pts)) == cyclic(convex_layers(moved))


def test_convex_position_gives_one_layer():
    rng = np.random.default_rng(3)
    theta = np.sort(rng.uniform(0, 2 * math.pi, 25))
    pts = np.column_stack([np.cos(theta), np.sin(theta)]) * 100
    assert len(convex_layers(pts)) == 1


# -- segments and area --------------------------------------------------------


def test_segment_examples():
    assert segments_properly_intersect((0, 0), (1, 1), (0, 1), (1, 0))
    assert not segments_properly_intersect((0, 0), (1, 0), (1, 0), (2, 0))
    assert not segments_properly_intersect((0, 0), (1, 0), (0, 1), (1, 1))


def test_segment_touching_is_not_proper():
    assert not segments_properly_intersect((0, 0), (2, 0), (1, 0), (1, 5))
    assert not segments_properly_intersect((0, 0), (2, 0), (1, 0), (3, 0))


@settings(max_examples=200, deadline=None)
@given(distinct_int_points(min_size=4, max_size=4, lo=-5, hi=5))
def test_segment_symmetries(pts):
    a1, a2, b1, b2 = pts
    r = segments_properly_intersect(a1, a2, b1, b2)
    for args in permutations([(a1, a2), (b1, b2)]):
        (p1, p2), (q1, q2) = args
        assert segments_properly_intersect(p1, p2, q1, q2) == r
        assert segments_properly_intersect(p2, p1, q1, q2) == r
        assert segments_properly_intersect(p1, p2, q2, q1) == r


def test_area_examples():
    assert polygon_signed_area([(0, 0), (1, 0), (1, 1), (0, 1)]).absolute == 1.0
    assert polygon_signed_area([(0, 0), (1, 0), (0, 1), (1, 1)]).signed == 0.0


@settings(max_examples=100, deadline=None)
@given(distinct_int_points(min_size=3, max_size=12))
def test_area_reversal(pts):
    a = polygon_signed_area(pts)
    b = polygon_signed_area(pts[::-1])
    assert a.absolute == pytest.approx(b.absolute)
    assert a.signed == pytest.approx(-b.signed)
