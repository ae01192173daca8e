import math
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from carousel.errors import EmptyInput, InvalidPolygon
from carousel.kernel import (
    ConvexPolygon,
    HalfPlane,
    Point,
    ccw_gap,
    clip,
    convex_hull,
    cross,
    cw_gap,
    dot,
    point_in_polygon,
    unit,
    wrap_angle,
)

F = Fraction


def is_convex_combination(p, pts):
    """Brute-force: p lies in some triangle (or segment) spanned by pts."""
    for a, b in combinations(pts, 2):
        if cross(a, b, p) == 0 and min(a.x, b.x) <= p.x <= max(a.x, b.x) \
                and min(a.y, b.y) <= p.y <= max(a.y, b.y):
            return True
    for a, b, c in combinations(pts, 3):
        d = cross(a, b, c)
        if d == 0:
            continue
        s1, s2, s3 = cross(a, b, p), cross(b, c, p), cross(c, a, p)
        if d < 0:
            s1, s2, s3 = -s1, -s2, -s3
        if s1 >= 0 and s2 >= 0 and s3 >= 0:
            return True
    return False


def test_wrap_angle_range():
    for t in (-7.0, -math.pi, 0.0, 1.0, math.tau, 10.0):
        w = wrap_angle(t)
        assert 0.0 <= w < math.tau


def test_gaps_complementary():
    a, b = 1.0, 2.5
    assert math.isclose(ccw_gap(a, b) + cw_gap(a, b), math.tau)


def test_hull_singleton():
    h = convex_hull([Point(F(0), F(0))])
    assert h.vertices == (Point(F(0), F(0)),)


def test_hull_drops_interior_point():
    pts = [Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0), Point(0.25, 0.25)]
    h = convex_hull(pts)
    assert set(h.vertices) == {Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)}


def test_hull_drops_collinear_expected_square():
    pts = [Point(F(0), F(0)), Point(F(2), F(0)), Point(F(1), F(0)),
           Point(F(2), F(2)), Point(F(0), F(2))]
    h = convex_hull(pts)
    assert set(h.vertices) == {Point(F(0), F(0)), Point(F(2), F(0)),
                               Point(F(2), F(2)), Point(F(0), F(2))}
    retained = list(h.vertices)
    for p in pts:
        if p not in retained:
            assert is_convex_combination(p, retained)


def test_hull_collinear_input_gives_segment():
    pts = [Point(F(0), F(0)), Point(F(1), F(1)), Point(F(3), F(3))]
    h = convex_hull(pts)
    assert set(h.vertices) == {Point(F(0), F(0)), Point(F(3), F(3))}


def test_hull_empty_raises():
    with pytest.raises(EmptyInput):
        convex_hull([])


def test_polygon_rejects_clockwise():
    with pytest.raises(InvalidPolygon):
        ConvexPolygon((Point(0, 0), Point(0, 1), Point(1, 0)))


def test_polygon_rejects_collinear_triple():
    with pytest.raises(InvalidPolygon):
        ConvexPolygon((Point(0, 0), Point(1, 0), Point(2, 0), Point(1, 1)))


UNIT_SQUARE = ConvexPolygon((Point(F(0), F(0)), Point(F(1), F(0)),
                             Point(F(1), F(1)), Point(F(0), F(1))))


def test_clip_square_half():
    res = clip(UNIT_SQUARE, HalfPlane(F(1), F(0), F(1, 2)))
    assert res is not None
    assert set(res.vertices) == {Point(F(0), F(0)), Point(F(1, 2), F(0)),
                                 Point(F(1, 2), F(1)), Point(F(0), F(1))}


def test_clip_redundant_constraint():
    res = clip(UNIT_SQUARE, HalfPlane(F(1), F(0), F(2)))
    assert res is not None
    assert set(res.vertices) == set(UNIT_SQUARE.vertices)


def test_clip_triangle_area_ratio():
    tri = ConvexPolygon((Point(F(0), F(0)), Point(F(2), F(0)), Point(F(0), F(2))))
    res = clip(tri, HalfPlane(F(1), F(1), F(1)))
    assert res is not None
    assert set(res.vertices) == {Point(F(0), F(0)), Point(F(1), F(0)), Point(F(0), F(1))}
    for p in res.vertices:
        assert p.x + p.y <= 1
    # similarity ratio 1/2 in each linear dimension
    assert res.signed_area2() == tri.signed_area2() * F(1, 4)


def test_clip_to_empty():
    res = clip(UNIT_SQUARE, HalfPlane(F(1), F(0), F(-1)))
    assert res is None


def test_clip_to_single_edge_point():
    res = clip(UNIT_SQUARE, HalfPlane(F(1), F(1), F(0)))
    assert res is not None
    assert res.vertices == (Point(F(0), F(0)),)


def test_point_in_polygon_basics():
    assert point_in_polygon(Point(F(1, 2), F(1, 2)), UNIT_SQUARE)
    assert point_in_polygon(Point(F(1), F(1, 2)), UNIT_SQUARE)
    eps = F(1, 10 ** 6)
    assert not point_in_polygon(Point(F(1) + eps, F(1, 2)), UNIT_SQUARE)


def test_point_in_degenerate_polygons():
    seg = ConvexPolygon((Point(F(0), F(0)), Point(F(2), F(2))))
    assert point_in_polygon(Point(F(1), F(1)), seg)
    assert not point_in_polygon(Point(F(1), F(0)), seg)
    pt = ConvexPolygon((Point(F(3), F(4)),))
    assert point_in_polygon(Point(F(3), F(4)), pt)
    assert not point_in_polygon(Point(F(3), F(5)), pt)


coord = st.integers(min_value=-50, max_value=50)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=1, max_size=12))
def test_hull_idempotent(raw):
    pts = [Point(F(x), F(y)) for x, y in raw]
    h1 = convex_hull(pts)
    h2 = convex_hull(list(h1.vertices))
    assert h1.vertices == h2.vertices


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=3, max_size=10),
       st.integers(min_value=-3, max_value=3),
       st.integers(min_value=-3, max_value=3),
       st.integers(min_value=-60, max_value=60))
def test_clip_subset_of_input(raw, nx, ny, c):
    if nx == 0 and ny == 0:
        nx = 1
    pts = [Point(F(x), F(y)) for x, y in raw]
    poly = convex_hull(pts)
    res = clip(poly, HalfPlane(F(nx), F(ny), F(c)))
    if res is not None:
        for p in res.vertices:
            assert point_in_polygon(p, poly)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=3, max_size=10))
def test_polygon_orientation_positive_area(raw):
    pts = [Point(F(x), F(y)) for x, y in raw]
    h = convex_hull(pts)
    if h.n >= 3:
        assert h.signed_area2() > 0


def test_exact_float_hull_agreement():
    rng = random.Random(7)
    for _ in range(300):
        pts = [(rng.randint(-1000, 1000), rng.randint(-1000, 1000))
               for _ in range(rng.randint(1, 12))]
        he = convex_hull([Point(F(x), F(y)) for x, y in pts])
        hf = convex_hull([Point(float(x), float(y)) for x, y in pts])
        assert [(float(p.x), float(p.y)) for p in he.vertices] == \
               [(p.x, p.y) for p in hf.vertices]


def test_halfplane_geometry():
    hp = HalfPlane.from_normal_angle(math.pi / 2, 1.0)
    assert hp.contains(Point(0.0, 0.5))
    assert not hp.contains(Point(0.0, 1.5))
    assert math.isclose(hp.unit_offset, 1.0)
    b = hp.boundary_point()
    assert math.isclose(b.y, 1.0)


def test_boundary_param_roundtrip():
    sq = UNIT_SQUARE.as_float()
    for param in (0.0, 0.5, 1.0, 2.25, 3.9):
        p = sq.point_on_boundary(param)
        assert point_in_polygon(p, sq, 1e-12)


def test_unit_dot():
    u = unit(0.3)
    assert math.isclose(dot(u, u), 1.0)
