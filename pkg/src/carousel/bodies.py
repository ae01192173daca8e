"""Convex bodies and their support functions.

A body is one of: a convex polygon (one or two vertices double as point
and segment bodies), a disk, an ellipse, an explicit point, or the
convex hull of other bodies (support = pointwise maximum; used for the
hull of a body pair when at least one member is smooth).

The support function h(t) = max over the body of p . (cos t, sin t)
drives everything: supporting lines, membership of one body in the
convex hull of another plus finitely many points, and all the tangency
machinery downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import InvalidBody, ModeMixError
from .kernel import (
    EPS,
    TWO_PI,
    ConvexPolygon,
    HalfPlane,
    Point,
    Scalar,
    as_float_point,
    convex_hull,
    dot,
    norm,
    point_in_polygon,
    unit,
)


@dataclass(frozen=True)
class PolygonBody:
    poly: ConvexPolygon


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: Scalar

    def __post_init__(self):
        if not float(self.radius) > 0.0:
            raise InvalidBody("disk radius must be positive")


@dataclass(frozen=True)
class Ellipse:
    """Axis lengths are semi-axes with a >= b; angle rotates the major axis."""

    center: Point
    a: Scalar
    b: Scalar
    angle: float = 0.0

    def __post_init__(self):
        if not (float(self.a) >= float(self.b) > 0.0):
            raise InvalidBody("ellipse needs a >= b > 0")

    def axes(self):
        u = unit(self.angle)
        return u, Point(-u.y, u.x)


@dataclass(frozen=True)
class PointBody:
    point: Point


@dataclass(frozen=True)
class HullBody:
    """Convex hull of the member bodies; support is their maximum."""

    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise InvalidBody("hull body needs at least one part")


ConvexBody = object  # union of the five dataclasses above


class SupportEval(NamedTuple):
    value: float
    contact: Point
    kind: str  # vertex | edge-interior | smooth


def is_polygonal(body) -> bool:
    if isinstance(body, (PolygonBody, PointBody)):
        return True
    if isinstance(body, HullBody):
        return all(is_polygonal(p) for p in body.parts)
    return False


def polygonal_vertices(body) -> list:
    if isinstance(body, PolygonBody):
        return list(body.poly.vertices)
    if isinstance(body, PointBody):
        return [body.point]
    if isinstance(body, HullBody):
        out = []
        for p in body.parts:
            out.extend(polygonal_vertices(p))
        return out
    raise ModeMixError("smooth body has no vertex list")


def as_float_body(body):
    if isinstance(body, PolygonBody):
        return PolygonBody(body.poly.as_float())
    if isinstance(body, PointBody):
        return PointBody(as_float_point(body.point))
    if isinstance(body, Disk):
        return Disk(as_float_point(body.center), float(body.radius))
    if isinstance(body, Ellipse):
        return Ellipse(as_float_point(body.center), float(body.a),
                       float(body.b), float(body.angle))
    if isinstance(body, HullBody):
        return HullBody(tuple(as_float_body(p) for p in body.parts))
    raise TypeError(type(body))


def origin_radius(body) -> float:
    """Upper bound for |p| over the body; Lipschitz constant of support."""
    if isinstance(body, PolygonBody):
        return max(norm(v) for v in body.poly.vertices)
    if isinstance(body, PointBody):
        return norm(body.point)
    if isinstance(body, Disk):
        return norm(body.center) + float(body.radius)
    if isinstance(body, Ellipse):
        return norm(body.center) + float(body.a)
    if isinstance(body, HullBody):
        return max(origin_radius(p) for p in body.parts)
    raise TypeError(type(body))


# ---------------------------------------------------------------------------
# support evaluation

def _half(v):
    """v / 2 without pushing integers into floats."""
    if isinstance(v, int):
        from fractions import Fraction

        return Fraction(v, 2)
    return v / 2


def support_dir(body, d: Point, tie_tol: float = 0.0):
    """Support value and contact in unnormalized direction d.

    Exact whenever the body is polygonal and coordinates are rational.
    Positive homogeneity makes the zero set of support differences
    independent of |d|, which is what the exact tangency path relies on.
    """
    if isinstance(body, PointBody):
        return dot(body.point, d), body.point, "vertex"
    if isinstance(body, PolygonBody):
        verts = body.poly.vertices
        vals = [dot(v, d) for v in verts]
        best = max(vals)
        if tie_tol > 0.0:
            idx = [i for i, v in enumerate(vals) if float(best - v) <= tie_tol]
        else:
            idx = [i for i, v in enumerate(vals) if v == best]
        if len(idx) == 1:
            return best, verts[idx[0]], "vertex"
        # antipodal extreme pair along the boundary span of the tie
        pd = Point(-d.y, d.x)
        keyed = sorted(idx, key=lambda i: float(dot(verts[i], pd)))
        a, b = verts[keyed[0]], verts[keyed[-1]]
        mid = Point(_half(a.x + b.x), _half(a.y + b.y))
        return best, mid, "edge-interior"
    if isinstance(body, Disk):
        nd = norm(d)
        value = float(dot(body.center, d)) + float(body.radius) * nd
        contact = Point(float(body.center.x) + float(body.radius) * float(d.x) / nd,
                        float(body.center.y) + float(body.radius) * float(d.y) / nd)
        return value, contact, "smooth"
    if isinstance(body, Ellipse):
        u, v = body.axes()
        du = float(dot(d, u))
        dv = float(dot(d, v))
        a2u = float(body.a) ** 2 * du
        b2v = float(body.b) ** 2 * dv
        s = math.sqrt(a2u * du + b2v * dv)
        cx, cy = float(body.center.x), float(body.center.y)
        if s == 0.0:
            return float(dot(body.center, d)), Point(cx, cy), "smooth"
        contact = Point(cx + (a2u * u.x + b2v * v.x) / s,
                        cy + (a2u * u.y + b2v * v.y) / s)
        return float(dot(body.center, d)) + s, contact, "smooth"
    if isinstance(body, HullBody):
        best = None
        for part in body.parts:
            cand = support_dir(part, d, tie_tol)
            if best is None or cand[0] > best[0]:
                best = cand
        return best
    raise TypeError(type(body))


def support(body, theta: float, tie_tol: float = 0.0) -> SupportEval:
    """Support in the unit direction (cos theta, sin theta)."""
    value, contact, kind = support_dir(body, unit(theta), tie_tol)
    return SupportEval(float(value), contact, kind)


def support_batch(body, cos_t: np.ndarray, sin_t: np.ndarray) -> np.ndarray:
    """Vectorized support values over unit directions."""
    if isinstance(body, PointBody):
        p = as_float_point(body.point)
        return p.x * cos_t + p.y * sin_t
    if isinstance(body, PolygonBody):
        verts = np.array([(float(v.x), float(v.y)) for v in body.poly.vertices])
        return np.max(verts[:, 0, None] * cos_t + verts[:, 1, None] * sin_t, axis=0)
    if isinstance(body, Disk):
        c = as_float_point(body.center)
        return c.x * cos_t + c.y * sin_t + float(body.radius)
    if isinstance(body, Ellipse):
        u, v = body.axes()
        c = as_float_point(body.center)
        du = cos_t * u.x + sin_t * u.y
        dv = cos_t * v.x + sin_t * v.y
        s = np.sqrt((float(body.a) * du) ** 2 + (float(body.b) * dv) ** 2)
        return c.x * cos_t + c.y * sin_t + s
    if isinstance(body, HullBody):
        return np.maximum.reduce([support_batch(p, cos_t, sin_t) for p in body.parts])
    raise TypeError(type(body))


def supporting_line(body, theta: float) -> HalfPlane:
    """Closed half-plane at normal angle theta whose boundary touches the body."""
    ev = support(body, theta)
    n = unit(theta)
    return HalfPlane(n.x, n.y, ev.value)


def body_contains_point(body, p: Point, eps: float = 0.0) -> bool:
    if isinstance(body, PolygonBody):
        return point_in_polygon(p, body.poly, eps)
    if isinstance(body, PointBody):
        if eps == 0.0:
            return p == body.point
        return (Point(float(p.x), float(p.y)) - as_float_point(body.point)).linf() \
            <= eps * (1.0 + body.point.linf())
    if isinstance(body, Disk):
        dx = float(p.x) - float(body.center.x)
        dy = float(p.y) - float(body.center.y)
        r = float(body.radius)
        return (dx * dx + dy * dy) / (r * r) <= 1.0 + eps
    if isinstance(body, Ellipse):
        u, v = body.axes()
        q = Point(float(p.x) - float(body.center.x), float(p.y) - float(body.center.y))
        qu = float(dot(q, u)) / float(body.a)
        qv = float(dot(q, v)) / float(body.b)
        return qu * qu + qv * qv <= 1.0 + eps
    if isinstance(body, HullBody):
        if is_polygonal(body):
            hull = convex_hull(polygonal_vertices(body))
            return point_in_polygon(p, hull, eps)
        # p in hull iff no direction separates p from the max support
        thetas = np.linspace(0.0, TWO_PI, 1024, endpoint=False)
        ct, st_ = np.cos(thetas), np.sin(thetas)
        h = support_batch(body, ct, st_)
        vals = float(p.x) * ct + float(p.y) * st_ - h
        scale = 1.0 + max(origin_radius(body), float(Point(p[0], p[1]).linf()))
        return bool(np.max(vals) <= eps * scale)
    raise TypeError(type(body))


# ---------------------------------------------------------------------------
# containment in a hull of a body plus extra points

@dataclass(frozen=True)
class ContainmentResult:
    contained: bool
    margin: float
    witness_angle: Optional[float] = None
    escaping_point: Optional[Point] = None


def golden_min(fn, a: float, b: float, tol: float = 1e-12):
    """Golden-section minimizer over [a, b]; returns (argmin, min)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    invphi2 = (3.0 - math.sqrt(5.0)) / 2.0
    h = b - a
    c = a + invphi2 * h
    d = a + invphi * h
    fc, fd = fn(c), fn(d)
    while h > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + invphi2 * h
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + invphi * h
            fd = fn(d)
    x = (a + b) / 2.0
    return x, fn(x)


GRID_THETA = 4096  # start grid for smooth containment minimization


def _hull_support(outer, extra, theta: float) -> float:
    h = support(outer, theta).value if outer is not None else -math.inf
    n = unit(theta)
    for p in extra:
        h = max(h, float(dot(p, n)))
    return h


def contained_in_hull(inner, outer, extra: Sequence[Point] = (),
                      eps: float = EPS, n_theta: int = GRID_THETA) -> ContainmentResult:
    """Decide inner <= convex hull of (outer union extra points).

    Polygonal hulls are settled by exact vertex membership (sign-exact in
    rational mode); hulls with a smooth generator are settled by
    minimizing the support gap over a dense angle grid with local
    golden-section refinement.
    """
    extra = [Point(p[0], p[1]) for p in extra]
    if outer is not None and is_polygonal(outer):
        pts = polygonal_vertices(outer) + extra
        return _contained_in_polygonal_hull(inner, pts, eps)
    if outer is None:
        return _contained_in_polygonal_hull(inner, extra, eps)
    return _contained_in_smooth_hull(inner, outer, extra, eps, n_theta)


def _all_rational(points) -> bool:
    return not any(isinstance(c, float) for p in points for c in p)


def _contained_in_polygonal_hull(inner, pts, eps):
    hull = convex_hull(pts)
    if is_polygonal(inner):
        exact = _all_rational(hull.vertices) and _all_rational(polygonal_vertices(inner))
        tol = 0.0 if exact else eps
        worst = None
        for v in polygonal_vertices(inner):
            if not point_in_polygon(v, hull, tol):
                worst = v
                break
        margin = _polygon_hull_margin(inner, hull)
        if worst is None:
            return ContainmentResult(True, margin)
        theta, m = _worst_edge_direction(worst, hull, inner)
        return ContainmentResult(False, m, theta, support(inner, theta).contact)
    # smooth inner against polygon hull: per-edge support comparison
    scale = 1.0 + max(hull.max_coord(), origin_radius(inner))
    if hull.n >= 3:
        worst_val = math.inf
        worst_theta = None
        for i in range(hull.n):
            theta = hull.outward_normal_angle(i)
            c = hull.edge_halfplane(i).unit_offset
            f = c - support(inner, theta).value
            if f < worst_val:
                worst_val, worst_theta = f, theta
        if worst_val >= -eps * scale:
            return ContainmentResult(True, worst_val)
        return ContainmentResult(False, worst_val, worst_theta,
                                 support(inner, worst_theta).contact)
    # hull degenerated to a point or segment; minimize the gap for a witness
    return _contained_in_smooth_hull(inner, PolygonBody(hull), (), eps, 2048)


def _polygon_hull_margin(inner, hull):
    """Min over inner vertices of the worst edge slack (float, unit normals)."""
    if hull.n < 3:
        return 0.0
    margin = math.inf
    for v in polygonal_vertices(inner):
        fv = as_float_point(v)
        for i in range(hull.n):
            hp = hull.edge_halfplane(i)
            nl = norm(Point(hp.nx, hp.ny))
            margin = min(margin, -float(hp.value(fv)) / nl)
    return margin


def _worst_edge_direction(p, hull, inner):
    """Most violated hull edge normal for escaped point p, with margin."""
    fp = as_float_point(p)
    if hull.n >= 3:
        best = None
        for i in range(hull.n):
            hp = hull.edge_halfplane(i)
            nl = norm(Point(hp.nx, hp.ny))
            viol = float(hp.value(fp)) / nl
            if best is None or viol > best[1]:
                best = (hp.normal_angle, viol)
        theta = best[0]
    else:
        d = fp - as_float_point(hull.vertices[0])
        theta = math.atan2(d.y, d.x)
    h_hull = _hull_support(None, hull.vertices, theta)
    h_inner = support(inner, theta).value
    return theta, h_hull - h_inner


def _contained_in_smooth_hull(inner, outer, extra, eps, n_theta):
    thetas = np.linspace(0.0, TWO_PI, n_theta, endpoint=False)
    ct, st_ = np.cos(thetas), np.sin(thetas)
    h_hull = support_batch(outer, ct, st_)
    for p in extra:
        fp = as_float_point(p)
        h_hull = np.maximum(h_hull, fp.x * ct + fp.y * st_)
    f = h_hull - support_batch(inner, ct, st_)

    scale = 1.0 + max(origin_radius(outer), origin_radius(inner),
                      max((p.linf() for p in extra), default=0.0))

    def fval(theta):
        return _hull_support(outer, extra, theta) - support(inner, theta).value

    left = np.roll(f, 1)
    right = np.roll(f, -1)
    local_min = np.nonzero((f <= left) & (f <= right))[0]
    step = TWO_PI / n_theta
    # Lipschitz pruning: within one step of a sample the gap moves at most
    # lip * step, so most local minima cannot beat the running best
    lip = 2.0 * scale
    order = sorted(local_min, key=lambda i: float(f[i]))
    best_val = math.inf
    best_theta = None
    for i in order:
        optimistic = float(f[i]) - lip * step
        if optimistic >= best_val and optimistic >= -eps * scale:
            break
        t0 = thetas[i] - step
        t1 = thetas[i] + step
        x, v = golden_min(fval, t0, t1)
        if v < best_val:
            best_val, best_theta = v, x
    if best_theta is None:  # constant f; no structure
        best_theta = 0.0
        best_val = fval(0.0)
    best_theta = float(best_theta) % TWO_PI
    if best_val >= -eps * scale:
        return ContainmentResult(True, float(best_val))
    return ContainmentResult(False, float(best_val), best_theta,
                             support(inner, best_theta).contact)


def body_in_polygon(body, poly: ConvexPolygon, eps: float = 0.0) -> bool:
    """body <= polygon, decided exactly through edge supports."""
    if poly.n < 3:
        if isinstance(body, PointBody):
            return point_in_polygon(body.point, poly, eps)
        if is_polygonal(body):
            return all(point_in_polygon(v, poly, eps) for v in polygonal_vertices(body))
        return False
    scale = 1.0 + poly.max_coord()
    for i in range(poly.n):
        hp = poly.edge_halfplane(i)
        d = Point(hp.nx, hp.ny)
        h, _, _ = support_dir(body, d)
        if eps == 0.0:
            if h > hp.c:
                return False
        else:
            if float(h) > float(hp.c) + eps * scale * norm(d):
                return False
    return True


def bodies_overlap(a, b, eps: float = EPS, n_theta: int = 1024) -> bool:
    """True when the bodies cannot be strictly separated by any line."""
    thetas = np.linspace(0.0, TWO_PI, n_theta, endpoint=False)
    ct, st_ = np.cos(thetas), np.sin(thetas)
    gap = support_batch(a, ct, st_) + support_batch(b, -ct, -st_)
    scale = 1.0 + max(origin_radius(a), origin_radius(b))
    if np.min(gap) > 0.1 * scale:
        return True

    def fval(theta):
        return support(a, theta).value + support(b, theta + math.pi).value

    i = int(np.argmin(gap))
    step = TWO_PI / n_theta
    _, v = golden_min(fval, thetas[i] - step, thetas[i] + step)
    return bool(min(float(np.min(gap)), v) >= -eps * scale)
