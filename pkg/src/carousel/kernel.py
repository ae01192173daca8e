"""Planar substrate: scalars, angles, half-planes, convex polygons.

Conventions
-----------
Angles are radians in [0, 2*pi), measured counterclockwise from the +x
axis; a normal angle t stands for the unit vector (cos t, sin t).
Polygons are stored counterclockwise with strictly convex corners.
Degenerate polygons with one or two vertices (points, segments) are
legal values; operations that need area reject them explicitly.

Two arithmetic modes coexist.  Exact mode keeps every coordinate a
`fractions.Fraction` and compares with zero tolerance; float mode uses
binary64 and compares through an epsilon scaled by the coordinate
magnitude.  A computation must not mix the two; scenes carry the mode
and coerce their data on load.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from .errors import EmptyInput, InvalidPolygon

Scalar = Union[int, float, Fraction]

TWO_PI = 2.0 * math.pi
EPS = 1e-9
EPS_ANGLE = 1e-10


class Point(NamedTuple):
    x: Scalar
    y: Scalar

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def scaled(self, k: Scalar) -> "Point":
        return Point(self.x * k, self.y * k)

    def linf(self) -> float:
        return max(abs(float(self.x)), abs(float(self.y)))


def dot(a: Point, b: Point) -> Scalar:
    return a.x * b.x + a.y * b.y


def cross(o: Point, a: Point, b: Point) -> Scalar:
    """Twice the signed area of the triangle (o, a, b); > 0 for a left turn."""
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def perp(d: Point) -> Point:
    """d rotated +90 degrees counterclockwise."""
    return Point(-d.y, d.x)


def norm(d: Point) -> float:
    return math.hypot(float(d.x), float(d.y))


def as_float_point(p: Point) -> Point:
    return Point(float(p.x), float(p.y))


# ---------------------------------------------------------------------------
# angles

def wrap_angle(t: float) -> float:
    """Reduce to [0, 2*pi)."""
    t = math.fmod(t, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    return t if t < TWO_PI else 0.0


def unit(t: float) -> Point:
    return Point(math.cos(t), math.sin(t))


def angle_of(d: Point) -> float:
    return wrap_angle(math.atan2(float(d.y), float(d.x)))


def ccw_gap(a: float, b: float) -> float:
    """Counterclockwise angular travel from a to b, in [0, 2*pi)."""
    return wrap_angle(b - a)


def cw_gap(a: float, b: float) -> float:
    """Clockwise angular travel from a to b, in [0, 2*pi)."""
    return wrap_angle(a - b)


def circ_dist(a: float, b: float) -> float:
    g = ccw_gap(a, b)
    return min(g, TWO_PI - g)


def angles_close(a: float, b: float, tol: float = EPS_ANGLE) -> bool:
    return circ_dist(a, b) <= tol


# ---------------------------------------------------------------------------
# half-planes

@dataclass(frozen=True)
class HalfPlane:
    """The closed set {p : p . (nx, ny) <= c}.

    The normal need not be unit length; exact mode keeps it an integer or
    rational vector so membership tests stay sign-exact.
    """

    nx: Scalar
    ny: Scalar
    c: Scalar

    @classmethod
    def from_normal_angle(cls, theta: float, offset: float) -> "HalfPlane":
        n = unit(theta)
        return cls(n.x, n.y, offset)

    def value(self, p: Point) -> Scalar:
        """Signed violation; <= 0 inside, > 0 outside (normal scale units)."""
        return self.nx * p.x + self.ny * p.y - self.c

    def contains(self, p: Point, eps: float = 0.0) -> bool:
        if eps == 0.0:
            return self.value(p) <= 0
        scale = (1.0 + p.linf()) * norm(Point(self.nx, self.ny))
        return float(self.value(p)) <= eps * scale

    @property
    def normal_angle(self) -> float:
        return angle_of(Point(self.nx, self.ny))

    @property
    def unit_offset(self) -> float:
        return float(self.c) / norm(Point(self.nx, self.ny))

    def boundary_point(self) -> Point:
        """Some point on the boundary line (float)."""
        n2 = float(self.nx) ** 2 + float(self.ny) ** 2
        k = float(self.c) / n2
        return Point(float(self.nx) * k, float(self.ny) * k)


# ---------------------------------------------------------------------------
# polygons

@dataclass(frozen=True)
class ConvexPolygon:
    """Counterclockwise strictly convex vertex cycle.

    One vertex is a point, two are a segment; three or more must make
    exclusively left turns (no duplicates, no three collinear).
    """

    vertices: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "vertices", tuple(Point(p[0], p[1]) for p in self.vertices)
        )
        v = self.vertices
        if not v:
            raise InvalidPolygon("polygon needs at least one vertex")
        n = len(v)
        for i in range(n):
            if n > 1 and v[i] == v[(i + 1) % n]:
                raise InvalidPolygon("duplicate consecutive vertices")
        if n >= 3:
            for i in range(n):
                if cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) <= 0:
                    raise InvalidPolygon("vertices not strictly convex ccw")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> Point:
        return self.vertices[i % len(self.vertices)]

    def edge(self, i: int):
        """Edge i joins vertex i to vertex i+1 (ccw)."""
        return self.vertices[i % self.n], self.vertices[(i + 1) % self.n]

    def edge_vector(self, i: int) -> Point:
        a, b = self.edge(i)
        return b - a

    def outward_normal(self, i: int) -> Point:
        """Outward normal direction of edge i (not normalized)."""
        d = self.edge_vector(i)
        return Point(d.y, -d.x)

    def outward_normal_angle(self, i: int) -> float:
        return angle_of(self.outward_normal(i))

    def edge_halfplane(self, i: int) -> HalfPlane:
        nrm = self.outward_normal(i)
        a, _ = self.edge(i)
        return HalfPlane(nrm.x, nrm.y, dot(nrm, a))

    def signed_area2(self) -> Scalar:
        v = self.vertices
        total = 0
        for i in range(len(v)):
            a, b = v[i], v[(i + 1) % len(v)]
            total += a.x * b.y - a.y * b.x
        return total

    @property
    def area(self) -> float:
        return float(self.signed_area2()) / 2.0

    @property
    def perimeter(self) -> float:
        v = self.vertices
        if len(v) == 1:
            return 0.0
        return sum(norm(v[(i + 1) % len(v)] - v[i]) for i in range(len(v)))

    def centroid(self) -> Point:
        v = self.vertices
        sx = sum(p.x for p in v)
        sy = sum(p.y for p in v)
        if isinstance(sx, Fraction) or isinstance(sy, Fraction):
            return Point(Fraction(sx, len(v)), Fraction(sy, len(v)))
        return Point(sx / len(v), sy / len(v))

    def max_coord(self) -> float:
        return max(p.linf() for p in self.vertices)

    def as_float(self) -> "ConvexPolygon":
        return ConvexPolygon(tuple(as_float_point(p) for p in self.vertices))

    # boundary arc-length parametrization (float, ccw, zero at vertex 0)
    def cumulative_lengths(self):
        out = [0.0]
        for i in range(self.n):
            out.append(out[-1] + norm(self.edge_vector(i)))
        return out

    def boundary_param(self, p: Point, edge_index: int) -> float:
        cum = self.cumulative_lengths()
        a, _ = self.edge(edge_index)
        return cum[edge_index] + norm(as_float_point(p) - as_float_point(a))

    def point_on_boundary(self, param: float) -> Point:
        cum = self.cumulative_lengths()
        total = cum[-1]
        t = math.fmod(param, total)
        if t < 0:
            t += total
        for i in range(self.n):
            if t <= cum[i + 1] or i == self.n - 1:
                a, b = self.edge(i)
                seg = cum[i + 1] - cum[i]
                frac = 0.0 if seg == 0.0 else (t - cum[i]) / seg
                fa, fb = as_float_point(a), as_float_point(b)
                return Point(fa.x + frac * (fb.x - fa.x), fa.y + frac * (fb.y - fa.y))
        raise AssertionError("unreachable")


def convex_hull(points: Sequence[Point]) -> ConvexPolygon:
    """Minimal strictly convex ccw cycle containing the input points.

    Collinear and interior points are dropped; the cycle starts at the
    lexicographically smallest vertex so equal inputs give equal outputs.
    """
    if not points:
        raise EmptyInput("convex_hull of no points")
    pts = sorted(set(Point(p[0], p[1]) for p in points))
    if len(pts) == 1:
        return ConvexPolygon((pts[0],))

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:
        return ConvexPolygon((pts[0], pts[-1]))
    return ConvexPolygon(tuple(hull))


def point_in_polygon(p: Point, poly: ConvexPolygon, eps: float = 0.0) -> bool:
    """Closed membership test; boundary points count as inside.

    eps == 0 is the exact-mode path (pure sign tests); otherwise the
    tolerance is scaled per edge by coordinate magnitude and edge length.
    """
    v = poly.vertices
    if len(v) == 1:
        if eps == 0.0:
            return p == v[0]
        return (p - v[0]).linf() <= eps * (1.0 + v[0].linf())
    if len(v) == 2:
        a, b = v
        c = cross(a, b, p)
        d = b - a
        t = dot(p - a, d)
        l2 = dot(d, d)
        if eps == 0.0:
            return c == 0 and 0 <= t <= l2
        tol = eps * (1.0 + max(a.linf(), b.linf(), p.linf()))
        return abs(float(c)) <= tol * norm(d) and -tol * norm(d) <= float(t) and float(t) <= float(l2) + tol * norm(d)
    for i in range(len(v)):
        a, b = v[i], v[(i + 1) % len(v)]
        c = cross(a, b, p)
        if eps == 0.0:
            if c < 0:
                return False
        else:
            tol = eps * (1.0 + max(a.linf(), b.linf(), p.linf())) * norm(b - a)
            if float(c) < -tol:
                return False
    return True


def clip(poly: ConvexPolygon, hp: HalfPlane, eps: float = 0.0) -> Optional[ConvexPolygon]:
    """Intersect a convex polygon with a closed half-plane.

    Returns None when the intersection is empty; a single point or
    segment intersection comes back as a degenerate polygon.
    """
    verts = poly.vertices
    vals = [hp.value(p) for p in verts]
    if eps == 0.0:
        tols = [0.0] * len(verts)
    else:
        nl = norm(Point(hp.nx, hp.ny))
        tols = [eps * (1.0 + p.linf()) * nl for p in verts]

    out = []
    n = len(verts)
    if n == 1:
        return poly if float(vals[0]) <= tols[0] else None
    for i in range(n if n > 2 else 1):
        a, b = verts[i], verts[(i + 1) % n]
        va, vb = vals[i], vals[(i + 1) % n]
        ina = float(va) <= tols[i]
        inb = float(vb) <= tols[(i + 1) % n]
        if ina:
            out.append(a)
        if ina != inb:
            if isinstance(va, int) and isinstance(vb, int):
                t = Fraction(va, va - vb)  # keep integer inputs exact
            else:
                t = va / (va - vb)
            out.append(Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))
    if n == 2 and float(vals[1]) <= tols[1]:
        out.append(verts[1])
    if not out:
        return None
    return convex_hull(out)


def intersect_halfplanes(seed: ConvexPolygon, planes, eps: float = 0.0) -> Optional[ConvexPolygon]:
    """Clip a polygon by a sequence of half-planes; None when emptied."""
    poly: Optional[ConvexPolygon] = seed
    for hp in planes:
        if poly is None:
            return None
        poly = clip(poly, hp, eps)
    return poly
