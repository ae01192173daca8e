"""Sectors, boundary exits, and sweeps inside a container polygon.

A sector of two supporting lines is the intersection of all supporting
half-planes of a body whose normals lie on one of the two arcs between
the line normals; it always contains the body.  For polygon bodies the
family collapses to finitely many half-planes: the two arc endpoints
plus the edge normals strictly inside the arc (interior normals at a
shared vertex are positive combinations of the flanking ones and drop
out).  Smooth bodies are sampled across the arc.

Boundary exits: a supporting line of a body inside a container polygon
leaves the container at one point per travel direction.  Following the
left exit while the line turns clockwise between two adjacent common
supporting lines traces a clockwise boundary segment, the sweep; the
sweeps of consecutive pairs tile the container boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .bodies import (
    body_contains_point,
    is_polygonal,
    origin_radius,
    polygonal_vertices,
    support,
    support_batch,
    supporting_line,
)
from .errors import (
    ContactOutsideContainer,
    DegenerateArc,
    EndpointNotVertex,
    ExpansionTooWide,
    LineSupportMismatch,
)
from .kernel import (
    EPS,
    EPS_ANGLE,
    TWO_PI,
    ConvexPolygon,
    HalfPlane,
    Point,
    angle_of,
    as_float_point,
    convex_hull,
    cw_gap,
    intersect_halfplanes,
    point_in_polygon,
    unit,
    wrap_angle,
)
from .tangency import OrientedSupportLine


@dataclass(frozen=True)
class NormalArc:
    """Closed arc of normal angles traversed clockwise from start.

    Width lives in [0, 2*pi]; zero width is a single angle, full width
    the whole circle.  end = start - width (mod 2*pi).
    """

    start: float
    width: float

    @property
    def end(self) -> float:
        return wrap_angle(self.start - self.width)

    def contains(self, theta: float, tol: float = EPS_ANGLE) -> bool:
        if self.width >= TWO_PI - tol:
            return True
        g = cw_gap(self.start, theta)
        return g <= self.width + tol or g >= TWO_PI - tol

    def angles(self, count: int) -> List[float]:
        """count angles from start to end inclusive, advancing clockwise."""
        if count <= 1:
            return [self.start]
        return [wrap_angle(self.start - self.width * k / (count - 1))
                for k in range(count)]

    def clockwise_offset(self, theta: float) -> float:
        return cw_gap(self.start, theta)


@dataclass(frozen=True)
class SectorRegion:
    """Intersection of supporting half-planes over a normal arc."""

    arc: NormalArc
    body: object
    planes: Tuple[HalfPlane, ...]

    def contains_point(self, p: Point, eps: float = EPS) -> bool:
        return all(hp.contains(p, eps) for hp in self.planes)

    def contains_body(self, other, eps: float = EPS) -> bool:
        """other inside the sector, by support comparison per half-plane.

        Sector planes carry unit normals, so the comparison vectorizes.
        """
        scale = 1.0 + max(origin_radius(other),
                          max(abs(float(hp.c)) for hp in self.planes))
        nx = np.array([float(hp.nx) for hp in self.planes])
        ny = np.array([float(hp.ny) for hp in self.planes])
        c = np.array([float(hp.c) for hp in self.planes])
        h = support_batch(other, nx, ny)
        return bool(np.all(h <= c + eps * scale))

    def clipped(self, container: ConvexPolygon, eps: float = 0.0) -> Optional[ConvexPolygon]:
        """Materialize sector intersected with the container polygon."""
        return intersect_halfplanes(container, self.planes, eps)


SECTOR_SAMPLES = 512  # default half-plane count across a smooth arc


def sector_from_arc(body, arc: NormalArc, samples: int = SECTOR_SAMPLES) -> SectorRegion:
    """Sector of the body over an explicit normal arc."""
    if arc.width <= 0.0:
        return SectorRegion(arc, body, (supporting_line(body, arc.start),))
    if is_polygonal(body):
        planes = [supporting_line(body, arc.start)]
        if arc.width < TWO_PI:
            planes.append(supporting_line(body, arc.end))
        verts = polygonal_vertices(body)
        if len(verts) >= 2:
            poly = convex_hull(verts)
            edge_count = poly.n if poly.n > 2 else 2
            for i in range(edge_count):
                ang = poly.outward_normal_angle(i)
                if arc.width >= TWO_PI:
                    strict = True
                else:
                    off = arc.clockwise_offset(ang)
                    strict = EPS_ANGLE < off < arc.width - EPS_ANGLE
                if strict:
                    planes.append(supporting_line(body, ang))
        if len(verts) <= 2 and arc.width > math.pi / 2:
            # points and segments have vertex normal cones of width pi or
            # more; dropping interior normals is only sound between
            # constraints less than pi apart, so pad to <= pi/2 spacing
            extra = int(arc.width / (math.pi / 2))
            for k in range(1, extra + 1):
                ang = wrap_angle(arc.start - arc.width * k / (extra + 1))
                planes.append(supporting_line(body, ang))
        return SectorRegion(arc, body, tuple(planes))
    # smooth: endpoints plus `samples` angles spread across the arc; values
    # come from one vectorized support sweep (contacts are not needed)
    ts = np.array(arc.angles(samples + 2))
    ct, st = np.cos(ts), np.sin(ts)
    hs = support_batch(body, ct, st)
    planes = tuple(HalfPlane(float(ct[k]), float(st[k]), float(hs[k]))
                   for k in range(len(ts)))
    return SectorRegion(arc, body, planes)


def sector(l1: OrientedSupportLine, l2: OrientedSupportLine, body,
           sign: str = "+", samples: int = SECTOR_SAMPLES) -> SectorRegion:
    """Sector of the two lines by the body over the chosen arc.

    sign '+' takes the clockwise arc from the normal of l1 to the normal
    of l2; sign '-' takes the complementary arc (clockwise from l2 back
    to l1).  The lines must be distinct as oriented lines.
    """
    gap = cw_gap(l1.normal, l2.normal)
    if gap <= EPS_ANGLE or gap >= TWO_PI - EPS_ANGLE:
        raise DegenerateArc("sector needs two distinct oriented lines")
    if sign == "+":
        arc = NormalArc(l1.normal, gap)
    elif sign == "-":
        arc = NormalArc(l2.normal, TWO_PI - gap)
    else:
        raise ValueError("sign must be '+' or '-'")
    return sector_from_arc(body, arc, samples)


def expand_sector(l1: OrientedSupportLine, l2: OrientedSupportLine, body,
                  alpha: float, beta: float,
                  samples: int = SECTOR_SAMPLES, eps: float = EPS) -> SectorRegion:
    """Sector of the slide-turned pair; a superset of the original sector.

    l1 turns clockwise by alpha, l2 counterclockwise by beta; their sum
    must not exceed the clockwise gap between the line normals.  Using
    the whole gap collapses the arc to one angle, i.e. one half-plane.
    """
    if alpha < -eps or beta < -eps:
        raise ExpansionTooWide("negative turn angles")
    gap = cw_gap(l1.normal, l2.normal)
    if gap == 0.0:
        gap = TWO_PI
    if alpha + beta > gap + max(eps, EPS_ANGLE):
        raise ExpansionTooWide(f"alpha+beta = {alpha + beta} exceeds gap {gap}")
    new_width = max(0.0, gap - alpha - beta)
    arc = NormalArc(wrap_angle(l1.normal - alpha), new_width)
    return sector_from_arc(body, arc, samples)


# ---------------------------------------------------------------------------
# boundary exits

@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the container boundary with its carrier edge.

    edge follows the vertex tie rule: when the point sits on a vertex,
    the left exit carries the edge lying clockwise from the vertex and
    the right exit the counterclockwise one.  param is the ccw
    arc-length coordinate along the container boundary.
    """

    location: Point
    edge: int
    vertex: Optional[int]
    param: float


def _vertex_near(container: ConvexPolygon, p: Point, tol: float) -> Optional[int]:
    fp = as_float_point(p)
    for i, v in enumerate(container.vertices):
        fv = as_float_point(v)
        if math.hypot(fp.x - fv.x, fp.y - fv.y) <= tol:
            return i
    return None


def boundary_exit(line: OrientedSupportLine, container: ConvexPolygon,
                  side: str, eps: float = EPS) -> BoundaryPoint:
    """Farthest point of the container along the line, per travel side.

    Side 'L' walks dir_left from the line's contact point, side 'R'
    walks dir_right; the contact must lie inside the container.  The
    result does not depend on which point of the supported body the
    line carries as its contact.
    """
    contact = as_float_point(line.contact0)
    fc = container.as_float()
    if not point_in_polygon(contact, fc, max(eps, 1e-9) * 10.0):
        raise ContactOutsideContainer(f"contact {contact} outside container")
    d = line.dir_left_vec() if side == "L" else line.dir_right_vec()

    t_best = math.inf
    edge_best = None
    for i in range(fc.n):
        hp = fc.edge_halfplane(i)
        nl = math.hypot(float(hp.nx), float(hp.ny))
        den = (float(hp.nx) * d.x + float(hp.ny) * d.y) / nl
        # grazing edges (ray essentially parallel, e.g. a line containing a
        # container edge) must not bind; the transverse edges set the exit
        if den <= 1e-12:
            continue
        t = -float(hp.value(contact)) / nl / den
        if t < t_best:
            t_best, edge_best = t, i
    if edge_best is None or not math.isfinite(t_best):
        raise ContactOutsideContainer("ray does not leave the container")
    t_best = max(t_best, 0.0)
    loc = Point(contact.x + t_best * d.x, contact.y + t_best * d.y)

    tol = max(eps, 1e-9) * (1.0 + fc.max_coord())
    vidx = _vertex_near(fc, loc, tol)
    if vidx is not None:
        loc = as_float_point(fc.vertices[vidx])
        # tie rule: clockwise edge for the left exit, ccw edge for the right
        edge = (vidx - 1) % fc.n if side == "L" else vidx
        param = fc.cumulative_lengths()[vidx]
    else:
        edge = edge_best
        param = fc.boundary_param(loc, edge)
    return BoundaryPoint(loc, edge, vidx, param)


# ---------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class BoundarySweep:
    """Clockwise boundary segment traced by an exit point between two lines."""

    start: BoundaryPoint
    end: BoundaryPoint
    covered: Tuple[int, ...]
    side: str
    cw_length: float


def sweep(l_from: OrientedSupportLine, l_to: OrientedSupportLine, body,
          container: ConvexPolygon, side: str, eps: float = EPS) -> BoundarySweep:
    """Boundary segment from the side exit of l_from clockwise to l_to's.

    l_to is the clockwise successor of l_from among the common
    supporting lines; the body is the hull of the scene pair, and both
    lines must support it (that is what pins the exit's clockwise travel
    between the two endpoints).  The same line passed twice means a full
    turn and the sweep covers everything.
    """
    tol = max(eps, 1e-9) * (1.0 + origin_radius(body)) * 100.0
    for line in (l_from, l_to):
        if abs(support(body, line.normal).value - line.offset) > tol:
            raise LineSupportMismatch(
                f"line at normal {line.normal} does not support the sweep body")
    start = boundary_exit(l_from, container, side, eps)
    full = l_from is l_to or cw_gap(l_from.normal, l_to.normal) <= EPS_ANGLE
    end = start if full else boundary_exit(l_to, container, side, eps)
    fc = container.as_float()
    perim = fc.perimeter
    cum = fc.cumulative_lengths()
    if full:
        order = sorted(range(fc.n), key=lambda i: (start.param - cum[i]) % perim)
        return BoundarySweep(start, end, tuple(order), side, perim)
    length = (start.param - end.param) % perim
    tol = max(eps, 1e-9) * (1.0 + perim)
    hits = []
    for i in range(fc.n):
        off = (start.param - cum[i]) % perim
        if off >= perim - tol:
            hits.append((0.0, i))
        elif off <= length + tol:
            hits.append((min(off, length), i))
    hits.sort()
    return BoundarySweep(start, end, tuple(i for _, i in hits), side, length)


# ---------------------------------------------------------------------------
# vertex hit events

@dataclass(frozen=True)
class VertexEvent:
    """Supporting line through a container vertex: the turning line meets
    the vertex at its left or right exit at this normal angle."""

    vertex: int
    normal: float
    side: str


def vertex_hit_events(body, container: ConvexPolygon, eps: float = EPS):
    """All vertex events of the container around the body.

    Each vertex strictly outside the body yields one left and one right
    event (the two tangent normals).  Vertices inside or on the body are
    reported separately as degenerate.
    """
    events: List[VertexEvent] = []
    degenerate: List[int] = []
    for i, v in enumerate(container.vertices):
        if body_contains_point(body, v, eps):
            degenerate.append(i)
            continue
        if is_polygonal(body):
            pair = _tangent_normals_polygonal(body, v)
        else:
            pair = _tangent_normals_smooth(body, v)
        if pair is None:
            degenerate.append(i)
            continue
        for normal, side in pair:
            events.append(VertexEvent(i, normal, side))
    return events, degenerate


def _tangent_normals_polygonal(body, g: Point):
    verts = polygonal_vertices(body)
    hull = convex_hull(list(verts) + [g])
    try:
        gi = hull.vertices.index(Point(g[0], g[1]))
    except ValueError:
        return None  # g swallowed by the hull: inside the body
    if hull.n == 2:
        # body is a point or collinear segment with g on its line
        other = hull.vertices[1 - gi]
        d = as_float_point(g) - as_float_point(other)
        ang = angle_of(d)
        return ((wrap_angle(ang - math.pi / 2), "L"),
                (wrap_angle(ang + math.pi / 2), "R"))
    prev_edge = (gi - 1) % hull.n
    next_edge = gi
    # hull edge arriving at g: travel direction is dir_left, so g is the
    # left exit; edge leaving g makes it the right exit
    return ((hull.outward_normal_angle(prev_edge), "L"),
            (hull.outward_normal_angle(next_edge), "R"))


def _tangent_normals_smooth(body, g: Point, grid: int = 1024):
    fg = as_float_point(g)
    thetas = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    ct, st = np.cos(thetas), np.sin(thetas)
    vals = fg.x * ct + fg.y * st - support_batch(body, ct, st)

    def f(t: float) -> float:
        n = unit(t)
        return fg.x * n.x + fg.y * n.y - support(body, t).value

    roots = []
    step = TWO_PI / grid
    for i in range(grid):
        a, b = float(vals[i]), float(vals[(i + 1) % grid])
        if (a > 0) != (b > 0):
            lo, hi = thetas[i], thetas[i] + step
            fa = a
            while hi - lo > 1e-12:
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if (fa > 0) != (fm > 0):
                    hi = mid
                else:
                    lo, fa = mid, fm
            roots.append(wrap_angle(0.5 * (lo + hi)))
    if len(roots) != 2:
        return None
    out = []
    for t in roots:
        contact = support(body, t).contact
        dl = unit(wrap_angle(t + math.pi / 2))
        along = (fg.x - float(contact.x)) * dl.x + (fg.y - float(contact.y)) * dl.y
        out.append((t, "L" if along > 0 else "R"))
    return tuple(out)


# ---------------------------------------------------------------------------
# vertices between two turned lines

def vertices_between(l1_turned: OrientedSupportLine, l2_turned: OrientedSupportLine,
                     body, container: ConvexPolygon, eps: float = EPS):
    """Container vertices delimited by the exits of the two turned lines.

    The left exit of the first line and the right exit of the second
    must both land on container vertices.  Of the two closed clockwise
    vertex chains joining them, the one whose boundary segment lies in
    the sector of the turned pair is returned (clockwise order).
    """
    omega_l = boundary_exit(l1_turned, container, "L", eps)
    omega_r = boundary_exit(l2_turned, container, "R", eps)
    if omega_l.vertex is None:
        raise EndpointNotVertex(f"left exit {omega_l.location} is not a vertex")
    if omega_r.vertex is None:
        raise EndpointNotVertex(f"right exit {omega_r.location} is not a vertex")
    a = omega_l.vertex
    b = omega_r.vertex
    n = container.n

    def cw_chain(src: int, dst: int):
        out = [src]
        i = src
        while i != dst:
            i = (i - 1) % n
            out.append(i)
        return out

    chain = cw_chain(b, a)
    gap = cw_gap(l1_turned.normal, l2_turned.normal)
    arc = NormalArc(l1_turned.normal, gap if gap > 0 else 0.0)
    sec = sector_from_arc(body, arc)
    fc = container.as_float()
    if all(sec.contains_point(as_float_point(fc.vertices[i]), 10.0 * eps) for i in chain):
        return chain
    return cw_chain(a, b)
