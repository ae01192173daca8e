"""Common supporting lines of a body pair and their cyclic structure.

A line with outward normal angle t supports both bodies on the same
side exactly when the support difference h0(t) - h1(t) vanishes, so the
common supporting lines are the zero set of that difference on the
circle.  Lines are oriented: the same geometric line with opposite
normals counts twice, which keeps the normal-angle map a bijection even
for point and segment bodies.

Two algorithms coexist.  Polygonal pairs enumerate the finitely many
candidate normals (perpendiculars of cross-body vertex differences plus
all edge normals), evaluate the difference there and on a probe inside
every gap between consecutive candidates; between candidates the
difference is a single sine piece, so a zero probe certifies a whole
zero arc.  This path is sign-exact in rational mode and reproduces the
same structure in float mode.  Pairs with a smooth member sample the
difference on a dense grid, bisect sign changes, and report plateaus as
arcs of infinitely many common lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import List, Optional, Tuple

import numpy as np

from .bodies import (
    golden_min,
    is_polygonal,
    origin_radius,
    polygonal_vertices,
    support,
    support_batch,
    support_dir,
)
from .kernel import (
    EPS,
    EPS_ANGLE,
    TWO_PI,
    Point,
    angle_of,
    cw_gap,
    unit,
    wrap_angle,
)


@dataclass(frozen=True)
class OrientedSupportLine:
    """A common (or single-body) supporting line with outward normal angle.

    dir_left is the travel direction with the supported bodies on the
    left; it is the normal rotated +90 degrees counterclockwise.
    """

    normal: float
    offset: float
    contact0: Point
    contact1: Optional[Point] = None

    @property
    def dir_left(self) -> float:
        return wrap_angle(self.normal + math.pi / 2)

    @property
    def dir_right(self) -> float:
        return wrap_angle(self.normal - math.pi / 2)

    def dir_left_vec(self) -> Point:
        return unit(self.dir_left)

    def dir_right_vec(self) -> Point:
        return unit(self.dir_right)


@dataclass(frozen=True)
class CslLines:
    """Finitely many common supporting lines, sorted by ascending normal."""

    lines: Tuple[OrientedSupportLine, ...]
    degenerate: bool = False
    notes: Tuple[str, ...] = ()

    @property
    def count(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class CslArcs:
    """The support difference vanishes on whole arcs (infinitely many lines).

    Arcs are (start, end) traversed counterclockwise (ascending angle).
    """

    arcs: Tuple[Tuple[float, float], ...]


@dataclass(frozen=True)
class CslIdentical:
    """Equal support functions everywhere, i.e. equal bodies."""


def support_difference(a0, a1, theta: float) -> float:
    return support(a0, theta).value - support(a1, theta).value


def support_difference_dir(a0, a1, d: Point):
    return support_dir(a0, d)[0] - support_dir(a1, d)[0]


def make_line(a0, a1, theta: float) -> OrientedSupportLine:
    ev0 = support(a0, theta)
    ev1 = support(a1, theta)
    return OrientedSupportLine(wrap_angle(theta), ev0.value, ev0.contact, ev1.contact)


def make_support_line(body, theta: float) -> OrientedSupportLine:
    ev = support(body, theta)
    return OrientedSupportLine(wrap_angle(theta), ev.value, ev.contact, None)


def slide_turn(body, base: OrientedSupportLine, alpha: float) -> OrientedSupportLine:
    """Supporting line of the body after turning clockwise by alpha.

    Positive alpha turns clockwise; internally that subtracts from the
    normal angle.  alpha = 0 reproduces the base line of the body.
    """
    return make_support_line(body, wrap_angle(base.normal - alpha))


# ---------------------------------------------------------------------------
# candidate machinery for polygonal pairs

def _canon_dir_rational(d: Point) -> Point:
    """Primitive integer representative of the ray through rational d."""
    fx, fy = Fraction(d.x), Fraction(d.y)
    den = math.lcm(fx.denominator, fy.denominator)
    p = fx.numerator * (den // fx.denominator)
    q = fy.numerator * (den // fy.denominator)
    g = math.gcd(abs(p), abs(q))
    return Point(p // g, q // g)


def _dir_cmp(a: Point, b: Point) -> int:
    """Exact cyclic comparison of direction rays starting at angle 0, ccw."""

    def half(d: Point) -> int:
        return 0 if (d.y > 0 or (d.y == 0 and d.x > 0)) else 1

    ha, hb = half(a), half(b)
    if ha != hb:
        return -1 if ha < hb else 1
    c = a.x * b.y - a.y * b.x
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


def _gap_probe(u: Point, v: Point) -> Point:
    """A direction strictly inside the ccw arc from ray u to ray v."""
    c = u.x * v.y - u.y * v.x
    s = u.x * v.x + u.y * v.y
    if c > 0:
        return Point(u.x + v.x, u.y + v.y)
    if c < 0:
        return Point(-(u.x + v.x), -(u.y + v.y))
    if s < 0:  # antipodal rays: quarter turn ccw from u
        return Point(-u.y, u.x)
    raise ValueError("no gap between equal directions")


def _raw_candidate_dirs(a0, a1):
    v0 = polygonal_vertices(a0)
    v1 = polygonal_vertices(a1)
    cands = []
    for p in v0:
        for q in v1:
            d = p - q
            if d.x == 0 and d.y == 0:
                continue
            cands.append(Point(d.y, -d.x))
            cands.append(Point(-d.y, d.x))

    def edge_normals(verts):
        n = len(verts)
        if n == 1:
            return
        count = n if n > 2 else 2
        for i in range(count):
            a, b = verts[i % n], verts[(i + 1) % n]
            if a == b:
                continue
            d = b - a
            yield Point(d.y, -d.x)

    cands.extend(edge_normals(v0))
    cands.extend(edge_normals(v1))
    return cands


_FLOAT_MERGE_TOL = 1e-13  # rays closer than this are one candidate in float


def _candidate_directions(a0, a1):
    """Deduplicated candidate rays in ccw cyclic order, plus rationality."""
    cands = _raw_candidate_dirs(a0, a1)
    if not cands:
        return [], True
    rational = not any(isinstance(c, float) for d in cands for c in d)
    if rational:
        canon = {}
        for d in cands:
            cd = _canon_dir_rational(d)
            canon[(cd.x, cd.y)] = cd
        return sorted(canon.values(), key=cmp_to_key(_dir_cmp)), True
    seen = []
    withang = sorted((angle_of(d), d) for d in cands)
    for ang, d in withang:
        if seen and ang - seen[-1][0] <= _FLOAT_MERGE_TOL:
            continue
        seen.append((ang, d))
    if len(seen) >= 2 and (TWO_PI - seen[-1][0] + seen[0][0]) <= _FLOAT_MERGE_TOL:
        seen.pop()
    return [d for _, d in seen], False


def _csl_polygonal(a0, a1, eps: float):
    dirs, rational = _candidate_directions(a0, a1)
    if not dirs:
        # both bodies are the same single point
        return CslIdentical()
    scale = 1.0 + max(origin_radius(a0), origin_radius(a1))

    def is_zero(d: Point, value) -> bool:
        if rational:
            return value == 0
        n = math.hypot(float(d.x), float(d.y))
        return abs(float(value)) <= eps * scale * n

    m = len(dirs)
    zero_at = [is_zero(d, support_difference_dir(a0, a1, d)) for d in dirs]
    gap_zero = []
    gap_sign = []
    for i in range(m):
        probe = _gap_probe(dirs[i], dirs[(i + 1) % m]) if m > 1 else Point(-dirs[0].y, dirs[0].x)
        dv = support_difference_dir(a0, a1, probe)
        gz = is_zero(probe, dv)
        gap_zero.append(gz)
        gap_sign.append(0 if gz else (1 if dv > 0 else -1))

    if all(zero_at) and all(gap_zero):
        return CslIdentical()

    if any(gap_zero):
        return CslArcs(tuple(_assemble_arcs(dirs, zero_at, gap_zero)))

    lines = []
    notes = []
    degenerate = False
    for i in range(m):
        if not zero_at[i]:
            continue
        theta = angle_of(dirs[i])
        lines.append(make_line(a0, a1, theta))
        if gap_sign[i - 1] == gap_sign[i]:
            degenerate = True
            notes.append(f"tangential zero at normal {theta:.12f}")
    lines.sort(key=lambda l: l.normal)
    return CslLines(tuple(lines), degenerate, tuple(notes))


def _assemble_arcs(dirs, zero_at, gap_zero):
    """Maximal runs of zero gaps, joined across zero candidates."""
    m = len(dirs)
    arcs = []
    for i in range(m):
        prev_joined = gap_zero[i - 1] and zero_at[i]
        if gap_zero[i] and not prev_joined:
            j = i
            while gap_zero[(j + 1) % m] and zero_at[(j + 1) % m] and (j + 1) % m != i:
                j += 1
            arcs.append((angle_of(dirs[i]), angle_of(dirs[(j + 1) % m])))
    return arcs


# ---------------------------------------------------------------------------
# sampled machinery for pairs with a smooth member

CSL_GRID = 4096
ROOT_WIDTH = 1e-12
ARC_EDGE_WIDTH = 1e-10


def _bisect_root(fn, a: float, b: float, fa: float, fb: float,
                 width: float = ROOT_WIDTH) -> float:
    while b - a > width:
        mid = 0.5 * (a + b)
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fa > 0) != (fm > 0):
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def _circular_runs(mask) -> list:
    """(start, end) index pairs of maximal cyclic runs of True; end inclusive."""
    n = len(mask)
    if bool(np.all(mask)) or not bool(np.any(mask)):
        return []
    runs = []
    for i in range(n):
        if mask[i] and not mask[i - 1]:
            j = i
            while mask[(j + 1) % n]:
                j += 1
            runs.append((i, j % n))
    return runs


def _run_len(run, n: int) -> int:
    lo, hi = run
    return (hi - lo) % n + 1


def _refine_plateau_edge(dfun, inside_t: float, outside_t: float, thr: float) -> float:
    """Boundary angle of {|delta| <= thr} between an inside and outside angle."""
    for _ in range(64):
        mid = 0.5 * (inside_t + outside_t)
        if abs(dfun(mid)) <= thr:
            inside_t = mid
        else:
            outside_t = mid
        if abs(inside_t - outside_t) <= ARC_EDGE_WIDTH:
            break
    return inside_t


def _csl_sampled(a0, a1, eps: float):
    thetas = np.linspace(0.0, TWO_PI, CSL_GRID, endpoint=False)
    deltas = support_batch(a0, np.cos(thetas), np.sin(thetas)) \
        - support_batch(a1, np.cos(thetas), np.sin(thetas))
    scale = 1.0 + max(origin_radius(a0), origin_radius(a1))
    thr = eps * scale

    def dfun(t: float) -> float:
        return support_difference(a0, a1, t)

    near = np.abs(deltas) <= thr
    if bool(np.all(near)):
        return CslIdentical()

    step = TWO_PI / CSL_GRID
    runs = [r for r in _circular_runs(near) if _run_len(r, CSL_GRID) >= 2]
    if runs:
        arcs = []
        for lo, hi in runs:
            start = _refine_plateau_edge(dfun, thetas[lo], thetas[lo] - step, thr)
            end = _refine_plateau_edge(dfun, thetas[hi], thetas[hi] + step, thr)
            arcs.append((wrap_angle(start), wrap_angle(end)))
        return CslArcs(tuple(arcs))

    # walk samples with a strict sign; a near-zero block between two strict
    # samples is one event: a crossing when the signs differ, a tangential
    # touch when they agree
    strict = [i for i in range(CSL_GRID) if abs(float(deltas[i])) > thr]
    roots = []
    tangential = []
    for k in range(len(strict)):
        i, j = strict[k], strict[(k + 1) % len(strict)]
        gap_steps = (j - i) % CSL_GRID
        if gap_steps == 0:
            continue
        ti = thetas[i]
        tj = ti + gap_steps * step
        di, dj = float(deltas[i]), float(deltas[j])
        if (di > 0) != (dj > 0):
            roots.append(_bisect_root(dfun, ti, tj, di, dj))
        elif gap_steps > 1:
            x, v = golden_min(lambda t: abs(dfun(t)), ti, tj)
            if abs(v) <= thr:
                tangential.append(wrap_angle(x))

    roots = sorted(wrap_angle(r) for r in roots)
    merged = []
    merge_tol = max(EPS_ANGLE, 2 * ROOT_WIDTH)
    for r in roots + sorted(tangential):
        if any(abs(r - x) <= merge_tol or TWO_PI - abs(r - x) <= merge_tol for x in merged):
            continue
        merged.append(r)
    merged.sort()
    lines = tuple(make_line(a0, a1, r) for r in merged)
    degenerate = bool(tangential)
    notes = tuple(f"tangential zero at normal {t:.12f}" for t in tangential)
    return CslLines(lines, degenerate, notes)


# ---------------------------------------------------------------------------
# public entry points

def common_supporting_lines(a0, a1, eps: float = EPS):
    """All oriented common supporting lines of the pair.

    Returns CslLines (finite, cyclically sorted), CslArcs (the difference
    vanishes on whole arcs), or CslIdentical.
    """
    if is_polygonal(a0) and is_polygonal(a1):
        return _csl_polygonal(a0, a1, eps)
    return _csl_sampled(a0, a1, eps)


@dataclass(frozen=True)
class AdjacentPair:
    """A line and its clockwise successor, with the clockwise gap between them."""

    index: int
    line: OrientedSupportLine
    cw_next: OrientedSupportLine
    delta: float


def adjacent_pairs(csl: CslLines) -> List[AdjacentPair]:
    """Pairs (line, clockwise successor); their gaps tile the full circle.

    Lines are sorted by ascending normal, so the clockwise successor of
    lines[i] is lines[i-1]; a single line wraps onto itself with gap 2*pi.
    """
    lines = csl.lines
    s = len(lines)
    if s == 0:
        return []
    if s == 1:
        return [AdjacentPair(0, lines[0], lines[0], TWO_PI)]
    out = []
    for i in range(s):
        nxt = lines[i - 1]
        gap = cw_gap(lines[i].normal, nxt.normal)
        if gap == 0.0:
            gap = TWO_PI
        out.append(AdjacentPair(i, lines[i], nxt, gap))
    return out


def adjacency_gaps(csl: CslLines) -> List[float]:
    """Clockwise angular gaps, one per line, summing to a full turn."""
    return [p.delta for p in adjacent_pairs(csl)]


def _polygon_edge_normal_angles(body) -> List[float]:
    if not is_polygonal(body):
        return []
    verts = polygonal_vertices(body)
    if len(verts) < 2:
        return []
    from .kernel import convex_hull

    poly = convex_hull(verts)
    count = poly.n if poly.n > 2 else 2
    return [poly.outward_normal_angle(i) for i in range(count)]


def mixed_sign_gaps(a0, a1, csl: CslLines, probes: int = 512,
                    eps: float = EPS) -> List[int]:
    """Indices of adjacency gaps where the support difference changes sign.

    A genuine gap between adjacent common supporting lines has constant
    sign; a mixed gap means a nearby zero pair escaped the search and
    the scene should be treated as degenerate.  Narrow excursions peak
    at kinks of the difference, i.e. at polygon edge normals, so those
    angles are probed alongside the uniform grid.
    """
    pairs = adjacent_pairs(csl)
    if not pairs:
        return []
    kink_angles = _polygon_edge_normal_angles(a0) + _polygon_edge_normal_angles(a1)
    angles = []
    slices = []
    pos = 0
    for pair in pairs:
        ks = np.arange(1, probes + 1)
        chunk = list(pair.line.normal - pair.delta * ks / (probes + 1))
        for ang in kink_angles:
            off = cw_gap(pair.line.normal, ang)
            if EPS_ANGLE < off < pair.delta - EPS_ANGLE:
                chunk.append(ang)
        angles.extend(chunk)
        slices.append((pos, pos + len(chunk)))
        pos += len(chunk)
    thetas = np.array(angles)
    deltas = support_batch(a0, np.cos(thetas), np.sin(thetas)) \
        - support_batch(a1, np.cos(thetas), np.sin(thetas))
    scale = 1.0 + max(origin_radius(a0), origin_radius(a1))
    thr = eps * scale
    out = []
    for (lo, hi), pair in zip(slices, pairs):
        chunk = deltas[lo:hi]
        has_pos = bool(np.any(chunk > thr))
        has_neg = bool(np.any(chunk < -thr))
        if has_pos and has_neg:
            out.append(pair.index)
    return out


def gap_sign_profile(a0, a1, csl: CslLines, probes: int = 64, eps: float = EPS):
    """Signs of the support difference inside each adjacency gap.

    A mixed-sign gap means a zero was missed or touched tangentially;
    callers flag such scenes as degenerate rather than reordering.
    """
    scale = 1.0 + max(origin_radius(a0), origin_radius(a1))
    out = []
    for pair in adjacent_pairs(csl):
        signs = set()
        for k in range(1, probes + 1):
            t = pair.line.normal - pair.delta * k / (probes + 1)
            v = support_difference(a0, a1, t)
            if abs(v) > eps * scale:
                signs.add(1 if v > 0 else -1)
        out.append(signs)
    return out
