"""Exact planar predicates over rational coordinates.

Every predicate here works on ``fractions.Fraction`` (or plain ``int``)
coordinates and never rounds, so the combinatorial decisions made by the
rest of the package (crossing, simplicity, inside/outside) are exact.
Metric quantities (lengths) live in :mod:`twoopt_lab.tsp_core` and are
evaluated in floating point.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

Number = Union[int, Fraction]


class Point(NamedTuple):
    x: Number
    y: Number

    @classmethod
    def of(cls, x, y) -> "Point":
        """Build a point, converting ints, strings and floats to Fraction."""
        return cls(Fraction(x), Fraction(y))

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


class Segment(NamedTuple):
    a: Point
    b: Point


class Orientation(enum.IntEnum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


class Location(enum.Enum):
    INTERIOR = "interior"
    EXTERIOR = "exterior"
    BOUNDARY = "boundary"


class NonSimplePolygon(ValueError):
    """Raised when a polygon argument has self-intersections."""


def cross(p: Point, q: Point, r: Point) -> Number:
    """Cross product (q - p) x (r - p)."""
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def orientation(p: Point, q: Point, r: Point) -> Orientation:
    d = cross(p, q, r)
    if d > 0:
        return Orientation.COUNTERCLOCKWISE
    if d < 0:
        return Orientation.CLOCKWISE
    return Orientation.COLLINEAR


def _sign(v: Number) -> int:
    return (v > 0) - (v < 0)


def on_segment(p: Point, s: Segment) -> bool:
    """True if p lies on the closed segment s."""
    a, b = s
    if cross(a, b, p) != 0:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def in_open_segment(p: Point, s: Segment) -> bool:
    """True if p lies on s but is not one of its endpoints."""
    return p != s.a and p != s.b and on_segment(p, s)


def segment_parameter(p: Point, s: Segment) -> Fraction:
    """Position of p along s as a fraction of its length (p assumed on the line)."""
    dx = s.b.x - s.a.x
    dy = s.b.y - s.a.y
    if abs(dx) >= abs(dy):
        return Fraction(p.x - s.a.x) / dx
    return Fraction(p.y - s.a.y) / dy


def proper_crossing(s: Segment, t: Segment) -> Optional[Point]:
    """Return the point where the open interiors of s and t meet, if unique.

    Endpoint contacts and collinear overlaps are not crossings.
    """
    d1 = _sign(cross(s.a, s.b, t.a))
    d2 = _sign(cross(s.a, s.b, t.b))
    d3 = _sign(cross(t.a, t.b, s.a))
    d4 = _sign(cross(t.a, t.b, s.b))
    if d1 * d2 >= 0 or d3 * d4 >= 0:
        return None
    rx, ry = s.b.x - s.a.x, s.b.y - s.a.y
    qx, qy = t.b.x - t.a.x, t.b.y - t.a.y
    denom = rx * qy - ry * qx
    lam = Fraction((t.a.x - s.a.x) * qy - (t.a.y - s.a.y) * qx) / denom
    return Point(s.a.x + lam * rx, s.a.y + lam * ry)


def segments_intersect(s: Segment, t: Segment) -> bool:
    """Closed-segment intersection test."""
    d1 = _sign(cross(s.a, s.b, t.a))
    d2 = _sign(cross(s.a, s.b, t.b))
    d3 = _sign(cross(t.a, t.b, s.a))
    d4 = _sign(cross(t.a, t.b, s.b))
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (
        (d1 == 0 and on_segment(t.a, s))
        or (d2 == 0 and on_segment(t.b, s))
        or (d3 == 0 and on_segment(s.a, t))
        or (d4 == 0 and on_segment(s.b, t))
    )


def collinear_overlap(s: Segment, t: Segment) -> Optional[tuple[Point, Point]]:
    """Common sub-segment of two collinear segments, if it has positive length."""
    if cross(s.a, s.b, t.a) != 0 or cross(s.a, s.b, t.b) != 0:
        return None
    u0, u1 = sorted((segment_parameter(t.a, s), segment_parameter(t.b, s)))
    lo, hi = max(Fraction(0), u0), min(Fraction(1), u1)
    if lo >= hi:
        return None
    rx, ry = s.b.x - s.a.x, s.b.y - s.a.y
    return (
        Point(s.a.x + lo * rx, s.a.y + lo * ry),
        Point(s.a.x + hi * rx, s.a.y + hi * ry),
    )


def touches_interior(s: Segment, t: Segment) -> bool:
    """True if s and t share a point interior to at least one of them."""
    if not segments_intersect(s, t):
        return False
    if collinear_overlap(s, t) is not None:
        return True
    if proper_crossing(s, t) is not None:
        return True
    # single contact point: it is an endpoint of s or of t
    for p in (t.a, t.b):
        if in_open_segment(p, s):
            return True
    for p in (s.a, s.b):
        if in_open_segment(p, t):
            return True
    return False


def polygon_is_simple(poly: Sequence[Point]) -> bool:
    m = len(poly)
    if m < 3 or len(set(poly)) != m:
        return False
    edges = [Segment(poly[i], poly[(i + 1) % m]) for i in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if touches_interior(edges[i], edges[j]):
                return False
            adjacent = j == i + 1 or (i == 0 and j == m - 1)
            if not adjacent and segments_intersect(edges[i], edges[j]):
                return False
    return True


def point_in_polygon(p: Point, poly: Sequence[Point], check_simple: bool = True) -> Location:
    """Classify p against a simple polygon (vertices in cyclic order).

    Uses the winding number with exact orientation tests; points on an edge
    or vertex are reported as BOUNDARY.
    """
    if check_simple and not polygon_is_simple(poly):
        raise NonSimplePolygon("point_in_polygon requires a simple polygon")
    m = len(poly)
    winding = 0
    for i in range(m):
        a = poly[i]
        b = poly[(i + 1) % m]
        if on_segment(p, Segment(a, b)):
            return Location.BOUNDARY
        if a.y <= p.y:
            if b.y > p.y and cross(a, b, p) > 0:
                winding += 1
        elif b.y <= p.y and cross(a, b, p) < 0:
            winding -= 1
    return Location.INTERIOR if winding != 0 else Location.EXTERIOR


def all_collinear(points: Sequence[Point]) -> bool:
    pts = list(dict.fromkeys(points))
    if not pts:
        raise ValueError("all_collinear needs at least one point")
    if len(pts) <= 2:
        return True
    a, b = pts[0], pts[1]
    return all(cross(a, b, p) == 0 for p in pts[2:])


def midpoint(s: Segment) -> Point:
    return Point(Fraction(s.a.x + s.b.x) / 2, Fraction(s.a.y + s.b.y) / 2)


def segment_on_polygon(s: Segment, poly: Sequence[Point]) -> bool:
    """True if the closed segment s is contained in the boundary of poly."""
    m = len(poly)
    pieces = []
    for i in range(m):
        e = Segment(poly[i], poly[(i + 1) % m])
        ov = collinear_overlap(s, e)
        if ov is not None:
            u = sorted((segment_parameter(ov[0], s), segment_parameter(ov[1], s)))
            pieces.append(u)
    if not pieces:
        return False
    pieces.sort()
    reach = Fraction(0)
    for lo, hi in pieces:
        if lo > reach:
            return False
        reach = max(reach, hi)
    return reach >= 1
