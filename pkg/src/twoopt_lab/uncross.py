"""Make a tour pair crossing-free by subdividing both tours at their crossings."""
from __future__ import annotations

from dataclasses import dataclass

from .geometry import Point, Segment, collinear_overlap, proper_crossing, segment_parameter
from .tsp_core import Instance, OrientedTour


class CoincidentPoint(ValueError):
    """A crossing point coincides with an existing vertex or another crossing."""


class CollinearOverlap(ValueError):
    """Two tour edges overlap along a segment without being the same edge."""


@dataclass(frozen=True)
class Crossing:
    t_edge: tuple[int, int]
    s_edge: tuple[int, int]
    point: Point


@dataclass(frozen=True)
class CrossingReport:
    crossings: tuple[Crossing, ...]

    @property
    def count(self) -> int:
        return len(self.crossings)

    def points(self) -> list[Point]:
        return [c.point for c in self.crossings]


@dataclass(frozen=True)
class SubdividedPair:
    v_prime: Instance
    t_prime: OrientedTour
    s_prime: OrientedTour
    report: CrossingReport

    @property
    def n_prime(self) -> int:
        return self.v_prime.n

    def to_json(self) -> dict:
        out = self.v_prime.to_json()
        out["t"] = list(self.t_prime.order)
        out["s"] = list(self.s_prime.order)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SubdividedPair":
        inst = Instance.from_json(data)
        t = OrientedTour(tuple(data["t"]), inst)
        s = OrientedTour(tuple(data["s"]), inst)
        return cls(inst, t, s, enumerate_crossings(t, s))


def _check_same_instance(t: OrientedTour, s: OrientedTour) -> None:
    if t.instance != s.instance:
        raise ValueError("tours must belong to the same instance")


def enumerate_crossings(t: OrientedTour, s: OrientedTour) -> CrossingReport:
    _check_same_instance(t, s)
    pts = t.instance.points
    found = []
    s_edges = s.edges()
    for te in t.edges():
        tseg = Segment(pts[te[0]], pts[te[1]])
        for se in s_edges:
            p = proper_crossing(tseg, Segment(pts[se[0]], pts[se[1]]))
            if p is not None:
                found.append(Crossing(te, se, p))
    return CrossingReport(tuple(found))


def is_crossing_free(t: OrientedTour, s: OrientedTour) -> bool:
    return enumerate_crossings(t, s).count == 0


def _check_overlaps(t: OrientedTour, s: OrientedTour) -> None:
    pts = t.instance.points
    s_und = {frozenset(e) for e in s.edges()}
    for te in t.edges():
        if frozenset(te) in s_und:
            continue
        tseg = Segment(pts[te[0]], pts[te[1]])
        for se in s.edges():
            if collinear_overlap(tseg, Segment(pts[se[0]], pts[se[1]])) is not None:
                raise CollinearOverlap(
                    f"edges {te} and {se} overlap along a segment; one of the tours is not simple"
                )


def _insert(tour: OrientedTour, on_edge: dict, points) -> tuple[int, ...]:
    out = []
    for a, b in tour.edges():
        out.append(a)
        extra = on_edge.get((a, b)) or on_edge.get((b, a))
        if not extra:
            continue
        seg = Segment(points[a], points[b])
        extra = sorted(extra, key=lambda item: segment_parameter(item[1], seg))
        out.extend(idx for idx, _ in extra)
    return tuple(out)


def subdivide_pair(inst: Instance, t: OrientedTour, s: OrientedTour) -> SubdividedPair:
    """Add every crossing as a new vertex of both tours.

    New vertices get indices n, n+1, ... in crossing-enumeration order and are
    spliced into each edge in order of distance from the edge's tail.
    """
    if t.instance != inst or s.instance != inst:
        raise ValueError("tours must belong to the given instance")
    _check_overlaps(t, s)
    report = enumerate_crossings(t, s)
    if report.count == 0:
        return SubdividedPair(inst, t, s, report)
    existing = set(inst.points)
    index_of: dict[Point, int] = {}
    new_points = list(inst.points)
    t_extra: dict = {}
    s_extra: dict = {}
    for c in report.crossings:
        if c.point in existing:
            raise CoincidentPoint(f"crossing {c.point} coincides with an instance vertex")
        if c.point in index_of:
            raise CoincidentPoint(f"two crossings meet at {c.point}")
        idx = len(new_points)
        index_of[c.point] = idx
        new_points.append(c.point)
        t_extra.setdefault(c.t_edge, []).append((idx, c.point))
        s_extra.setdefault(c.s_edge, []).append((idx, c.point))
    v_prime = Instance(tuple(new_points), id=f"{inst.id}+{report.count}" if inst.id else "")
    t_prime = OrientedTour(_insert(t, t_extra, new_points), v_prime)
    s_prime = OrientedTour(_insert(s, s_extra, new_points), v_prime)
    return SubdividedPair(v_prime, t_prime, s_prime, report)
