"""Split the 2-optimal tour's edges by their position relative to the optimal polygon.

Edges strictly inside the optimal polygon, strictly outside it, and lying on
it form the three classes.  Inside and outside edges are then split again by
an anchor edge: a class edge one of whose two arcs along the optimal tour
holds no other class endpoint.  The opposite arc, walked from the anchor's
tail to its head, orders every other endpoint, and an edge is *compatible*
when it runs forward along that order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .geometry import Location, Segment, midpoint, point_in_polygon, polygon_is_simple, segment_on_polygon
from .tsp_core import OrientedTour, edges_length
from .uncross import is_crossing_free

Edge = tuple[int, int]


class MixedEdge(ValueError):
    """An edge is neither inside, outside, nor on the polygon."""


class NoAnchor(ValueError):
    pass


def classify_edges(t: OrientedTour, s: OrientedTour, check: bool = True):
    """Return (inside, outside, on_polygon) edge lists in s order."""
    if t.instance != s.instance:
        raise ValueError("tours must belong to the same instance")
    poly = t.polygon()
    if check and not polygon_is_simple(poly):
        raise ValueError("classification needs a simple optimal tour")
    pts = t.instance.points
    inside, outside, on = [], [], []
    for a, b in s.edges():
        seg = Segment(pts[a], pts[b])
        if segment_on_polygon(seg, poly):
            on.append((a, b))
            continue
        where = point_in_polygon(midpoint(seg), poly, check_simple=False)
        if where is Location.INTERIOR:
            inside.append((a, b))
        elif where is Location.EXTERIOR:
            outside.append((a, b))
        else:
            raise MixedEdge(f"edge {(a, b)} touches the polygon without lying on it")
    return inside, outside, on


def _arc(order: Sequence[int], pos: dict[int, int], u: int, v: int) -> list[int]:
    """Vertices from u to v walking forward along the cyclic order."""
    n = len(order)
    i, j = pos[u], pos[v]
    k = (j - i) % n
    return [order[(i + s) % n] for s in range(k + 1)]


def anchor_path(t: OrientedTour, edges: Sequence[Edge], e0: Edge) -> Optional[list[int]]:
    """Arc of t from e0's tail to its head that holds all other endpoints.

    Returns None when e0 does not qualify as an anchor.
    """
    pos = t.positions()
    x0, y0 = e0
    others = {v for e in edges if e != e0 for v in e} - {x0, y0}
    fwd = _arc(t.order, pos, x0, y0)
    bwd = _arc(t.order[::-1], {v: i for i, v in enumerate(t.order[::-1])}, x0, y0)
    fwd_inner = set(fwd[1:-1])
    bwd_inner = set(bwd[1:-1])
    if not others & bwd_inner and others <= set(fwd):
        return fwd if others or len(bwd) <= len(fwd) else bwd
    if not others & fwd_inner and others <= set(bwd):
        return bwd
    return None


def choose_anchor(t: OrientedTour, edges: Sequence[Edge], prefer: Optional[Edge] = None):
    """Pick the anchor edge and its long arc.

    Among qualifying edges the lexicographically smallest (tail, head) pair
    wins unless ``prefer`` names a qualifying edge.
    """
    if len(edges) < 2:
        raise ValueError("an anchor needs at least two edges")
    if prefer is not None:
        if tuple(prefer) not in set(edges):
            raise NoAnchor(f"preferred anchor {prefer} is not in the edge set")
        path = anchor_path(t, edges, tuple(prefer))
        if path is None:
            raise NoAnchor(f"preferred anchor {prefer} does not qualify")
        return tuple(prefer), path
    for e in sorted(edges):
        path = anchor_path(t, edges, e)
        if path is not None:
            return e, path
    raise NoAnchor("no edge qualifies as anchor")


def qualifying_anchors(t: OrientedTour, edges: Sequence[Edge]) -> list[Edge]:
    return [e for e in sorted(edges) if anchor_path(t, edges, e) is not None]


def split_compatible(edges: Sequence[Edge], e0: Edge, path: Sequence[int]):
    """Split edges into those running forward along path and the rest."""
    phi = {v: i for i, v in enumerate(path)}
    fwd, back = [], []
    for a, b in edges:
        if a not in phi or b not in phi:
            raise ValueError(f"edge {(a, b)} has an endpoint off the anchor path")
        (fwd if phi[a] < phi[b] else back).append((a, b))
    if tuple(e0) not in set(fwd):
        raise ValueError("anchor edge must be compatible with its own path")
    return fwd, back


@dataclass
class EdgePartition:
    s1: list[Edge]
    s2: list[Edge]
    s3: list[Edge]
    s1_prime: list[Edge]
    s1_dprime: list[Edge]
    s2_prime: list[Edge]
    s2_dprime: list[Edge]
    anchor1: Optional[Edge] = None
    anchor2: Optional[Edge] = None
    path1: list[int] = field(default_factory=list)
    path2: list[int] = field(default_factory=list)

    NAMES = ("S1'", "S1''", "S2'", "S2''", "S3")

    def five_sets(self) -> dict[str, list[Edge]]:
        return dict(zip(self.NAMES, (self.s1_prime, self.s1_dprime, self.s2_prime, self.s2_dprime, self.s3)))

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(v) for v in self.five_sets().values())

    def lengths(self, inst) -> dict[str, float]:
        return {k: edges_length(inst, v) for k, v in self.five_sets().items()}

    def role_of(self) -> dict[Edge, str]:
        return {e: name for name, es in self.five_sets().items() for e in es}

    def to_json(self) -> dict:
        roles = self.role_of()
        return {
            "edges": [{"edge": list(e), "role": roles[e]} for e in sorted(roles)],
            "anchor1": list(self.anchor1) if self.anchor1 else None,
            "anchor2": list(self.anchor2) if self.anchor2 else None,
            "path1": list(self.path1),
            "path2": list(self.path2),
        }


def _split_side(t, edges, prefer):
    if len(edges) <= 1:
        return list(edges), [], None, []
    e0, path = choose_anchor(t, edges, prefer)
    fwd, back = split_compatible(edges, e0, path)
    return fwd, back, e0, path


def partition_all(
    t: OrientedTour,
    s: OrientedTour,
    anchor1: Optional[Edge] = None,
    anchor2: Optional[Edge] = None,
    swap_sides: bool = False,
    check: bool = True,
    reverse_s: bool = False,
) -> EdgePartition:
    """Five-way partition of s's edges.

    ``swap_sides`` exchanges inside and outside.  ``reverse_s`` walks s the
    other way round, which flips every edge and any preferred anchor.
    """
    if reverse_s:
        s = s.reversed()
        anchor1 = anchor1[::-1] if anchor1 else None
        anchor2 = anchor2[::-1] if anchor2 else None
    if check and not is_crossing_free(t, s):
        raise ValueError("partition needs a crossing-free pair; subdivide first")
    inside, outside, on = classify_edges(t, s, check=check)
    if swap_sides:
        inside, outside = outside, inside
    p1, d1, a1, path1 = _split_side(t, inside, anchor1)
    p2, d2, a2, path2 = _split_side(t, outside, anchor2)
    return EdgePartition(inside, outside, on, p1, d1, p2, d2, a1, a2, path1, path2)
