"""Weighted arborescences dual to an optimal polygon cut by non-crossing chords.

The chords all have their endpoints on one path of the polygon, so their
index intervals along that path form a laminar family.  Each chord bounds the
region between itself and its maximal sub-chords.  The root region is
everything outside the maximal intervals, including the polygon edges off the
path.  Dual edges point from a region to the regions nested directly inside it.

Every edge of the arborescence carries two weights:

* ``c`` is the length of the chord it crosses;
* ``w`` is the total polygon-edge length on the child region's boundary.

The checkers below verify the inequalities that hold on such trees.  They
work on any arborescence, so synthetic trees can be checked the same way.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .tsp_core import OrientedTour

Edge = tuple[int, int]
DEFAULT_TOLERANCE = 1e-9
SMALL_K = 18.0


class CrossingChords(ValueError):
    pass


class CoverGap(AssertionError):
    pass


class InvalidArborescence(ValueError):
    pass


# -- regions -----------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    id: int
    chord: Optional[Edge]
    parent: Optional[int]
    children: tuple[int, ...]
    t_edges: tuple[Edge, ...]
    vertices: tuple[int, ...]  # boundary cycle in order


@dataclass(frozen=True)
class RegionTree:
    regions: tuple[Region, ...]
    root: int
    path: tuple[int, ...]
    tour: OrientedTour = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.regions)

    def chord_region(self) -> dict[Edge, int]:
        return {r.chord: r.id for r in self.regions if r.chord is not None}

    def adjacency(self) -> list[tuple[int, int, Edge]]:
        """(outer region, inner region, separating chord) triples."""
        return [(r.parent, r.id, r.chord) for r in self.regions if r.parent is not None]

    def polygon(self, region_id: int):
        pts = self.tour.instance.points
        return [pts[v] for v in self.regions[region_id].vertices]

    def anchor_point(self, region_id: int) -> tuple[float, float]:
        """Mean of the region's boundary vertices, for drawing."""
        pts = self.tour.instance.points
        vs = self.regions[region_id].vertices
        return (
            math.fsum(float(pts[v].x) for v in vs) / len(vs),
            math.fsum(float(pts[v].y) for v in vs) / len(vs),
        )


def _interval(phi, chord):
    a, b = chord
    if a not in phi or b not in phi:
        raise ValueError(f"chord {chord} has an endpoint off the path")
    return min(phi[a], phi[b]), max(phi[a], phi[b])


def build_regions(t: OrientedTour, chords: Sequence[Edge], path: Sequence[int], anchor: Optional[Edge] = None) -> RegionTree:
    """Faces of the polygon ``t`` cut by ``chords``, as a laminar tree.

    ``path`` is the polygon path holding every chord endpoint.  When
    ``anchor`` is given it must be a chord spanning the whole path.
    """
    path = tuple(path)
    if len(path) < 2:
        raise ValueError("path needs at least two vertices")
    phi = {v: i for i, v in enumerate(path)}
    if len(phi) != len(path):
        raise ValueError("path repeats a vertex")
    succ = t.successor()
    fwd = all(succ[path[i]] == path[i + 1] for i in range(len(path) - 1))
    pred = {b: a for a, b in t.edges()}
    if not fwd and not all(pred[path[i]] == path[i + 1] for i in range(len(path) - 1)):
        raise ValueError("path does not follow the tour")
    if anchor is not None:
        if tuple(anchor) not in set(map(tuple, chords)):
            raise ValueError("anchor must be one of the chords")
        if _interval(phi, anchor) != (0, len(path) - 1):
            raise ValueError("anchor must span the whole path")

    spans = sorted(((_interval(phi, tuple(c)), tuple(c)) for c in chords), key=lambda it: (it[0][0], -it[0][1]))
    # stack-based nesting; entry k is chord k in sorted order
    parent: list[Optional[int]] = []
    stack: list[int] = []
    for k, ((lo, hi), chord) in enumerate(spans):
        if lo == hi:
            raise ValueError(f"chord {chord} is degenerate")
        while stack and spans[stack[-1]][0][1] <= lo:
            stack.pop()
        if stack:
            plo, phi_ = spans[stack[-1]][0]
            if hi > phi_ or (lo, hi) == (plo, phi_):
                raise CrossingChords(f"chords {spans[stack[-1]][1]} and {chord} interleave")
        parent.append(stack[-1] if stack else None)
        stack.append(k)

    m = len(spans)
    kids: list[list[int]] = [[] for _ in range(m + 1)]  # index m is the root
    for k, p in enumerate(parent):
        kids[m if p is None else p].append(k)

    def boundary(lo, hi, children):
        covered = [spans[c][0] for c in children]
        edges, verts = [], []
        i = lo
        for clo, chi in covered + [(hi, hi)]:
            for j in range(i, clo):
                edges.append((path[j], path[j + 1]) if fwd else (path[j + 1], path[j]))
            verts.extend(path[i : clo + 1])
            i = chi
        return edges, verts

    # region ids: root 0, then chords in sorted (preorder) position + 1
    regions = []
    edges, verts = boundary(0, len(path) - 1, kids[m])
    # close the root boundary by walking on from the path's end back to its start
    step = succ if fwd else pred
    off, off_verts = [], []
    v = path[-1]
    while v != path[0]:
        u = step[v]
        off.append((v, u) if fwd else (u, v))
        if u != path[0]:
            off_verts.append(u)
        v = u
    regions.append(
        Region(0, None, None, tuple(c + 1 for c in kids[m]), tuple(edges + off), tuple(verts + off_verts))
    )
    for k, ((lo, hi), chord) in enumerate(spans):
        edges, verts = boundary(lo, hi, kids[k])
        p = parent[k]
        regions.append(
            Region(k + 1, chord, 0 if p is None else p + 1, tuple(c + 1 for c in kids[k]), tuple(edges), tuple(verts))
        )
    return RegionTree(tuple(regions), 0, path, t)


# -- arborescences ------------------------------------------------------------


@dataclass(frozen=True)
class ArcEdge:
    tail: int
    head: int
    c: float
    w: float
    chord: Optional[Edge] = None


@dataclass(frozen=True)
class WeightedArborescence:
    root: int
    edges: tuple[ArcEdge, ...]
    root_weight: float = 0.0

    def __post_init__(self):
        heads = [e.head for e in self.edges]
        if len(set(heads)) != len(heads):
            raise InvalidArborescence("a vertex has in-degree above one")
        if self.root in heads:
            raise InvalidArborescence("the root has an incoming edge")
        for e in self.edges:
            if not (e.c > 0 and e.w > 0) or not (math.isfinite(e.c) and math.isfinite(e.w)):
                raise InvalidArborescence(f"edge {e.tail}->{e.head} needs finite positive c and w")
        # every vertex must be reachable from the root
        seen = {self.root}
        frontier = [self.root]
        kids = self.children_map()
        while frontier:
            v = frontier.pop()
            for e in kids.get(v, ()):
                seen.add(e.head)
                frontier.append(e.head)
        if len(seen) != len(self.edges) + 1:
            raise InvalidArborescence("edges do not form a tree rooted at the root")

    @property
    def vertices(self) -> list[int]:
        return [self.root] + [e.head for e in self.edges]

    def children_map(self) -> dict[int, list[ArcEdge]]:
        out: dict[int, list[ArcEdge]] = {}
        for e in self.edges:
            out.setdefault(e.tail, []).append(e)
        return out

    def out_degree(self, v: int) -> int:
        return len(self.children_map().get(v, []))

    def leaves(self) -> list[int]:
        kids = self.children_map()
        return [v for v in self.vertices if v not in kids]

    def total_c(self) -> float:
        return math.fsum(e.c for e in self.edges)

    def total_w(self) -> float:
        return math.fsum(e.w for e in self.edges)

    def subtree_w(self) -> dict[tuple[int, int], float]:
        """w(A_e) for every edge e, keyed by (tail, head)."""
        kids = self.children_map()
        below: dict[int, float] = {}

        def down(v):
            # iterative post-order to avoid deep recursion
            order, stack = [], [v]
            while stack:
                u = stack.pop()
                order.append(u)
                stack.extend(e.head for e in kids.get(u, ()))
            for u in reversed(order):
                below[u] = math.fsum(e.w + below[e.head] for e in kids.get(u, ()))

        down(self.root)
        return {(e.tail, e.head): e.w + below[e.head] for e in self.edges}

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "edges": [{"from": e.tail, "to": e.head, "c": e.c, "w": e.w} for e in self.edges],
            "root_weight": self.root_weight,
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeightedArborescence":
        try:
            edges = tuple(ArcEdge(int(e["from"]), int(e["to"]), float(e["c"]), float(e["w"])) for e in data["edges"])
            return cls(int(data["root"]), edges, float(data.get("root_weight", 0.0)))
        except (KeyError, TypeError) as exc:
            raise InvalidArborescence(f"malformed arborescence JSON: {exc}") from exc


def load_arborescence(path) -> WeightedArborescence:
    with open(path, encoding="utf-8") as fh:
        return WeightedArborescence.from_json(json.load(fh))


def load_arborescences(path) -> dict[str, WeightedArborescence]:
    """A single arborescence keyed by file name, or a name -> arborescence map."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "edges" not in data and data and all(isinstance(v, dict) for v in data.values()):
        return {name: WeightedArborescence.from_json(v) for name, v in data.items()}
    return {Path(path).name: WeightedArborescence.from_json(data)}


def build_arborescence(rt: RegionTree) -> WeightedArborescence:
    d = rt.tour.instance.dist
    edges = []
    for parent, child, chord in rt.adjacency():
        a, b = chord
        w = math.fsum(d[u][v] for u, v in rt.regions[child].t_edges)
        edges.append(ArcEdge(parent, child, d[a][b], w, chord))
    root_w = math.fsum(d[u][v] for u, v in rt.regions[rt.root].t_edges)
    return WeightedArborescence(rt.root, tuple(edges), root_w)


# -- inequality checks --------------------------------------------------------


@dataclass
class LemmaReport:
    condition: str
    holds: bool
    worst_slack: float
    witness: Optional[object] = None
    checked: int = 0


class _Tally:
    def __init__(self, condition: str, tol: float):
        self.condition = condition
        self.tol = tol
        self.worst = math.inf
        self.witness = None
        self.ok = True
        self.checked = 0

    def add(self, lhs: float, rhs: float, witness) -> None:
        self.checked += 1
        slack = rhs - lhs
        if slack < self.worst:
            self.worst = slack
            self.witness = witness
        if slack < -self.tol * max(abs(lhs), abs(rhs)):
            self.ok = False

    def report(self) -> LemmaReport:
        if self.checked == 0:
            return LemmaReport(self.condition, True, math.inf, None, 0)
        return LemmaReport(self.condition, self.ok, self.worst, self.witness, self.checked)


def check_combined_triangle(a: WeightedArborescence, tol: float = DEFAULT_TOLERANCE) -> LemmaReport:
    """c(e) <= w(e) + sum of c over the child edges of e's head."""
    kids = a.children_map()
    t = _Tally("combined-triangle", tol)
    for e in a.edges:
        t.add(e.c, e.w + math.fsum(f.c for f in kids.get(e.head, ())), (e.tail, e.head))
    return t.report()


def check_combined_two_opt(a: WeightedArborescence, tol: float = DEFAULT_TOLERANCE) -> LemmaReport:
    """c(x,y) + c(y,z) <= w(x,y) + sum of c over the other children of y."""
    kids = a.children_map()
    t = _Tally("combined-two-opt", tol)
    for e in a.edges:
        below = kids.get(e.head, [])
        total = math.fsum(f.c for f in below)
        for g in below:
            t.add(e.c + g.c, e.w + (total - g.c), ((e.tail, e.head), (g.tail, g.head)))
    return t.report()


def check_weight_bound(a: WeightedArborescence, tol: float = DEFAULT_TOLERANCE) -> LemmaReport:
    """c(e) <= w(A_e)."""
    sub = a.subtree_w()
    t = _Tally("subtree-weight", tol)
    for e in a.edges:
        t.add(e.c, sub[(e.tail, e.head)], (e.tail, e.head))
    return t.report()


def check_max_bound(a: WeightedArborescence, tol: float = DEFAULT_TOLERANCE) -> LemmaReport:
    """2 max c(child) <= w(e) - c(e) + sum c(child); vacuous for leaf edges."""
    kids = a.children_map()
    t = _Tally("max-child", tol)
    for e in a.edges:
        below = kids.get(e.head)
        if not below:
            continue
        t.add(2 * max(f.c for f in below), e.w - e.c + math.fsum(f.c for f in below), (e.tail, e.head))
    return t.report()


@dataclass(frozen=True)
class EdgeSet:
    edges: tuple[tuple[int, int], ...]
    c_sum: float


def e_prime_set(a: WeightedArborescence, k: float) -> EdgeSet:
    """Edges having a child edge longer than 1/k of their own c."""
    if k <= 0:
        raise ValueError("k must be positive")
    kids = a.children_map()
    chosen = [e for e in a.edges if kids.get(e.head) and max(f.c for f in kids[e.head]) > e.c / k]
    return EdgeSet(tuple((e.tail, e.head) for e in chosen), math.fsum(e.c for e in chosen))


def e_r_set(a: WeightedArborescence, k: float, r: float) -> EdgeSet:
    """Edges with r < c(e) <= (k/4) r whose children are all at most c(e)/k."""
    if k <= 0 or r < 0:
        raise ValueError("need k > 0 and r >= 0")
    kids = a.children_map()
    chosen = [
        e
        for e in a.edges
        if r < e.c <= k / 4 * r and all(f.c <= e.c / k for f in kids.get(e.head, ()))
    ]
    return EdgeSet(tuple((e.tail, e.head) for e in chosen), math.fsum(e.c for e in chosen))


def check_e_prime(a: WeightedArborescence, k: float, tol: float = DEFAULT_TOLERANCE) -> LemmaReport:
    es = e_prime_set(a, k)
    t = _Tally("e-prime", tol)
    t.add(es.c_sum, k / 2 * a.total_w(), es.edges)
    return t.report()


def check_e_r(a: WeightedArborescence, k: float, rs: Sequence[float], tol: float = DEFAULT_TOLERANCE) -> LemmaReport:
    t = _Tally("e-r", tol)
    w = a.total_w()
    for r in rs:
        es = e_r_set(a, k, r)
        t.add(es.c_sum, 2 * w, (r, es.edges))
    return t.report()


def _ratio_bound(size: int, log=math.log) -> float:
    return 12 * log(size) / log(log(size))


@dataclass
class BoundCertificate:
    k: float
    regime: str
    c_total: float
    w_total: float
    edge_count: int
    levels: int
    radii: list[float]
    e_prime: EdgeSet
    e_star: EdgeSet
    e_r: list[EdgeSet]
    size_bound_holds: Optional[bool] = None
    ratio_bound: Optional[float] = None
    ratio_bound_holds: Optional[bool] = None
    base2_disagrees: bool = False

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "regime": self.regime,
            "c_total": self.c_total,
            "w_total": self.w_total,
            "edges": self.edge_count,
            "levels": self.levels,
            "e_prime": len(self.e_prime.edges),
            "e_star": len(self.e_star.edges),
            "e_r": [len(s.edges) for s in self.e_r],
            "size_bound_holds": self.size_bound_holds,
            "ratio_bound": self.ratio_bound,
            "ratio_bound_holds": self.ratio_bound_holds,
            "base2_disagrees": self.base2_disagrees,
        }


def _near(x: float, y: float, tol: float) -> bool:
    return abs(x - y) <= tol * max(abs(x), abs(y))


def bound_certificate(a: WeightedArborescence, tol: float = DEFAULT_TOLERANCE) -> BoundCertificate:
    """Cover E(A) by E', E* and the E_r levels, then evaluate the size and ratio bounds.

    The cover is computed in every regime.  The size and ratio assertions are
    made only once c(A) >= 18 w(A).
    """
    for rep in (check_combined_triangle(a, tol), check_combined_two_opt(a, tol)):
        if not rep.holds:
            raise ValueError(f"certificate needs condition {rep.condition} (worst slack {rep.worst_slack:.3g})")
    if not a.edges:
        raise ValueError("certificate needs at least one edge")
    c_total, w_total = a.total_c(), a.total_w()
    k = c_total / w_total
    levels = math.floor(k / 6)
    radii = [(4 / k) ** i * w_total for i in range(1, levels + 1)]
    floor_r = (4 / k) ** levels * w_total
    e_prime = e_prime_set(a, k)
    star = [e for e in a.edges if e.c <= floor_r]
    e_star = EdgeSet(tuple((e.tail, e.head) for e in star), math.fsum(e.c for e in star))
    e_r = [e_r_set(a, k, r) for r in radii]

    covered = set(e_prime.edges) | set(e_star.edges)
    for s in e_r:
        covered |= set(s.edges)
    kids = a.children_map()
    for e in a.edges:
        key = (e.tail, e.head)
        if key in covered:
            continue
        # float rounding can open hairline gaps at shared level boundaries
        bounds = [floor_r] + radii + [k / 4 * r for r in radii]
        children_ok = all(f.c <= e.c / k * (1 + tol) for f in kids.get(e.head, ()))
        if children_ok and any(_near(e.c, b, tol) for b in bounds):
            continue
        raise CoverGap(f"edge {key} with c={e.c!r} lies in no covering set (k={k!r})")

    cert = BoundCertificate(k, "small-k" if k < SMALL_K else "large-k", c_total, w_total, len(a.edges),
                            levels, radii, e_prime, e_star, e_r)
    if k >= SMALL_K:
        (cert.size_bound_holds, cert.ratio_bound, cert.ratio_bound_holds,
         cert.base2_disagrees) = large_k_bounds(len(a.edges), c_total, w_total, tol)
    return cert


def large_k_bounds(edge_count: int, c_total: float, w_total: float, tol: float = DEFAULT_TOLERANCE):
    """Size bound |E| >= (k/6)^(k/6) and the 12 log/loglog ratio bound (natural log).

    Returns (size holds, ratio bound, ratio holds, base-2 verdict differs).
    """
    k = c_total / w_total
    if k < SMALL_K:
        raise ValueError("the size and ratio bounds apply only for k >= 18")
    size_ok = edge_count >= (k / 6) ** (k / 6) * (1 - tol)
    if edge_count <= 18:
        # log log |E| is not in the increasing range of log x / log log x
        return size_ok, None, False, False
    bound = _ratio_bound(edge_count) * w_total
    holds = c_total <= bound * (1 + tol)
    base2 = c_total <= _ratio_bound(edge_count, math.log2) * w_total * (1 + tol)
    return size_ok, bound, holds, base2 != holds


def lemma_suite(a: WeightedArborescence, tol: float = DEFAULT_TOLERANCE) -> list[LemmaReport]:
    """Every check, with k = c(A)/w(A) and the certificate's radii plus each c(e)/2."""
    reports = [
        check_combined_triangle(a, tol),
        check_combined_two_opt(a, tol),
        check_weight_bound(a, tol),
        check_max_bound(a, tol),
    ]
    if a.edges:
        k = a.total_c() / a.total_w()
        levels = math.floor(k / 6)
        rs = [(4 / k) ** i * a.total_w() for i in range(1, levels + 1)]
        rs += [e.c / 2 for e in a.edges]
        reports.append(check_e_prime(a, k, tol))
        reports.append(check_e_r(a, k, rs, tol))
    return reports


# -- pipeline -----------------------------------------------------------------


@dataclass(frozen=True)
class SetArborescence:
    name: str
    regions: RegionTree
    arborescence: WeightedArborescence


def pipeline_arborescences(t: OrientedTour, partition) -> list[SetArborescence]:
    """Arborescences for the four chord sets, skipping sets with fewer than two edges."""
    out = []
    plan = [
        ("S1'", partition.s1_prime, partition.path1, partition.anchor1),
        ("S1''", partition.s1_dprime, partition.path1, None),
        ("S2'", partition.s2_prime, partition.path2, partition.anchor2),
        ("S2''", partition.s2_dprime, partition.path2, None),
    ]
    for name, chords, path, anchor in plan:
        if len(chords) < 2 or not path:
            continue
        rt = build_regions(t, chords, path, anchor)
        out.append(SetArborescence(name, rt, build_arborescence(rt)))
    return out


# -- synthetic trees ----------------------------------------------------------


def random_arborescence(
    rng: random.Random,
    max_degree: int = 4,
    max_depth: int = 6,
    max_edges: int = 60,
    slack_prob: float = 0.5,
) -> WeightedArborescence:
    """Random tree whose c values are pushed towards the largest the two conditions allow.

    The weights are assigned bottom-up.  Each child's c is fixed before its
    parent's, so a parent takes the largest c its children permit: w plus
    the sum of child c minus twice the largest child c.  When one child
    dominates, every child c is scaled down to keep that bound positive.
    Scaling a child down never breaks the child's own constraints, because
    they only cap it from above.
    """
    depth = {0: 0}
    kids: dict[int, list[int]] = {0: []}
    frontier = [0]
    nxt = 1
    while frontier and nxt <= max_edges:
        v = frontier.pop(0)
        if depth[v] >= max_depth:
            continue
        lo = 1 if v == 0 else 0
        for _ in range(rng.randint(lo, max_degree)):
            if nxt > max_edges:
                break
            kids[v].append(nxt)
            kids[nxt] = []
            depth[nxt] = depth[v] + 1
            frontier.append(nxt)
            nxt += 1
    w = {v: 10 ** rng.uniform(-2, 2) for v in kids if v != 0}
    c: dict[int, float] = {}
    order = sorted(kids, key=lambda v: -depth[v])
    for v in order:
        if v == 0:
            continue
        ch = kids[v]
        if ch:
            vals = [c[u] for u in ch]
            top, rest = max(vals), math.fsum(vals) - max(vals)
            if top - rest >= 0.99 * w[v]:
                scale = 0.5 * w[v] / (top - rest)
                for u in ch:
                    c[u] *= scale
                vals = [c[u] for u in ch]
                top, rest = max(vals), math.fsum(vals) - max(vals)
            cap = w[v] + rest - top
        else:
            cap = w[v]
        factor = 1.0 if rng.random() >= slack_prob else rng.uniform(0.05, 1.0)
        c[v] = cap * factor
    edges = tuple(ArcEdge(p, u, c[u], w[u]) for p in sorted(kids) for u in kids[p])
    return WeightedArborescence(0, edges)


def satisfies_conditions(a: WeightedArborescence, tol: float = DEFAULT_TOLERANCE) -> bool:
    return check_combined_triangle(a, tol).holds and check_combined_two_opt(a, tol).holds
