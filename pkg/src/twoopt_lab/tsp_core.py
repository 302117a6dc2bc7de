"""Euclidean TSP instances, oriented tours and exact optimum oracles."""
from __future__ import annotations

import enum
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .geometry import Point, Segment, all_collinear

HELD_KARP_LIMIT = 18
BRUTE_FORCE_LIMIT = 9
# tours within this relative length of the optimum count as ties
TIE_RTOL = 1e-12


class InstanceTooLarge(ValueError):
    pass


class Family(str, enum.Enum):
    UNIFORM_BOX = "uniform-box"
    GRID = "grid"
    COLLINEAR = "collinear"


@dataclass(frozen=True)
class Instance:
    points: tuple[Point, ...]
    id: str = ""

    def __post_init__(self):
        pts = tuple(Point.of(p[0], p[1]) for p in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("instance points must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def dist(self) -> list[list[float]]:
        """Dense float distance matrix (row lists for fast scalar access)."""
        xy = [(float(p.x), float(p.y)) for p in self.points]
        return [[math.hypot(ax - bx, ay - by) for (bx, by) in xy] for (ax, ay) in xy]

    @cached_property
    def dist_array(self) -> np.ndarray:
        return np.array(self.dist, dtype=float)

    def c(self, i: int, j: int) -> float:
        return self.dist[i][j]

    def is_degenerate(self) -> bool:
        return all_collinear(self.points)

    def to_json(self) -> dict:
        return {"id": self.id, "points": [_encode_point(p) for p in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "Instance":
        return cls(tuple(_decode_point(p) for p in data["points"]), id=str(data.get("id", "")))


def _encode_point(p: Point) -> list[int]:
    x, y = Fraction(p.x), Fraction(p.y)
    if x.denominator == 1 and y.denominator == 1:
        return [x.numerator, y.numerator]
    return [x.numerator, x.denominator, y.numerator, y.denominator]


def _decode_point(raw: Sequence[int]) -> Point:
    if len(raw) == 2:
        return Point.of(raw[0], raw[1])
    if len(raw) == 4:
        return Point(Fraction(raw[0], raw[1]), Fraction(raw[2], raw[3]))
    raise ValueError(f"bad point encoding {raw!r}")


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return Instance.from_json(json.load(fh))


def canonical_order(order: Sequence[int]) -> tuple[int, ...]:
    """Rotate to start at the smallest vertex; walk toward its smaller neighbour."""
    n = len(order)
    k = min(range(n), key=order.__getitem__)
    fwd = tuple(order[(k + i) % n] for i in range(n))
    if n > 2 and fwd[-1] < fwd[1]:
        return (fwd[0],) + tuple(reversed(fwd[1:]))
    return fwd


@dataclass(frozen=True)
class OrientedTour:
    order: tuple[int, ...]
    instance: Instance = field(repr=False, compare=False)

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        if sorted(order) != list(range(self.instance.n)):
            raise ValueError("tour must visit every instance vertex exactly once")
        object.__setattr__(self, "order", order)

    @property
    def n(self) -> int:
        return len(self.order)

    def edges(self) -> list[tuple[int, int]]:
        o = self.order
        return [(o[i], o[(i + 1) % len(o)]) for i in range(len(o))]

    def segments(self) -> list[Segment]:
        pts = self.instance.points
        return [Segment(pts[a], pts[b]) for a, b in self.edges()]

    def polygon(self) -> list[Point]:
        return [self.instance.points[v] for v in self.order]

    def positions(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}

    def successor(self) -> dict[int, int]:
        return dict(self.edges())

    def canonical(self) -> "OrientedTour":
        return OrientedTour(canonical_order(self.order), self.instance)

    def reversed(self) -> "OrientedTour":
        return OrientedTour(tuple(reversed(self.order)), self.instance)

    def length(self) -> float:
        return tour_length(self)

    def same_cycle(self, other: "OrientedTour") -> bool:
        return canonical_order(self.order) == canonical_order(other.order)


def tour_length(t: OrientedTour) -> float:
    # fsum is exactly rounded, so rotations and reversals give identical values
    d = t.instance.dist
    o = canonical_order(t.order)
    return math.fsum(d[o[i]][o[(i + 1) % len(o)]] for i in range(len(o)))


def edges_length(inst: Instance, edges: Iterable[tuple[int, int]]) -> float:
    d = inst.dist
    return math.fsum(d[a][b] for a, b in edges)


def _check_size(inst: Instance, limit: int) -> None:
    if inst.n < 3:
        raise ValueError("tours need at least 3 points")
    if inst.n > limit:
        raise InstanceTooLarge(f"n={inst.n} exceeds limit {limit}")


def exact_optimum(inst: Instance, limit: int = HELD_KARP_LIMIT) -> OrientedTour:
    """Held-Karp over subsets of {1..n-1}; vertex 0 is the fixed start.

    ``best[mask, j]`` is the shortest path leaving 0, visiting exactly the
    vertices of ``mask`` and ending at j.  The tour is rebuilt forward from
    0, always taking the smallest next vertex that still completes an optimal
    tour, which yields the lexicographically smallest optimal sequence.
    """
    _check_size(inst, limit)
    n = inst.n
    d = inst.dist_array
    m = n - 1
    full = (1 << m) - 1
    best = np.full((1 << m, m), np.inf)
    for j in range(m):
        best[1 << j, j] = d[0, j + 1]
    inner = d[1:, 1:]
    masks = np.arange(1 << m, dtype=np.int64)
    popcount = np.zeros(1 << m, dtype=np.int64)
    for j in range(m):
        popcount += (masks >> j) & 1
    # best[prev, i] stays inf for i outside prev, so a plain min over i is safe
    for size in range(2, m + 1):
        layer = masks[popcount == size]
        for j in range(m):
            sel = layer[(layer >> j) & 1 == 1]
            prev = sel ^ (1 << j)
            best[sel, j] = (best[prev, :] + inner[:, j]).min(axis=1)
    closing = best[full, :] + d[1:, 0]
    opt = float(closing.min())
    slack = opt * TIE_RTOL

    seq = [0]
    remaining = full
    acc = 0.0
    cur = 0
    while remaining:
        for j in range(m):
            if not remaining >> j & 1:
                continue
            total = acc + d[cur, j + 1] + best[remaining, j]
            if total <= opt + slack:
                acc += d[cur, j + 1]
                cur = j + 1
                remaining ^= 1 << j
                seq.append(cur)
                break
        else:  # pragma: no cover - float inconsistency guard
            raise RuntimeError("Held-Karp reconstruction failed")
    return OrientedTour(canonical_order(seq), inst)


def brute_force_optimum(inst: Instance) -> OrientedTour:
    """Exhaustive search over canonical cyclic orders; test oracle only."""
    _check_size(inst, BRUTE_FORCE_LIMIT)
    n = inst.n
    tours = []
    for perm in itertools.permutations(range(1, n)):
        if perm[0] > perm[-1]:
            continue
        t = OrientedTour((0,) + perm, inst)
        tours.append((tour_length(t), t.order))
    opt = min(L for L, _ in tours)
    slack = opt * TIE_RTOL
    order = min(o for L, o in tours if L <= opt + slack)
    return OrientedTour(order, inst)


def index_tour(inst: Instance) -> OrientedTour:
    return OrientedTour(tuple(range(inst.n)), inst)


def random_tour(inst: Instance, seed: int) -> OrientedTour:
    rng = random.Random(f"start:{seed}:{inst.n}")
    order = list(range(inst.n))
    rng.shuffle(order)
    return OrientedTour(tuple(order), inst)


def generate_instance(seed: int, n: int, family: Family | str = Family.UNIFORM_BOX, scale: int = 100) -> Instance:
    family = Family(family)
    if n < 3:
        raise ValueError("n must be at least 3")
    if scale < n:
        raise ValueError("scale must be at least n")
    rng = random.Random(f"{family.value}:{seed}:{n}:{scale}")
    pts: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()

    def add(p):
        if p not in seen:
            seen.add(p)
            pts.append(p)

    if family is Family.UNIFORM_BOX:
        while len(pts) < n:
            add((rng.randint(0, scale), rng.randint(0, scale)))
    elif family is Family.GRID:
        side = math.ceil(math.sqrt(n))
        step = scale // side
        jitter = max(step // 4, 0)
        cells = rng.sample(range(side * side), n)
        for cell in cells:
            gx, gy = divmod(cell, side)
            cx = gx * step + step // 2
            cy = gy * step + step // 2
            add((cx + rng.randint(-jitter, jitter), cy + rng.randint(-jitter, jitter)))
    else:
        dx, dy = rng.choice([(1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (1, -1)])
        reach = scale // max(abs(dx), abs(dy))
        ts = rng.sample(range(reach + 1), n)
        x0 = 0
        y0 = scale if dy < 0 else 0
        for t in ts:
            add((x0 + dx * t, y0 + dy * t))
    return Instance(tuple(pts), id=f"{family.value}-n{n}-s{seed}")
