"""The 2-Opt heuristic: move search, move application, and local-optimality checks."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .geometry import Segment, segments_intersect, touches_interior
from .tsp_core import Instance, OrientedTour, tour_length

EPS_MOVE = 1e-12


class Policy(str, enum.Enum):
    FIRST = "first-improvement"
    BEST = "best-improvement"


class InvalidMove(ValueError):
    pass


class IterationBudgetExceeded(RuntimeError):
    def __init__(self, tour: OrientedTour, stats: "RunStats"):
        super().__init__(f"2-Opt stopped after {stats.iterations} iterations without converging")
        self.tour = tour
        self.stats = stats


@dataclass(frozen=True)
class TwoMove:
    """Replace directed edges (a,b),(x,y) by (a,x),(b,y)."""

    e1: tuple[int, int]
    e2: tuple[int, int]
    delta: float


@dataclass
class RunStats:
    iterations: int
    start_length: float
    final_length: float
    policy: Policy
    converged: bool = True
    history: list[float] = field(default_factory=list)


def _pairs(n: int):
    # non-adjacent position pairs (i, j), i < j, in lexicographic order
    for i in range(n - 2):
        for j in range(i + 2, n if i > 0 else n - 1):
            yield i, j


def _scan(order, d, policy: Policy, eps: float):
    n = len(order)
    best = None
    for i, j in _pairs(n):
        a, b = order[i], order[i + 1]
        x, y = order[j], order[(j + 1) % n]
        delta = (d[a][x] + d[b][y]) - (d[a][b] + d[x][y])
        if delta < -eps:
            if policy is Policy.FIRST:
                return i, j, delta
            if best is None or delta < best[2]:
                best = (i, j, delta)
    return best


def find_improving_move(t: OrientedTour, policy: Policy | str = Policy.FIRST, eps: float = EPS_MOVE) -> Optional[TwoMove]:
    found = _scan(t.order, t.instance.dist, Policy(policy), eps)
    if found is None:
        return None
    i, j, delta = found
    o, n = t.order, t.n
    return TwoMove((o[i], o[i + 1]), (o[j], o[(j + 1) % n]), delta)


def apply_move(t: OrientedTour, m: TwoMove) -> OrientedTour:
    """Exchange the move's edges and reverse the b..x segment."""
    pos = t.positions()
    n = t.n
    (a, b), (x, y) = m.e1, m.e2
    i, j = pos[a], pos[x]
    if t.order[(i + 1) % n] != b or t.order[(j + 1) % n] != y:
        raise InvalidMove(f"edges {m.e1}, {m.e2} are not directed edges of the tour")
    if len({a, b, x, y}) < 4:
        raise InvalidMove("edges of a 2-move must be distinct and non-adjacent")
    # rotate so that a sits at position 0, then b..x is a contiguous block
    o = t.order[i:] + t.order[:i]
    k = (j - i) % n
    new = o[:1] + tuple(reversed(o[1 : k + 1])) + o[k + 1 :]
    return OrientedTour(new, t.instance)


def _reverse_shorter(order: list[int], i: int, j: int) -> None:
    n = len(order)
    inner = j - i
    if inner <= n - inner:
        order[i + 1 : j + 1] = order[i + 1 : j + 1][::-1]
        return
    # reversing the complementary block gives the same cycle, oppositely oriented
    span = n - inner
    for s in range(span // 2):
        p, q = (j + 1 + s) % n, (i - s) % n
        order[p], order[q] = order[q], order[p]


def run_two_opt(
    inst: Instance,
    start: Optional[OrientedTour] = None,
    policy: Policy | str = Policy.FIRST,
    max_iters: int = 100_000,
    eps: float = EPS_MOVE,
    record_history: bool = False,
    strict: bool = False,
) -> tuple[OrientedTour, RunStats]:
    policy = Policy(policy)
    if start is None:
        start = OrientedTour(tuple(range(inst.n)), inst)
    if start.instance is not inst and start.instance != inst:
        raise ValueError("start tour belongs to a different instance")
    d = inst.dist
    order = list(start.order)
    start_len = tour_length(start)
    history = [start_len] if record_history else []
    iters = 0
    converged = False
    while iters < max_iters:
        found = _scan(order, d, policy, eps)
        if found is None:
            converged = True
            break
        i, j, _ = found
        _reverse_shorter(order, i, j)
        iters += 1
        if record_history:
            history.append(tour_length(OrientedTour(tuple(order), inst)))
    else:
        converged = _scan(order, d, policy, eps) is None
    result = OrientedTour(tuple(order), inst).canonical()
    stats = RunStats(iters, start_len, tour_length(result), policy, converged, history)
    if strict and not converged:
        raise IterationBudgetExceeded(result, stats)
    return result, stats


def is_two_optimal(t: OrientedTour, eps: float = EPS_MOVE):
    """Return (True, None) or (False, (e1, e2)) with the first violating edge pair."""
    m = find_improving_move(t, Policy.FIRST, eps)
    if m is None:
        return True, None
    return False, (m.e1, m.e2)


def is_simple(t: OrientedTour) -> bool:
    segs = t.segments()
    n = len(segs)
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                if touches_interior(segs[i], segs[j]):
                    return False
            elif segments_intersect(segs[i], segs[j]):
                return False
    return True


def simplicity_witness(t: OrientedTour) -> Optional[tuple[Segment, Segment]]:
    segs = t.segments()
    n = len(segs)
    for i in range(n):
        for j in range(i + 1, n):
            if touches_interior(segs[i], segs[j]):
                return segs[i], segs[j]
    return None
