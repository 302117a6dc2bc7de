"""Worked instances with known tour pairs.

Point labels below are 1-based (``P1`` is index 0) so that the tour lists
read the same as the labelled drawings they were transcribed from.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .geometry import Point
from .tsp_core import Instance, OrientedTour


@dataclass(frozen=True)
class Fixture:
    name: str
    instance: Instance
    t: OrientedTour
    s: OrientedTour
    anchor1: Optional[tuple[int, int]] = None
    anchor2: Optional[tuple[int, int]] = None


def _tour(inst: Instance, labels: list[int]) -> OrientedTour:
    return OrientedTour(tuple(p - 1 for p in labels), inst)


CROSSINGS_12 = (
    Point(Fraction(11), Fraction(7)),
    Point(Fraction(59, 6), Fraction(439, 36)),
    Point(Fraction(70, 9), Fraction(49, 9)),
)

_POINTS_12 = [
    (11, 12), (9, 3), (0, 7), (11, 4), (5, 13), (3, 15),
    (4, 12), (11, 2), (6, 9), (10, 5), (12, 14), (14, 13),
]
_T_12 = [1, 11, 12, 10, 4, 8, 2, 9, 3, 7, 6, 5]
_S_12 = [1, 4, 8, 2, 10, 3, 7, 6, 5, 9, 11, 12]

_POINTS_42 = [
    (32, 5), (18, 18), (27, 1), (15, 1), (23, 13), (40, 13), (34, 1),
    (15, 11), (11, 3), (32, 11), (35, 19), (5, 10), (21, 3), (29, 19),
    (25, 7), (40, 7), (36, 15), (10, 16), (1, 20), (32, 16), (9, 7),
    (28, 14), (36, 6), (2, 5), (7, 1), (40, 1), (1, 14), (9, 20),
    (20, 10), (17, 6), (6, 15), (14, 15), (22, 20), (29, 8), (1, 9),
    (40, 20), (9, 12), (14, 20), (37, 10), (1, 1), (19, 14), (5, 19),
]
_T_42 = [
    26, 16, 23, 39, 6, 17, 36, 11, 20, 10, 22, 14, 33, 2, 41, 5, 29, 8, 32, 38, 28,
    42, 19, 27, 31, 18, 37, 21, 12, 35, 24, 40, 25, 9, 4, 30, 13, 3, 15, 34, 1, 7,
]
_S_42 = [
    26, 23, 16, 6, 36, 11, 14, 20, 17, 39, 10, 1, 34, 22, 5, 15, 29, 30, 8, 32, 41,
    33, 2, 38, 18, 28, 42, 19, 31, 37, 12, 27, 35, 24, 40, 25, 21, 9, 4, 13, 3, 7,
]

# 2-optimal tour edges by class against the polygon of the optimal tour
EDGES_42_INTERIOR = [
    (26, 23), (20, 17), (17, 39), (39, 10), (10, 1), (34, 22), (22, 5), (5, 15), (15, 29),
    (29, 30), (30, 8), (41, 33), (38, 18), (18, 28), (19, 31), (25, 21), (21, 9),
]
EDGES_42_EXTERIOR = [
    (16, 6), (6, 36), (11, 14), (14, 20), (32, 41), (2, 38),
    (31, 37), (37, 12), (12, 27), (27, 35), (4, 13), (3, 7),
]
EDGES_42_ON_T = [
    (23, 16), (36, 11), (1, 34), (8, 32), (33, 2), (28, 42), (42, 19),
    (35, 24), (24, 40), (40, 25), (9, 4), (13, 3), (7, 26),
]
# edges oriented along the long 26..23 path of the optimal tour
EDGES_42_COMPATIBLE = [
    (26, 23), (20, 17), (17, 39), (34, 22), (15, 29), (30, 8), (41, 33), (18, 28), (25, 21),
]
ANCHOR_42 = (26, 23)

# dual vertex positions as drawn (3 decimals), D1..D10
DUAL_POSITIONS_42 = [
    (38.667, 4.667), (33.600, 8.700), (37.667, 12.667), (35.750, 17.500), (25.375, 13.125),
    (19.667, 17.333), (20.833, 6.333), (12.300, 11.100), (5.333, 17.333), (4.167, 5.500),
]
# parent -> child, 1-based dual vertex numbers
DUAL_EDGES_42 = [(1, 2), (2, 3), (2, 4), (2, 5), (5, 6), (5, 7), (7, 8), (8, 9), (8, 10)]
# chord crossed on the way into each dual vertex; D1 is the root
DUAL_CHORDS_42 = [
    None, (26, 23), (17, 39), (20, 17), (34, 22), (41, 33), (15, 29), (30, 8), (18, 28), (25, 21),
]


def labels_to_edges(pairs) -> list[tuple[int, int]]:
    return [(a - 1, b - 1) for a, b in pairs]


def crossing12() -> Fixture:
    inst = Instance(tuple(_POINTS_12), id="crossing-12")
    return Fixture("crossing12", inst, _tour(inst, _T_12), _tour(inst, _S_12))


def free42() -> Fixture:
    inst = Instance(tuple(_POINTS_42), id="crossing-free-42")
    a = (ANCHOR_42[0] - 1, ANCHOR_42[1] - 1)
    return Fixture("free42", inst, _tour(inst, _T_42), _tour(inst, _S_42), anchor1=a)


FIXTURES = {"crossing12": crossing12, "free42": free42}


def load_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
