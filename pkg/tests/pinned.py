"""Seeded (optimal, 2-optimal) pairs that are known to cross.

Random 2-Opt outputs at n <= 14 almost never cross the optimal tour, so
these were found by scanning seeds.  Each entry is
(family, scale, instance seed, n, start seed, crossings).
"""
from twoopt_lab.tsp_core import exact_optimum, generate_instance, random_tour
from twoopt_lab.two_opt import run_two_opt

CROSSING_PAIRS = [
    ("uniform-box", 14, 4, 11, 401, 1),
    ("uniform-box", 14, 58, 10, 5802, 1),
    ("uniform-box", 14, 84, 11, 8401, 1),
    ("uniform-box", 14, 113, 10, 11302, 1),
    ("uniform-box", 14, 277, 9, 27700, 1),
    ("grid", 100, 99, 11, 9902, 1),
    ("grid", 100, 319, 11, 31901, 1),
    ("grid", 100, 334, 11, 33400, 1),
    ("grid", 100, 379, 11, 37900, 1),
    ("uniform-box", 20, 93, 10, 9300, 1),
    ("uniform-box", 20, 122, 9, 12200, 1),
    ("uniform-box", 20, 194, 11, 19401, 1),
    ("uniform-box", 20, 336, 8, 33601, 1),
]


def seeded_pair(seed: int, n: int, family="uniform-box", scale=100, start_seed=None):
    inst = generate_instance(seed, n, family, max(scale, n))
    t = exact_optimum(inst)
    s, _ = run_two_opt(inst, random_tour(inst, seed if start_seed is None else start_seed))
    return inst, t, s


def pinned_pair(entry):
    family, scale, seed, n, start, _ = entry
    return seeded_pair(seed, n, family, scale, start)
