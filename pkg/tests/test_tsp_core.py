import itertools
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoopt_lab.geometry import all_collinear
from twoopt_lab.tsp_core import (
    Family,
    Instance,
    InstanceTooLarge,
    OrientedTour,
    brute_force_optimum,
    canonical_order,
    exact_optimum,
    generate_instance,
    load_instance,
    tour_length,
)

SQUARE = Instance(((0, 0), (1, 0), (1, 1), (0, 1)), id="square")


def tour(inst, order):
    return OrientedTour(tuple(order), inst)


class TestInstance:
    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            Instance(((0, 0), (1, 1), (0, 0)))

    def test_json_round_trip_with_rationals(self, tmp_path):
        inst = Instance((("1/2", 3), (2, "7/3"), (5, 5)), id="mixed")
        data = inst.to_json()
        assert data["points"][0] == [1, 2, 3, 1]
        assert data["points"][2] == [5, 5]
        path = tmp_path / "inst.json"
        path.write_text(json.dumps(data))
        assert load_instance(path) == inst

    def test_tour_must_be_permutation(self):
        with pytest.raises(ValueError):
            tour(SQUARE, (0, 1, 1, 3))


class TestTourLength:
    def test_hull_order(self):
        assert tour_length(tour(SQUARE, (0, 1, 2, 3))) == 4

    def test_crossing_order(self):
        assert tour_length(tour(SQUARE, (0, 2, 1, 3))) == pytest.approx(2 + 2 * math.sqrt(2), rel=1e-12)

    def test_collinear_there_and_back(self):
        inst = Instance(((0, 0), (1, 0), (2, 0), (3, 0)))
        assert tour_length(tour(inst, (0, 1, 2, 3))) == 6

    @given(st.integers(0, 10_000), st.integers(3, 9), st.integers(0, 8), st.booleans())
    def test_invariant_under_rotation_and_reversal(self, seed, n, shift, flip):
        inst = generate_instance(seed, n)
        order = list(range(n))
        order = order[shift % n:] + order[: shift % n]
        if flip:
            order.reverse()
        assert tour_length(tour(inst, order)) == tour_length(tour(inst, range(n)))

    @settings(max_examples=30)
    @given(st.integers(0, 10_000))
    def test_triangle_inequality(self, seed):
        inst = generate_instance(seed, 7)
        d = inst.dist
        for x, y, z in itertools.permutations(range(7), 3):
            assert d[x][y] + d[y][z] >= d[x][z] * (1 - 1e-12)


class TestCanonical:
    def test_rotates_and_orients(self):
        assert canonical_order((3, 1, 0, 2)) == (0, 1, 3, 2)
        assert canonical_order((2, 0, 1, 3)) == (0, 1, 3, 2)


class TestExactOptimum:
    def test_square(self):
        t = exact_optimum(SQUARE)
        assert t.order == (0, 1, 2, 3)
        assert tour_length(t) == 4

    def test_collinear_triple(self):
        inst = Instance(((0, 0), (1, 0), (2, 0)))
        assert tour_length(exact_optimum(inst)) == 4

    def test_limit(self):
        with pytest.raises(InstanceTooLarge):
            exact_optimum(generate_instance(1, 19))
        with pytest.raises(InstanceTooLarge):
            brute_force_optimum(generate_instance(1, 10))

    def test_equilateral_triangle(self):
        inst = Instance(((0, 0), (1, 0), ("1/2", "433/500")))
        assert tour_length(brute_force_optimum(inst)) == pytest.approx(3, rel=1e-3)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 100_000), st.integers(4, 8))
    def test_matches_brute_force(self, seed, n):
        inst = generate_instance(seed, n)
        hk, bf = exact_optimum(inst), brute_force_optimum(inst)
        assert tour_length(hk) == tour_length(bf)
        assert hk.order == bf.order

    def test_random_seven_against_permutation_oracle(self):
        inst = generate_instance(7, 7)
        best = min(tour_length(tour(inst, (0,) + p)) for p in itertools.permutations(range(1, 7)))
        assert tour_length(exact_optimum(inst)) == pytest.approx(best, rel=1e-12)

    def test_output_is_canonical(self):
        t = exact_optimum(generate_instance(3, 11))
        assert t.order == canonical_order(t.order)


class TestGenerate:
    def test_deterministic(self):
        assert generate_instance(1, 5, Family.UNIFORM_BOX, 100) == generate_instance(1, 5, Family.UNIFORM_BOX, 100)

    def test_collinear_family(self):
        assert all_collinear(generate_instance(2, 6, Family.COLLINEAR, 100).points)

    def test_distinct_in_small_box(self):
        inst = generate_instance(3, 12, Family.UNIFORM_BOX, 20)
        assert len(set(inst.points)) == 12
        assert all(0 <= p.x <= 20 and 0 <= p.y <= 20 for p in inst.points)

    @pytest.mark.parametrize("family", list(Family))
    def test_families_give_n_points(self, family):
        for seed in range(5):
            assert generate_instance(seed, 14, family).n == 14

    def test_scale_must_cover_n(self):
        with pytest.raises(ValueError):
            generate_instance(0, 30, scale=10)
