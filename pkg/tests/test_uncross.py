import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoopt_lab.fixtures import CROSSINGS_12, crossing12, free42
from twoopt_lab.geometry import Location, Point, on_segment, point_in_polygon
from twoopt_lab.tsp_core import Instance, OrientedTour, exact_optimum, generate_instance, random_tour, tour_length
from twoopt_lab.two_opt import is_two_optimal
from pinned import CROSSING_PAIRS, pinned_pair, seeded_pair
from twoopt_lab.uncross import (
    CoincidentPoint,
    CollinearOverlap,
    SubdividedPair,
    enumerate_crossings,
    is_crossing_free,
    subdivide_pair,
)


def pair_for(seed, n):
    return seeded_pair(seed, n)


def same_point_set(old: OrientedTour, new: OrientedTour) -> bool:
    """Every new vertex lies on the old polygon and every old edge is covered in order."""
    pts_new = new.instance.points
    segs = old.segments()
    return all(any(on_segment(pts_new[v], s) for s in segs) for v in new.order)


class TestEnumerate:
    def test_fixture_crossings(self):
        f = crossing12()
        report = enumerate_crossings(f.t, f.s)
        assert report.count == 3
        assert set(report.points()) == set(CROSSINGS_12)
        assert len(set(report.points())) == report.count

    def test_identical_tours(self):
        f = crossing12()
        assert enumerate_crossings(f.t, f.t).count == 0

    def test_reversed_hull(self):
        sq = Instance(((0, 0), (1, 0), (1, 1), (0, 1)))
        t = OrientedTour((0, 1, 2, 3), sq)
        assert enumerate_crossings(t, t.reversed()).count == 0

    def test_crossing_free_flags(self):
        assert not is_crossing_free(crossing12().t, crossing12().s)
        assert is_crossing_free(free42().t, free42().s)


class TestSubdivide:
    def test_fixture(self):
        f = crossing12()
        pair = subdivide_pair(f.instance, f.t, f.s)
        assert pair.n_prime == 15
        assert is_crossing_free(pair.t_prime, pair.s_prime)
        assert tour_length(pair.t_prime) == pytest.approx(tour_length(f.t), rel=1e-9)
        assert tour_length(pair.s_prime) == pytest.approx(tour_length(f.s), rel=1e-9)
        assert set(pair.v_prime.points[12:]) == set(CROSSINGS_12)
        assert pair.v_prime.points[:12] == f.instance.points
        assert same_point_set(f.t, pair.t_prime) and same_point_set(f.s, pair.s_prime)

    def test_subdivided_local_tour_still_two_optimal(self):
        f = crossing12()
        pair = subdivide_pair(f.instance, f.t, f.s)
        assert is_two_optimal(pair.s_prime)[0]

    def test_crossing_free_input_is_unchanged(self):
        f = free42()
        pair = subdivide_pair(f.instance, f.t, f.s)
        assert pair.v_prime == f.instance
        assert pair.t_prime.order == f.t.order and pair.s_prime.order == f.s.order

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 100_000), st.integers(5, 10))
    def test_random_pairs_keep_lengths(self, seed, n):
        # S need not be simple here, which gives many crossings per edge
        inst = generate_instance(seed, n)
        t = exact_optimum(inst)
        s = random_tour(inst, seed)
        try:
            pair = subdivide_pair(inst, t, s)
        except (CoincidentPoint, CollinearOverlap):
            return
        assert is_crossing_free(pair.t_prime, pair.s_prime)
        # a mis-ordered insertion would zig-zag along the edge and lengthen the tour
        assert tour_length(pair.t_prime) == pytest.approx(tour_length(t), rel=1e-9)
        assert tour_length(pair.s_prime) == pytest.approx(tour_length(s), rel=1e-9)

    def test_several_crossings_on_one_edge(self):
        # T has a notch at the top; the S edge H->I cuts through both sides of it
        pts = ((0, 0), (10, 0), (10, 6), (7, 6), (5, 2), (3, 6), (0, 6), (-1, 4), (11, 4))
        inst = Instance(pts)
        t = OrientedTour((0, 1, 8, 2, 3, 4, 5, 6, 7), inst)
        s = OrientedTour((7, 8, 2, 3, 4, 5, 6, 0, 1), inst)
        pair = subdivide_pair(inst, t, s)
        on_hi = [c.point for c in pair.report.crossings if c.s_edge == (7, 8)]
        assert sorted(on_hi) == [Point.of(4, 4), Point.of(6, 4)]
        # the new vertices follow the S edge from its tail at x = -1
        order = pair.s_prime.order
        i = order.index(7)
        assert [pair.v_prime.points[v] for v in order[i + 1 : i + 3]] == [Point.of(4, 4), Point.of(6, 4)]
        assert is_crossing_free(pair.t_prime, pair.s_prime)
        assert tour_length(pair.s_prime) == pytest.approx(tour_length(s), rel=1e-12)
        assert tour_length(pair.t_prime) == pytest.approx(tour_length(t), rel=1e-12)

    def test_crossings_meeting_at_one_point_raise(self):
        # two T edges cross each other on an S edge, so two crossings coincide at (2, 2)
        inst = Instance(((0, 2), (4, 2), (1, 0), (3, 4), (3, 0), (1, 4)))
        t = OrientedTour((0, 2, 3, 1, 4, 5), inst)
        s = OrientedTour((0, 1, 3, 5, 4, 2), inst)
        with pytest.raises(CoincidentPoint):
            subdivide_pair(inst, t, s)

    def test_json_round_trip(self):
        f = crossing12()
        pair = subdivide_pair(f.instance, f.t, f.s)
        back = SubdividedPair.from_json(pair.to_json())
        assert back.v_prime == pair.v_prime
        assert back.t_prime.order == pair.t_prime.order
        assert back.s_prime.order == pair.s_prime.order
        assert back.report.count == 0

    def test_rejects_foreign_tours(self):
        f = crossing12()
        with pytest.raises(ValueError):
            subdivide_pair(free42().instance, f.t, f.s)


class TestPreservation:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 100_000), st.integers(8, 12))
    def test_lengths_two_optimality_and_count_bound(self, seed, n):
        inst, t, s = pair_for(seed, n)
        pair = subdivide_pair(inst, t, s)
        assert pair.report.count <= n * n
        assert pair.n_prime == n + pair.report.count
        assert is_crossing_free(pair.t_prime, pair.s_prime)
        assert tour_length(pair.t_prime) == pytest.approx(tour_length(t), rel=1e-9)
        assert tour_length(pair.s_prime) == pytest.approx(tour_length(s), rel=1e-9)
        assert is_two_optimal(pair.s_prime)[0]
        for v in range(n, pair.n_prime):
            p = pair.v_prime.points[v]
            assert point_in_polygon(p, t.polygon()) is Location.BOUNDARY
            assert point_in_polygon(p, s.polygon()) is Location.BOUNDARY

    @pytest.mark.parametrize("entry", CROSSING_PAIRS, ids=lambda e: f"{e[0]}-{e[2]}")
    def test_pinned_crossing_pairs(self, entry):
        inst, t, s = pinned_pair(entry)
        pair = subdivide_pair(inst, t, s)
        assert pair.report.count == entry[-1]
        assert is_crossing_free(pair.t_prime, pair.s_prime)
        assert is_two_optimal(pair.s_prime)[0]
        if pair.n_prime <= 12:
            assert tour_length(exact_optimum(pair.v_prime)) == pytest.approx(tour_length(pair.t_prime), rel=1e-9)
