"""One test per acceptance criterion, each at its stated tolerance and time limit."""
import math
import random
import time
from fractions import Fraction

import pytest

from twoopt_lab.dual_arbor import (
    bound_certificate,
    build_arborescence,
    build_regions,
    check_combined_triangle,
    check_combined_two_opt,
    check_e_prime,
    check_e_r,
    check_max_bound,
    check_weight_bound,
    random_arborescence,
    satisfies_conditions,
)
from twoopt_lab.fixtures import EDGES_42_COMPATIBLE, crossing12, free42, labels_to_edges
from twoopt_lab.geometry import Point
from twoopt_lab.harness import ExperimentConfig, run_pipeline, run_sweep
from twoopt_lab.partition import classify_edges, split_compatible, anchor_path
from twoopt_lab.tsp_core import brute_force_optimum, exact_optimum, generate_instance, random_tour, tour_length
from twoopt_lab.two_opt import is_simple, is_two_optimal, run_two_opt
from twoopt_lab.uncross import enumerate_crossings, is_crossing_free, subdivide_pair

from pinned import CROSSING_PAIRS, pinned_pair, seeded_pair

REL = 1e-9


def close(a, b, rel=REL):
    return abs(a - b) <= rel * max(abs(a), abs(b))


@pytest.mark.acceptance("AC1")
def test_crossing_fixture(record_property):
    """Crossings and subdivision on the 12-point pair"""
    began = time.perf_counter()
    f = crossing12()
    rep = enumerate_crossings(f.t, f.s)
    want = {Point(Fraction(11), Fraction(7)), Point(Fraction(59, 6), Fraction(439, 36)),
            Point(Fraction(70, 9), Fraction(49, 9))}
    assert rep.count == 3 and set(rep.points()) == want
    pair = subdivide_pair(f.instance, f.t, f.s)
    assert pair.n_prime == 15
    assert is_crossing_free(pair.t_prime, pair.s_prime)
    assert close(tour_length(pair.t_prime), tour_length(f.t))
    assert close(tour_length(pair.s_prime), tour_length(f.s))
    elapsed = time.perf_counter() - began
    record_property("seconds", f"{elapsed:.3f}")
    assert elapsed < 1


@pytest.mark.acceptance("AC2")
def test_crossing_free_fixture(record_property):
    """Edge classes, compatible split and dual arborescence on the 42-point pair"""
    began = time.perf_counter()
    f = free42()
    inside, outside, on = classify_edges(f.t, f.s)
    assert (len(inside), len(outside), len(on)) == (17, 12, 13)
    pts = f.instance.points
    assert (pts[f.anchor1[0]], pts[f.anchor1[1]]) == (Point.of(40, 1), Point.of(36, 6))
    path = anchor_path(f.t, inside, f.anchor1)
    s1p, _ = split_compatible(inside, f.anchor1, path)
    assert len(s1p) == 9 and set(s1p) == set(labels_to_edges(EDGES_42_COMPATIBLE))
    a = build_arborescence(build_regions(f.t, s1p, path, f.anchor1))
    assert len(a.vertices) == 10 and len(a.edges) == 9 and a.out_degree(a.root) == 1
    assert check_combined_triangle(a).holds and check_combined_two_opt(a).holds
    elapsed = time.perf_counter() - began
    record_property("seconds", f"{elapsed:.3f}")
    assert elapsed < 1


@pytest.mark.acceptance("AC3")
def test_two_opt_outputs(record_property):
    """2-Opt outputs are 2-optimal and simple; collinear outputs are twice the span"""
    began = time.perf_counter()
    for seed in range(200):
        n = 8 + seed % 7
        inst = generate_instance(seed, n)
        s, stats = run_two_opt(inst, random_tour(inst, seed))
        assert stats.converged
        assert is_two_optimal(s)[0] and is_simple(s), seed
    for seed in range(50):
        inst = generate_instance(seed, 8 + seed % 7, "collinear")
        s, _ = run_two_opt(inst, random_tour(inst, seed))
        pts = inst.points
        lo = min(pts, key=lambda p: (p.x, p.y))
        hi = max(pts, key=lambda p: (p.x, p.y))
        span = math.hypot(float(hi.x - lo.x), float(hi.y - lo.y))
        assert close(tour_length(s), 2 * span), seed
    elapsed = time.perf_counter() - began
    record_property("seconds", f"{elapsed:.2f}")
    assert elapsed < 30


def _check_subdivided(inst, t, s):
    pair = subdivide_pair(inst, t, s)
    assert is_crossing_free(pair.t_prime, pair.s_prime)
    assert is_two_optimal(pair.s_prime)[0]
    if pair.n_prime <= 12:
        assert close(tour_length(exact_optimum(pair.v_prime)), tour_length(pair.t_prime))
        return pair, True
    return pair, False


@pytest.mark.acceptance("AC4")
def test_subdivision(record_property):
    """Subdivided pairs are crossing-free, 2-optimal and optimal where checkable"""
    began = time.perf_counter()
    checked = crossed = 0
    for seed in range(100):
        pair, opt = _check_subdivided(*seeded_pair(seed, 8 + seed % 7))
        checked += opt
        crossed += pair.report.count > 0
    for entry in CROSSING_PAIRS:
        pair, opt = _check_subdivided(*pinned_pair(entry))
        assert pair.report.count == entry[-1] and opt
        checked += opt
        crossed += 1
    elapsed = time.perf_counter() - began
    record_property("pairs", 100 + len(CROSSING_PAIRS))
    record_property("with_crossings", crossed)
    record_property("optimality_checked", checked)
    record_property("seconds", f"{elapsed:.1f}")
    assert elapsed < 300


@pytest.mark.acceptance("AC5")
def test_exact_solvers_agree(record_property):
    """Held-Karp and brute force give identical optimal lengths"""
    began = time.perf_counter()
    for seed in range(50):
        inst = generate_instance(seed, 4 + seed % 6)
        assert tour_length(exact_optimum(inst)) == tour_length(brute_force_optimum(inst)), seed
    elapsed = time.perf_counter() - began
    record_property("seconds", f"{elapsed:.2f}")
    assert elapsed < 60


@pytest.mark.acceptance("AC6")
def test_synthetic_lemma_chain(record_property):
    """Generated arborescences pass the weight, max, E' and E_r bounds with a full cover"""
    began = time.perf_counter()
    accepted = 0
    max_k = 0.0
    for seed in range(1000):
        a = random_arborescence(random.Random(seed))
        if not satisfies_conditions(a):
            continue
        accepted += 1
        k = a.total_c() / a.total_w()
        max_k = max(max_k, k)
        assert check_weight_bound(a).holds and check_max_bound(a).holds
        cert = bound_certificate(a)
        rs = list(cert.radii) + [e.c / 2 for e in a.edges]
        assert check_e_prime(a, k).holds
        assert check_e_r(a, k, rs).holds
    elapsed = time.perf_counter() - began
    record_property("accepted", accepted)
    record_property("max_k", f"{max_k:.3f}")
    record_property("seconds", f"{elapsed:.2f}")
    assert accepted == 1000
    assert elapsed < 60


@pytest.mark.acceptance("AC7")
def test_five_set_assembly(record_property):
    """Five-set lengths sum to c(S) and c(S3) stays below c(T)"""
    cfgs = [ExperimentConfig(fixture="crossing12", mode="assumed-opt"), ExperimentConfig(fixture="free42", mode="assumed-opt")]
    cfgs += [ExperimentConfig(seed=seed, n=8 + seed % 7) for seed in range(1, 101)]
    runs = 0
    for cfg in cfgs:
        rep = run_pipeline(cfg)
        if rep.degenerate:
            continue
        total = math.fsum(rep.set_lengths.values())
        assert close(total, rep.c_s)
        assert rep.set_lengths["S3"] <= rep.c_t + REL
        assert rep.five_set_sum_ok and rep.s3_bound_ok
        runs += 1
    record_property("runs", runs)


@pytest.mark.acceptance("AC8")
def test_ratio_sweep_report(tmp_path, record_property):
    """Measured 2-Opt ratios at n <= 14, reported and not asserted"""
    worst = {}
    lines = 0
    for n in range(8, 15):
        res = run_sweep(ExperimentConfig(n=n), range(1, 21), jobs=4)
        assert res.all_pass and res.simplicity_violations == 0
        assert min(r.ratio for r in res.reports) >= 1 - REL
        (tmp_path / f"sweep_n{n}.csv").write_text(res.to_csv())
        worst[n] = res.max_ratio
        lines += len(res.reports)
    record_property("runs", lines)
    record_property("max_ratio", f"{max(worst.values()):.4f}")
    record_property("by_n", " ".join(f"{n}:{r:.3f}" for n, r in worst.items()))
