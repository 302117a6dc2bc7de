"""Seeded end-to-end runs: instance, optimum, 2-Opt, uncrossing, partition, arborescences, checks."""
from __future__ import annotations

import csv
import enum
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import dual_arbor
from .fixtures import load_fixture
from .partition import EdgePartition, partition_all
from .tsp_core import (
    HELD_KARP_LIMIT,
    Family,
    Instance,
    OrientedTour,
    exact_optimum,
    generate_instance,
    load_instance,
    random_tour,
    tour_length,
)
from .two_opt import Policy, is_simple, is_two_optimal, run_two_opt
from .uncross import SubdividedPair, subdivide_pair

REL_TOL = 1e-9
CSV_VERSION = "# twoopt-lab sweep v1"
CSV_COLUMNS = [
    "seed", "instance", "n", "n_prime", "c_t", "c_s", "ratio", "crossings",
    "s1_prime", "s1_dprime", "s2_prime", "s2_dprime", "s3",
    "arborescences", "max_k", "simple", "all_pass",
]


class Mode(str, enum.Enum):
    EXACT = "exact-opt"
    ASSUMED = "assumed-opt"


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class ExperimentConfig:
    seed: int = 0
    n: int = 10
    family: Family = Family.UNIFORM_BOX
    policy: Policy = Policy.FIRST
    starts: int = 1
    mode: Mode = Mode.EXACT
    output_dir: Optional[Path] = None
    scale: int = 100
    fixture: Optional[str] = None
    instance_path: Optional[Path] = None
    tour_path: Optional[Path] = None
    s_tour_path: Optional[Path] = None
    tolerance: float = dual_arbor.DEFAULT_TOLERANCE
    max_iters: int = 100_000
    reverse_s: bool = False

    def __post_init__(self):
        self.family = Family(self.family)
        self.policy = Policy(self.policy)
        self.mode = Mode(self.mode)
        if self.starts < 1:
            raise ValueError("starts must be at least 1")
        if self.mode is Mode.EXACT:
            if self.fixture is None and self.instance_path is None and self.n > HELD_KARP_LIMIT:
                raise ValueError(f"exact-opt needs n <= {HELD_KARP_LIMIT}")
        elif self.fixture is None and self.tour_path is None:
            raise ValueError("assumed-opt needs a tour file or a fixture")


@dataclass
class ArborescenceSummary:
    name: str
    vertices: int
    edges: int
    root_out_degree: int
    k: float
    regime: str
    checks: dict[str, dict]
    certificate: dict

    @property
    def passed(self) -> bool:
        return all(c["holds"] for c in self.checks.values())


@dataclass
class PipelineReport:
    instance_id: str
    mode: str
    n: int
    n_prime: int
    c_t: float
    c_s: float
    ratio: float
    degenerate: bool
    s_two_optimal: bool
    s_simple: bool
    crossings: int = 0
    partition_sizes: dict[str, int] = field(default_factory=dict)
    set_lengths: dict[str, float] = field(default_factory=dict)
    five_set_sum_ok: Optional[bool] = None
    s3_bound_ok: Optional[bool] = None
    arborescences: list[ArborescenceSummary] = field(default_factory=list)
    runtime: float = field(default=0.0, compare=False)

    @property
    def all_pass(self) -> bool:
        ok = self.s_two_optimal and all(a.passed for a in self.arborescences)
        if self.mode == Mode.EXACT.value:
            ok = ok and self.ratio >= 1 - REL_TOL
        if not self.degenerate:
            ok = ok and bool(self.five_set_sum_ok) and bool(self.s3_bound_ok)
        return ok

    def to_json(self) -> dict:
        # runtime is left out so that reports are byte-identical across runs
        out = asdict(self)
        out.pop("runtime")
        out["all_pass"] = self.all_pass
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, allow_nan=False) + "\n"


@dataclass
class PipelineContext:
    """Intermediate artifacts kept for rendering."""

    instance: Instance
    t: OrientedTour
    s: OrientedTour
    pair: Optional[SubdividedPair] = None
    partition: Optional[EdgePartition] = None
    arborescences: list = field(default_factory=list)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(name, exc) from exc


def read_tour(path, inst: Instance) -> OrientedTour:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("order", data.get("tour"))
    return OrientedTour(tuple(data), inst)


def _load_inputs(cfg: ExperimentConfig):
    """Instance, optional given T, optional given S, optional anchors."""
    anchors = (None, None)
    if cfg.fixture:
        fx = load_fixture(cfg.fixture)
        t_given = fx.t if cfg.mode is Mode.ASSUMED else None
        return fx.instance, t_given, fx.s, (fx.anchor1, fx.anchor2)
    if cfg.instance_path:
        inst = load_instance(cfg.instance_path)
    else:
        inst = generate_instance(cfg.seed, cfg.n, cfg.family, cfg.scale)
    t_given = read_tour(cfg.tour_path, inst) if cfg.tour_path else None
    s_given = read_tour(cfg.s_tour_path, inst) if cfg.s_tour_path else None
    return inst, t_given, s_given, anchors


def _two_opt_worst(inst: Instance, cfg: ExperimentConfig) -> OrientedTour:
    worst = None
    for i in range(cfg.starts):
        start = None if i == 0 else random_tour(inst, cfg.seed * 1000 + i)
        s, _ = run_two_opt(inst, start, cfg.policy, max_iters=cfg.max_iters, strict=True)
        if worst is None or tour_length(s) > tour_length(worst):
            worst = s
    return worst


def _summarize(sa, tol: float) -> ArborescenceSummary:
    a = sa.arborescence
    reports = dual_arbor.lemma_suite(a, tol)
    checks = {
        r.condition: {
            "holds": r.holds,
            "worst_slack": r.worst_slack if math.isfinite(r.worst_slack) else None,
            "checked": r.checked,
        }
        for r in reports
    }
    cert = dual_arbor.bound_certificate(a, tol)
    return ArborescenceSummary(
        sa.name, len(a.edges) + 1, len(a.edges), a.out_degree(a.root), cert.k, cert.regime, checks, cert.to_json()
    )


def run_pipeline_full(cfg: ExperimentConfig) -> tuple[PipelineReport, PipelineContext]:
    began = time.perf_counter()
    inst, t_given, s_given, (anchor1, anchor2) = _stage("instance", _load_inputs, cfg)
    if cfg.mode is Mode.EXACT:
        t = _stage("optimum", exact_optimum, inst)
    else:
        t = t_given
        if not _stage("optimum", is_simple, t):
            raise PipelineError("optimum", ValueError("assumed optimal tour is not simple"))
    s = s_given if s_given is not None else _stage("two-opt", _two_opt_worst, inst, cfg)
    c_t, c_s = tour_length(t), tour_length(s)
    ctx = PipelineContext(inst, t, s)
    report = PipelineReport(
        instance_id=inst.id,
        mode=cfg.mode.value,
        n=inst.n,
        n_prime=inst.n,
        c_t=c_t,
        c_s=c_s,
        ratio=c_s / c_t,
        degenerate=inst.is_degenerate(),
        s_two_optimal=is_two_optimal(s)[0],
        s_simple=is_simple(s),
    )
    if report.degenerate:
        # a collinear optimum is not a simple polygon; only the ratio is meaningful
        report.runtime = time.perf_counter() - began
        return report, ctx

    pair = _stage("uncross", subdivide_pair, inst, t, s)
    ctx.pair = pair
    report.crossings = pair.report.count
    report.n_prime = pair.n_prime
    part = _stage(
        "partition", partition_all, pair.t_prime, pair.s_prime, anchor1, anchor2, reverse_s=cfg.reverse_s
    )
    ctx.partition = part
    report.partition_sizes = dict(zip(EdgePartition.NAMES, part.sizes()))
    report.set_lengths = part.lengths(pair.v_prime)
    total = math.fsum(report.set_lengths.values())
    report.five_set_sum_ok = abs(total - c_s) <= REL_TOL * max(c_s, total)
    report.s3_bound_ok = report.set_lengths["S3"] <= c_t + REL_TOL
    arbs = _stage("arborescence", dual_arbor.pipeline_arborescences, pair.t_prime, part)
    ctx.arborescences = arbs
    report.arborescences = [_stage("checks", _summarize, sa, cfg.tolerance) for sa in arbs]
    report.runtime = time.perf_counter() - began
    return report, ctx


def run_pipeline(cfg: ExperimentConfig) -> PipelineReport:
    return run_pipeline_full(cfg)[0]


def report_row(seed: int, report: PipelineReport) -> list[str]:
    sizes = [report.partition_sizes.get(k, "") for k in EdgePartition.NAMES]
    max_k = max((a.k for a in report.arborescences), default=0.0)
    return [
        str(seed), report.instance_id, str(report.n), str(report.n_prime),
        f"{report.c_t:.12g}", f"{report.c_s:.12g}", f"{report.ratio:.12g}", str(report.crossings),
        *map(str, sizes), str(len(report.arborescences)), f"{max_k:.12g}",
        str(int(report.s_simple)), str(int(report.all_pass)),
    ]


def parse_seed_range(text: str) -> list[int]:
    """'1..100' (inclusive), '3', or '1,4,9'."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo_i, hi_i = int(lo), int(hi)
        if hi_i < lo_i:
            raise ValueError(f"empty seed range {text!r}")
        return list(range(lo_i, hi_i + 1))
    return [int(x) for x in text.split(",") if x.strip()]


def _sweep_one(cfg: ExperimentConfig) -> PipelineReport:
    return run_pipeline(cfg)


@dataclass
class SweepResult:
    seeds: list[int]
    reports: list[PipelineReport]

    @property
    def max_ratio(self) -> float:
        return max(r.ratio for r in self.reports)

    @property
    def simplicity_violations(self) -> int:
        return sum(1 for r in self.reports if not r.degenerate and not r.s_simple)

    @property
    def all_pass(self) -> bool:
        return all(r.all_pass for r in self.reports)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_VERSION + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for seed, rep in zip(self.seeds, self.reports):
            w.writerow(report_row(seed, rep))
        return buf.getvalue()


def run_sweep(base: ExperimentConfig, seeds: Sequence[int], jobs: int = 1) -> SweepResult:
    """Run one pipeline per seed; results stay in seed order whatever ``jobs`` is."""
    seeds = sorted(seeds)
    cfgs = [ExperimentConfig(**{**asdict(base), "seed": s}) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_sweep_one, cfgs))
    else:
        reports = [_sweep_one(c) for c in cfgs]
    return SweepResult(seeds, reports)
