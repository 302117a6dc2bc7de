"""Command-line entry point: ``twoopt-lab <subcommand> ...``.

Exit codes: 0 when every check passes, 2 when an inequality check fails, 1 on
usage or I/O errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dual_arbor
from .fixtures import FIXTURES, load_fixture
from .harness import (
    ExperimentConfig,
    Mode,
    PipelineError,
    SweepResult,
    parse_seed_range,
    read_tour,
    run_pipeline_full,
    run_sweep,
)
from .partition import partition_all
from .svg import Stage, render_svg
from .tsp_core import Family, Instance, OrientedTour, exact_optimum, generate_instance, load_instance, random_tour, tour_length
from .two_opt import Policy, is_simple, is_two_optimal, run_two_opt
from .uncross import subdivide_pair

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _tour_json(t: OrientedTour) -> dict:
    return {"order": list(t.order), "length": tour_length(t)}


def _instance(args) -> Instance:
    if getattr(args, "fixture", None):
        return load_fixture(args.fixture).instance
    if not args.instance:
        raise UsageError("--instance or --fixture is required")
    return load_instance(args.instance)


def _pair(args):
    """(instance, T, S, anchor1, anchor2) from a fixture or files."""
    if args.fixture:
        fx = load_fixture(args.fixture)
        return fx.instance, fx.t, fx.s, fx.anchor1, fx.anchor2
    if not (args.instance and args.tour and args.s_tour):
        raise UsageError("need --fixture, or --instance with --tour and --s-tour")
    inst = load_instance(args.instance)
    return inst, read_tour(args.tour, inst), read_tour(args.s_tour, inst), None, None


def cmd_gen(args) -> int:
    inst = generate_instance(args.seed, args.n, args.family, args.scale)
    _emit(inst.to_json(), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    t = exact_optimum(_instance(args))
    _emit(_tour_json(t), args.out)
    return EXIT_OK


def cmd_twoopt(args) -> int:
    inst = _instance(args)
    start = read_tour(args.tour, inst) if args.tour else (random_tour(inst, args.seed) if args.seed else None)
    s, stats = run_two_opt(inst, start, args.policy, max_iters=args.max_iters)
    out = _tour_json(s) | {
        "iterations": stats.iterations,
        "converged": stats.converged,
        "two_optimal": is_two_optimal(s)[0],
        "simple": is_simple(s),
    }
    _emit(out, args.out)
    return EXIT_OK


def cmd_uncross(args) -> int:
    inst, t, s, _, _ = _pair(args)
    pair = subdivide_pair(inst, t, s)
    out = pair.to_json()
    out["crossings"] = [[str(c.point.x), str(c.point.y)] for c in pair.report.crossings]
    _emit(out, args.out)
    return EXIT_OK


def _partition(args):
    inst, t, s, a1, a2 = _pair(args)
    pair = subdivide_pair(inst, t, s)
    return pair, partition_all(pair.t_prime, pair.s_prime, a1, a2)


def cmd_partition(args) -> int:
    _, part = _partition(args)
    _emit(part.to_json(), args.out)
    return EXIT_OK


def cmd_arbor(args) -> int:
    pair, part = _partition(args)
    arbs = dual_arbor.pipeline_arborescences(pair.t_prime, part)
    _emit({sa.name: sa.arborescence.to_json() for sa in arbs}, args.out)
    return EXIT_OK


def _print_reports(label: str, reports) -> bool:
    ok = True
    for r in reports:
        status = "ok" if r.holds else "FAILED"
        print(f"{label} {r.condition}: {status} (worst slack {r.worst_slack:.6g}, {r.checked} checked)")
        ok = ok and r.holds
    return ok


def cmd_verify(args) -> int:
    if args.arbor:
        ok = True
        for name, a in dual_arbor.load_arborescences(args.arbor).items():
            ok = _print_reports(name, dual_arbor.lemma_suite(a, args.tolerance)) and ok
        return EXIT_OK if ok else EXIT_FAILED
    pair, part = _partition(args)
    ok = is_two_optimal(pair.s_prime)[0]
    print(f"2-optimal local tour: {'ok' if ok else 'FAILED'}")
    for sa in dual_arbor.pipeline_arborescences(pair.t_prime, part):
        ok = _print_reports(sa.name, dual_arbor.lemma_suite(sa.arborescence, args.tolerance)) and ok
    return EXIT_OK if ok else EXIT_FAILED


def _config(args) -> ExperimentConfig:
    return ExperimentConfig(
        seed=args.seed,
        n=args.n,
        family=args.family,
        policy=args.policy,
        starts=args.starts,
        mode=args.mode,
        output_dir=Path(args.out) if args.out else None,
        scale=args.scale,
        fixture=args.fixture,
        instance_path=args.instance,
        tour_path=args.tour,
        s_tour_path=args.s_tour,
        tolerance=args.tolerance,
        reverse_s=args.reverse_s,
    )


def cmd_pipeline(args) -> int:
    cfg = _config(args)
    report, ctx = run_pipeline_full(cfg)
    text = report.dumps()
    if cfg.output_dir:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        (cfg.output_dir / "report.json").write_text(text, encoding="utf-8")
        row = SweepResult([cfg.seed], [report]).to_csv()
        (cfg.output_dir / "report.csv").write_text(row, encoding="utf-8")
        for stage in Stage:
            svg = render_svg(stage, ctx, title=f"{report.instance_id} {stage.value}")
            (cfg.output_dir / f"{stage.value}.svg").write_text(svg, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"ratio {report.ratio:.6f}  all checks {'pass' if report.all_pass else 'FAIL'}  "
          f"({report.runtime:.2f}s)", file=sys.stderr)
    return EXIT_OK if report.all_pass else EXIT_FAILED


def cmd_sweep(args) -> int:
    seeds = parse_seed_range(args.seeds)
    result = run_sweep(_config(args), seeds, jobs=args.jobs)
    text = result.to_csv()
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "sweep.csv").write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"{len(seeds)} runs, max ratio {result.max_ratio:.6f}, "
          f"simplicity violations {result.simplicity_violations}", file=sys.stderr)
    return EXIT_OK if result.all_pass else EXIT_FAILED


def _add_pair_args(p) -> None:
    p.add_argument("--fixture", choices=sorted(FIXTURES), help="built-in instance with both tours")
    p.add_argument("--instance", help="instance JSON")
    p.add_argument("--tour", help="optimal tour JSON (index array)")
    p.add_argument("--s-tour", dest="s_tour", help="2-optimal tour JSON (index array)")


def _add_experiment_args(p) -> None:
    _add_pair_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--family", choices=[f.value for f in Family], default=Family.UNIFORM_BOX.value)
    p.add_argument("--policy", choices=[q.value for q in Policy], default=Policy.FIRST.value)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.EXACT.value)
    p.add_argument("--starts", type=int, default=1, help="2-Opt starts; the longest result is analysed")
    p.add_argument("--scale", type=int, default=100, help="coordinate range for generated instances")
    p.add_argument("--tolerance", type=float, default=dual_arbor.DEFAULT_TOLERANCE)
    p.add_argument("--reverse-s", dest="reverse_s", action="store_true",
                   help="orient the 2-optimal tour the other way before partitioning")
    p.add_argument("--out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twoopt-lab", description="2-Opt analysis laboratory for Euclidean TSP.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="emit a generated instance as JSON")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--family", choices=[f.value for f in Family], default=Family.UNIFORM_BOX.value)
    p.add_argument("--scale", type=int, default=100)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="exact optimum by Held-Karp (n <= 18)")
    p.add_argument("--instance")
    p.add_argument("--fixture", choices=sorted(FIXTURES))
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("twoopt", help="run 2-Opt from the index tour, a seeded random tour or --tour")
    p.add_argument("--instance")
    p.add_argument("--fixture", choices=sorted(FIXTURES))
    p.add_argument("--tour", help="start tour JSON")
    p.add_argument("--seed", type=int, default=0, help="random start when non-zero")
    p.add_argument("--policy", choices=[q.value for q in Policy], default=Policy.FIRST.value)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=100_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_twoopt)

    for name, fn, text in [
        ("uncross", cmd_uncross, "subdivide a tour pair at its crossings"),
        ("partition", cmd_partition, "five-way edge partition of the local tour"),
        ("arbor", cmd_arbor, "weighted arborescences of the chord sets"),
    ]:
        p = sub.add_parser(name, help=text)
        _add_pair_args(p)
        p.add_argument("--out", help="output file (default: stdout)")
        p.set_defaults(func=fn)

    p = sub.add_parser("verify", help="run the inequality checks on a pair or an arborescence JSON")
    _add_pair_args(p)
    p.add_argument("--arbor", help="arborescence JSON")
    p.add_argument("--tolerance", type=float, default=dual_arbor.DEFAULT_TOLERANCE)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pipeline", help="end-to-end run with report and SVG drawings")
    _add_experiment_args(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("sweep", help="pipeline over a seed range, aggregated as CSV")
    _add_experiment_args(p)
    p.add_argument("--seeds", default="1..100", help="inclusive range such as 1..100")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"twoopt-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PipelineError as exc:
        print(f"twoopt-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"twoopt-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
