"""Command-line interface.

Subcommands: evaluate, ref-front, run, stats, table.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import harness, metrics
from .core import DifficultyTriplet, overall_violation
from .problems import make_problem, parse_problem_name


def _add_triplet_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--zeta", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)


def _parse_problem_range(text: str) -> tuple[int, ...]:
    ids: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if "-" in chunk and not chunk.startswith("das"):
            lo, hi = chunk.split("-", 1)
            ids.extend(range(int(lo), int(hi) + 1))
        else:
            ids.append(parse_problem_name(chunk))
    return tuple(dict.fromkeys(ids))


def _parse_triplets(text: str) -> tuple[tuple[float, float, float], ...]:
    if text == "builtin16":
        return harness.BUILTIN_TRIPLETS
    triplets = []
    for line in Path(text).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [float(v) for v in line.replace(",", " ").split()]
        if len(parts) != 3:
            raise SystemExit(f"bad triplet line: {line!r}")
        triplets.append(tuple(parts))
    return tuple(triplets)


def cmd_evaluate(args) -> int:
    pid = parse_problem_name(args.problem)
    inst = make_problem(pid, DifficultyTriplet(args.eta, args.zeta, args.gamma))
    x = np.array([float(v) for v in args.x.split(",")])
    f, c = inst.evaluate(x)
    print("objectives: " + " ".join(repr(float(v)) for v in f))
    print("constraints: " + " ".join(repr(float(v)) for v in c))
    print(f"violation: {overall_violation(c)!r}")
    return 0


def cmd_ref_front(args) -> int:
    pid = parse_problem_name(args.problem)
    inst = make_problem(pid, DifficultyTriplet(args.eta, args.zeta, args.gamma))
    resolution = args.resolution or metrics.default_resolution(inst)
    front = metrics.generate_reference_front(inst, resolution)
    metrics.save_front(front, args.out)
    print(f"wrote {len(front.points)} points to {args.out}")
    return 0


def cmd_run(args) -> int:
    spec = harness.ExperimentSpec(
        problems=_parse_problem_range(args.problems),
        triplets=_parse_triplets(args.triplets),
        algorithms=tuple(args.algos.split(",")),
        runs=args.runs,
        base_seed=args.seed,
        out_dir=Path(args.out),
        workers=args.workers,
        budget_override=args.budget_override,
    )
    def progress(rec):
        print(
            f"das-cmop{rec.problem} {rec.triplet} {rec.algorithm} run {rec.run}: "
            f"igd={rec.final_igd:.4e} ({rec.wall_time:.1f}s)",
            flush=True,
        )
    records = harness.run_experiment(spec, progress=progress)
    print(f"{len(records)} records in {spec.out_dir / harness.RECORDS_FILE}")
    return 0


def cmd_stats(args) -> int:
    records = harness.load_records(Path(args.in_dir))
    if not records:
        print("no records found", file=sys.stderr)
        return 1
    table = harness.summarize(records, alpha=args.alpha)
    out = harness.format_stats(table, fmt=args.format)
    harness.emit_outputs(table, records, Path(args.in_dir), fmt=args.format)
    print(out, end="")
    return 0


def cmd_table(args) -> int:
    records = harness.load_records(Path(args.in_dir))
    if not records:
        print("no records found", file=sys.stderr)
        return 1
    table = harness.summarize(records)
    print(harness.format_comparison_table(table), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dascmop", description="Difficulty-adjustable constrained multi-objective benchmark toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="evaluate one decision vector")
    p.add_argument("--problem", required=True)
    _add_triplet_args(p)
    p.add_argument("--x", required=True, help="comma-separated decision variables")
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("ref-front", help="generate a reference front file")
    p.add_argument("--problem", required=True)
    _add_triplet_args(p)
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_ref_front)

    p = sub.add_parser("run", help="run a solver grid")
    p.add_argument("--problems", default="1-9")
    p.add_argument("--triplets", default="builtin16", help="'builtin16' or a triplet file")
    p.add_argument("--algos", default="moead-cdp,nsga2-cdp")
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget-override", type=int, default=None)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("stats", help="summarize recorded runs")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--format", choices=("csv", "md"), default="csv")
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("table", help="side-by-side mean/std comparison table")
    p.add_argument("--in", dest="in_dir", required=True)
    p.set_defaults(fn=cmd_table)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
