"""Experiment orchestration: run grids, statistics, significance, persistence.

Runs are keyed by (problem, triplet, algorithm, run index); seeds derive
deterministically from those coordinates so extending a grid never perturbs
existing cells. Records append to a JSON-lines file, which makes interrupted
experiments resumable.
"""
from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from . import metrics
from .algorithms import ALGORITHMS, default_config
from .core import DifficultyTriplet
from .problems import make_problem

# The 16-triplet grid of the evaluation protocol, in result-table row order.
BUILTIN_TRIPLETS: tuple[tuple[float, float, float], ...] = (
    (0.0, 0.0, 0.0),
    (0.0, 0.25, 0.0),
    (0.0, 0.0, 0.25),
    (0.25, 0.0, 0.0),
    (0.0, 0.5, 0.0),
    (0.0, 0.0, 0.5),
    (0.5, 0.0, 0.0),
    (0.0, 0.75, 0.0),
    (0.0, 0.0, 0.75),
    (0.75, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, 0.0, 1.0),
    (1.0, 0.0, 0.0),
    (0.25, 0.25, 0.25),
    (0.5, 0.5, 0.5),
    (0.75, 0.75, 0.75),
)

RECORDS_FILE = "records.jsonl"


@dataclass
class ExperimentSpec:
    problems: tuple[int, ...]
    triplets: tuple[tuple[float, float, float], ...] = BUILTIN_TRIPLETS
    algorithms: tuple[str, ...] = ("moead-cdp", "nsga2-cdp")
    runs: int = 30
    base_seed: int = 42
    out_dir: Path = Path("results")
    workers: int = 1
    budget_override: int | None = None
    resolution: int | None = None  # reference-front resolution; None = default
    cache_dir: Path | None = None
    generate_fronts: bool = True

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        self.out_dir = Path(self.out_dir)
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}")


@dataclass
class RunRecord:
    problem: int
    triplet: tuple[float, float, float]
    algorithm: str
    run: int
    seed: int
    final_igd: float
    igd_trace: list
    wall_time: float
    final_objectives: list

    def key(self):
        return (self.problem, self.triplet, self.algorithm, self.run)

    def to_json(self) -> str:
        d = dict(self.__dict__)
        d["triplet"] = list(self.triplet)
        return json.dumps(d)

    @classmethod
    def from_json(cls, line: str) -> "RunRecord":
        d = json.loads(line)
        d["triplet"] = tuple(d["triplet"])
        return cls(**d)


def derive_seed(base_seed: int, problem: int, triplet, algorithm: str, run: int) -> int:
    """Stable per-run seed from the cell coordinates."""
    tag = f"{problem}|{triplet[0]:.6f},{triplet[1]:.6f},{triplet[2]:.6f}|{algorithm}|{run}"
    digest = hashlib.sha256(tag.encode()).digest()
    return base_seed ^ int.from_bytes(digest[:4], "big")


def execute_run(problem: int, triplet, algorithm: str, run: int, spec: ExperimentSpec) -> RunRecord:
    """One solver run plus its IGD bookkeeping."""
    inst = make_problem(problem, DifficultyTriplet(*triplet))
    front = metrics.get_reference_front(
        inst, spec.resolution, directory=spec.cache_dir, generate=spec.generate_fronts
    )
    seed = derive_seed(spec.base_seed, problem, triplet, algorithm, run)
    budget = spec.budget_override or (100_000 if problem <= 6 else 200_000)
    cfg = default_config(problem, seed=seed, max_evals=budget)

    def trace_fn(objectives):
        return metrics.igd(front.points, metrics.nondominated_filter(objectives))

    start = time.perf_counter()
    pop, trace = ALGORITHMS[algorithm](inst, cfg, trace_fn=trace_fn)
    elapsed = time.perf_counter() - start
    final = metrics.igd(front.points, metrics.nondominated_filter(pop.f))
    return RunRecord(
        problem=problem,
        triplet=tuple(triplet),
        algorithm=algorithm,
        run=run,
        seed=seed,
        final_igd=final,
        igd_trace=[[int(e), v] for e, v in trace],
        wall_time=elapsed,
        final_objectives=pop.f.tolist(),
    )


def _execute_run_star(args):
    return execute_run(*args)


def load_records(out_dir: Path) -> list[RunRecord]:
    path = Path(out_dir) / RECORDS_FILE
    if not path.exists():
        return []
    with open(path) as fh:
        return [RunRecord.from_json(line) for line in fh if line.strip()]


def run_experiment(spec: ExperimentSpec, progress=None) -> list[RunRecord]:
    """Execute every cell of the grid, appending records as runs finish.

    Already-recorded (problem, triplet, algorithm, run) cells are skipped, so
    a killed experiment resumes where it stopped.
    """
    spec.out_dir.mkdir(parents=True, exist_ok=True)
    done = {r.key(): r for r in load_records(spec.out_dir)}
    jobs = [
        (p, t, a, r, spec)
        for p in spec.problems
        for t in spec.triplets
        for a in spec.algorithms
        for r in range(spec.runs)
        if (p, tuple(t), a, r) not in done
    ]
    # Generate fronts up front so parallel workers only ever read the cache.
    for p in spec.problems:
        for t in spec.triplets:
            inst = make_problem(p, DifficultyTriplet(*t))
            metrics.get_reference_front(inst, spec.resolution, directory=spec.cache_dir, generate=spec.generate_fronts)

    records = list(done.values())
    path = spec.out_dir / RECORDS_FILE
    with open(path, "a") as fh:
        if spec.workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=spec.workers) as pool:
                for rec in pool.map(_execute_run_star, jobs):
                    fh.write(rec.to_json() + "\n")
                    fh.flush()
                    records.append(rec)
                    if progress:
                        progress(rec)
        else:
            for job in jobs:
                rec = _execute_run_star(job)
                fh.write(rec.to_json() + "\n")
                fh.flush()
                records.append(rec)
                if progress:
                    progress(rec)
    records.sort(key=lambda r: (r.problem, r.triplet, r.algorithm, r.run))
    return records


# ---------------------------------------------------------------------------
# Wilcoxon rank-sum test

def _rank_with_ties(values: np.ndarray) -> tuple[np.ndarray, float]:
    """Average ranks plus the tie-correction sum of (t^3 - t)."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    tie_sum = 0.0
    i = 0
    sorted_vals = values[order]
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        ranks[order[i : j + 1]] = avg
        t = j - i + 1
        tie_sum += t**3 - t
        i = j + 1
    return ranks, tie_sum


def wilcoxon_rank_sum(a, b, alpha: float = 0.05) -> tuple[float, str]:
    """Two-sided rank-sum test (normal approximation, tie and continuity
    corrected). Returns (p, marker): 'better' if a ranks lower (smaller
    values) at significance alpha, 'worse' if higher, else 'none'."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("both samples must be nonempty")
    n1, n2 = len(a), len(b)
    n = n1 + n2
    ranks, tie_sum = _rank_with_ties(np.concatenate([a, b]))
    w = ranks[:n1].sum()
    mean = n1 * (n + 1) / 2.0
    var = n1 * n2 / 12.0 * ((n + 1) - tie_sum / (n * (n - 1)))
    if var <= 0:
        return 1.0, "none"
    z = (w - mean - 0.5 * np.sign(w - mean)) / math.sqrt(var)
    p = math.erfc(abs(z) / math.sqrt(2.0))
    if p >= alpha or w == mean:
        return p, "none"
    return p, ("better" if w < mean else "worse")


def rank_sum_exact_p(a, b) -> float:
    """Exact two-sided rank-sum p by enumerating all rank assignments.

    Feasible for samples of up to ~10 each; doubles as the oracle for the
    normal approximation.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n1, n2 = len(a), len(b)
    if n1 > 10 or n2 > 10:
        raise ValueError("exact enumeration limited to samples of size <= 10")
    ranks, _ = _rank_with_ties(np.concatenate([a, b]))
    w_obs = ranks[:n1].sum()
    mean = n1 * (n1 + n2 + 1) / 2.0
    dev = abs(w_obs - mean)
    total = 0
    extreme = 0
    for idx in combinations(range(n1 + n2), n1):
        total += 1
        if abs(ranks[list(idx)].sum() - mean) >= dev - 1e-12:
            extreme += 1
    return extreme / total


# ---------------------------------------------------------------------------
# Summaries and output files

def sci(v: float) -> str:
    return f"{v:.3E}"


@dataclass
class StatsRow:
    problem: int
    triplet: tuple[float, float, float]
    algorithm: str
    runs: int
    mean: float
    std: float
    marker: str  # NSGA-II-CDP vs MOEA/D-CDP; 'none' when not applicable


@dataclass
class StatsTable:
    rows: list[StatsRow] = field(default_factory=list)


def summarize(records: list[RunRecord], alpha: float = 0.05) -> StatsTable:
    """Per-cell mean/std (n-1 divisor) and the NSGA-II vs MOEA/D significance
    marker, computed only when both algorithms have equal run counts."""
    cells: dict[tuple, list[RunRecord]] = {}
    for r in records:
        cells.setdefault((r.problem, r.triplet, r.algorithm), []).append(r)

    table = StatsTable()
    for (problem, triplet, algorithm), recs in sorted(
        cells.items(), key=lambda kv: (kv[0][0], _triplet_order(kv[0][1]), kv[0][2])
    ):
        igds = np.array([r.final_igd for r in recs])
        marker = "none"
        if algorithm == "nsga2-cdp":
            rival = cells.get((problem, triplet, "moead-cdp"))
            if rival is not None and len(rival) == len(recs):
                _, marker = wilcoxon_rank_sum(igds, [r.final_igd for r in rival], alpha)
        table.rows.append(
            StatsRow(
                problem=problem,
                triplet=triplet,
                algorithm=algorithm,
                runs=len(recs),
                mean=float(igds.mean()),
                std=float(igds.std(ddof=1)) if len(igds) > 1 else 0.0,
                marker=marker,
            )
        )
    return table


def _triplet_order(t):
    try:
        return BUILTIN_TRIPLETS.index(tuple(t))
    except ValueError:
        return len(BUILTIN_TRIPLETS)


def format_stats(table: StatsTable, fmt: str = "csv") -> str:
    header = ["problem", "eta", "zeta", "gamma", "algorithm", "runs", "mean_igd", "std_igd", "marker"]
    rows = [
        [
            f"das-cmop{r.problem}",
            f"{r.triplet[0]:g}",
            f"{r.triplet[1]:g}",
            f"{r.triplet[2]:g}",
            r.algorithm,
            str(r.runs),
            sci(r.mean),
            sci(r.std),
            r.marker,
        ]
        for r in table.rows
    ]
    if fmt == "csv":
        return "\n".join(",".join(row) for row in [header] + rows) + "\n"
    if fmt == "md":
        lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
        lines += ["| " + " | ".join(row) + " |" for row in rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def format_comparison_table(table: StatsTable) -> str:
    """Report-style layout: one row per (problem, triplet) with mean (std) per
    algorithm and a significance dagger on the NSGA-II column."""
    cells: dict[tuple, dict[str, StatsRow]] = {}
    for r in table.rows:
        cells.setdefault((r.problem, r.triplet), {})[r.algorithm] = r
    marks = {"worse": " (-)", "better": " (+)", "none": ""}
    lines = [f"{'problem':<11}{'triplet':<20}{'MOEA/D-CDP':<26}{'NSGA-II-CDP':<26}"]
    for (problem, triplet), by_algo in sorted(cells.items(), key=lambda kv: (kv[0][0], _triplet_order(kv[0][1]))):
        cols = []
        for algo in ("moead-cdp", "nsga2-cdp"):
            row = by_algo.get(algo)
            if row is None:
                cols.append("-")
            else:
                suffix = marks.get(row.marker, "") if algo == "nsga2-cdp" else ""
                cols.append(f"{sci(row.mean)} ({sci(row.std)}){suffix}")
        tstr = "(" + ",".join(f"{v:g}" for v in triplet) + ")"
        lines.append(f"{'das-cmop' + str(problem):<11}{tstr:<20}{cols[0]:<26}{cols[1]:<26}")
    return "\n".join(lines) + "\n"


def emit_outputs(table: StatsTable, records: list[RunRecord], out_dir: Path, fmt: str = "csv") -> list[Path]:
    """Write the stats table, a flat record file, and per-cell best final
    populations (plot-ready objective rows)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    stats_path = out_dir / f"stats.{fmt}"
    stats_path.write_text(format_stats(table, fmt))
    written.append(stats_path)

    rec_path = out_dir / "run_summaries.csv"
    lines = ["problem,eta,zeta,gamma,algorithm,run,seed,final_igd,wall_time"]
    for r in records:
        lines.append(
            f"das-cmop{r.problem},{r.triplet[0]:g},{r.triplet[1]:g},{r.triplet[2]:g},"
            f"{r.algorithm},{r.run},{r.seed},{r.final_igd!r},{r.wall_time:.3f}"
        )
    rec_path.write_text("\n".join(lines) + "\n")
    written.append(rec_path)

    # Best run per cell: lowest final IGD, ties to lowest seed.
    cells: dict[tuple, list[RunRecord]] = {}
    for r in records:
        cells.setdefault((r.problem, r.triplet, r.algorithm), []).append(r)
    for (problem, triplet, algorithm), recs in sorted(cells.items()):
        best = min(recs, key=lambda r: (r.final_igd, r.seed))
        name = (
            f"das-cmop{problem}_eta{triplet[0]:g}_zeta{triplet[1]:g}_gamma{triplet[2]:g}"
            f"_{algorithm}_bestpop.dat"
        )
        path = out_dir / name
        body = [f"# das-cmop{problem} eta={triplet[0]:g} zeta={triplet[1]:g} gamma={triplet[2]:g} "
                f"algorithm={algorithm} run={best.run} final_igd={best.final_igd!r}"]
        body += [" ".join(repr(v) for v in row) for row in best.final_objectives]
        path.write_text("\n".join(body) + "\n")
        written.append(path)
    return written
