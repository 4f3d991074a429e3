"""IGD, nondominated filtering, reference-front generation and feasibility ratios.

No published reference data exists for these instances, so the front oracle
here is the operational ground truth: sample the shape-parameter domain, scan the
achievable distance offset, keep candidates that survive the Type-I and
Type-III constraints, and nondominated-filter the result. Fronts are cached
as plain-text files keyed by (instance, triplet, resolution).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist

from .toolkit import ProblemInstance, type1_constraint

DEFAULT_CACHE = Path.home() / ".cache" / "dascmop"
CACHE_ENV_VAR = "DASCMOP_CACHE"
MAX_FRONT_POINTS = 10_000


class EmptyFrontError(RuntimeError):
    """The feasible front is empty at the requested sampling (e.g. eta = 1
    with a grid that misses the measure-zero Type-I set)."""


@dataclass(frozen=True)
class ReferenceFront:
    points: np.ndarray  # (N, m), mutually nondominated
    name: str
    triplet: tuple[float, float, float]
    resolution: int


def igd(reference: np.ndarray, approximation: np.ndarray) -> float:
    """Mean distance from each reference point to its nearest approximation point."""
    reference = np.atleast_2d(np.asarray(reference, dtype=float))
    approximation = np.atleast_2d(np.asarray(approximation, dtype=float))
    if reference.size == 0 or approximation.size == 0:
        raise ValueError("igd requires nonempty point sets")
    if reference.shape[1] != approximation.shape[1]:
        raise ValueError("objective dimensions differ")
    return float(cdist(reference, approximation).min(axis=1).mean())


def nondominated_filter(points: np.ndarray) -> np.ndarray:
    """Maximal mutually-nondominated subset; duplicate rows collapse to one."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] == 0:
        return points
    points = np.unique(points, axis=0)
    if points.shape[1] == 2:
        # Sorted by f1 then f2, a point survives iff its f2 undercuts
        # everything seen so far.
        order = np.lexsort((points[:, 1], points[:, 0]))
        pts = points[order]
        keep = np.empty(len(pts), dtype=bool)
        best = math.inf
        for i, f2 in enumerate(pts[:, 1]):
            keep[i] = f2 < best
            if f2 < best:
                best = f2
        return pts[keep]
    keep = np.ones(len(points), dtype=bool)
    chunk = 512
    for start in range(0, len(points), chunk):
        block = points[start : start + chunk]
        le = (points[None, :, :] <= block[:, None, :]).all(axis=2)
        lt = (points[None, :, :] < block[:, None, :]).any(axis=2)
        keep[start : start + chunk] = ~(le & lt).any(axis=1)
    return points[keep]


def farthest_point_thin(points: np.ndarray, cap: int) -> np.ndarray:
    """Greedy farthest-point subsample down to at most cap points."""
    if len(points) <= cap:
        return points
    chosen = [int(np.argmin(points[:, 0]))]
    dist = np.linalg.norm(points - points[chosen[0]], axis=1)
    for _ in range(cap - 1):
        nxt = int(np.argmax(dist))
        chosen.append(nxt)
        dist = np.minimum(dist, np.linalg.norm(points - points[nxt], axis=1))
    return points[np.sort(chosen)]


def _axis_grid(resolution: int, a: float, b: float) -> np.ndarray:
    """Uniform [0,1] grid, augmented with the sin/cos peak points when the
    Type-I band degenerates to measure zero (b = 1)."""
    grid = np.linspace(0.0, 1.0, resolution)
    if b >= 1.0:
        peaks_sin = (0.5 + 2.0 * np.arange(0, int(a // 2) + 1)) / a
        peaks_cos = 2.0 * np.arange(0, int(a // 2) + 1) / a
        extra = np.concatenate([peaks_sin, peaks_cos])
        grid = np.unique(np.concatenate([grid, extra[(extra >= 0) & (extra <= 1)]]))
    return grid


def generate_reference_front(inst: ProblemInstance, resolution: int = 1000) -> ReferenceFront:
    """Brute-force front oracle for a problem instance.

    Along each shape-parameter ray the candidates F(s) + g*(1,...,1) are
    totally ordered by dominance, so only the smallest feasible distance
    offset g per sample can reach the front; the g-scan finds it to grid
    accuracy and a final nondominated filter handles competition across rays.
    """
    if resolution < 100:
        raise ValueError("resolution must be at least 100")
    p = inst.params
    spec = inst.spec

    g1 = _axis_grid(resolution, spec.a, p.b)
    if inst.m == 2:
        s = g1.reshape(-1, 1)
    else:
        g2 = _axis_grid(resolution, spec.a, p.b)
        a1, a2 = np.meshgrid(g1, g2, indexing="ij")
        s = np.column_stack([a1.ravel(), a2.ravel()])

    # Type-I feasibility of the generating parameters.
    ok = np.ones(len(s), dtype=bool)
    if p.type1_active:
        for k in range(spec.n_type1):
            ok &= type1_constraint(s[:, k], k + 1, spec.a, p.b) >= 0
    s = s[ok]
    if len(s) == 0:
        raise EmptyFrontError(f"no shape samples satisfy Type-I at b={p.b}")

    alpha = inst.pf_shape(s)

    if p.type2_active:
        step = min((p.e - p.d) / 1000.0, 1e-3)
        if step == 0.0:
            gvals = np.array([p.d])
        else:
            gvals = np.arange(p.d, p.e + step / 2, step)
            gvals[-1] = min(gvals[-1], p.e)
    else:
        gvals = np.array([0.0])

    if p.type3_active:
        front_pts = []
        chunk = max(1, int(2e6 // max(1, len(gvals))))
        for start in range(0, len(alpha), chunk):
            block = alpha[start : start + chunk]
            cand = block[:, None, :] + gvals[None, :, None]
            flat = cand.reshape(-1, inst.m)
            feas = (inst.type3_values(flat) >= 0).all(axis=1).reshape(len(block), len(gvals))
            has = feas.any(axis=1)
            first = feas.argmax(axis=1)
            front_pts.append(block[has] + gvals[first[has]][:, None])
        pts = np.concatenate(front_pts) if front_pts else np.empty((0, inst.m))
    else:
        pts = alpha + gvals[0]

    if len(pts) == 0:
        raise EmptyFrontError(f"feasible front empty for {inst.name} at triplet {inst.triplet.as_tuple()}")
    pts = nondominated_filter(pts)
    pts = farthest_point_thin(pts, MAX_FRONT_POINTS)
    return ReferenceFront(
        points=pts,
        name=inst.name,
        triplet=inst.triplet.as_tuple(),
        resolution=resolution,
    )


def feasible_ratio_mc(inst: ProblemInstance, samples: int, seed: int) -> float:
    """Monte-Carlo fraction of the unit box with zero constraint violation."""
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    feasible = 0
    chunk = 100_000
    remaining = samples
    while remaining > 0:
        k = min(chunk, remaining)
        x = rng.random((k, inst.n))
        _, c = inst.evaluate_batch(x)
        feasible += int((c >= 0).all(axis=1).sum())
        remaining -= k
    return feasible / samples


# ---------------------------------------------------------------------------
# Plain-text persistence and caching.

def save_front(front: ReferenceFront, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    eta, zeta, gamma = front.triplet
    header = f"# {front.name} eta={eta} zeta={zeta} gamma={gamma} resolution={front.resolution}"
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in front.points:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_front(path: str | Path) -> ReferenceFront:
    path = Path(path)
    with open(path) as fh:
        header = fh.readline().strip()
        rows = [[float(v) for v in line.split()] for line in fh if line.strip()]
    fields = header.lstrip("# ").split()
    name = fields[0]
    meta = dict(f.split("=", 1) for f in fields[1:])
    return ReferenceFront(
        points=np.asarray(rows, dtype=float),
        name=name,
        triplet=(float(meta["eta"]), float(meta["zeta"]), float(meta["gamma"])),
        resolution=int(meta["resolution"]),
    )


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV_VAR, DEFAULT_CACHE))


def front_cache_path(inst: ProblemInstance, resolution: int, directory: Path | None = None) -> Path:
    eta, zeta, gamma = inst.triplet.as_tuple()
    fname = f"{inst.name}_eta{eta:g}_zeta{zeta:g}_gamma{gamma:g}_res{resolution}.dat"
    return (directory or cache_dir()) / fname


def default_resolution(inst: ProblemInstance) -> int:
    return 1000 if inst.m == 2 else 100


def get_reference_front(
    inst: ProblemInstance,
    resolution: int | None = None,
    directory: Path | None = None,
    generate: bool = True,
) -> ReferenceFront:
    """Load the cached front for (instance, triplet, resolution), generating
    and caching it on first use."""
    resolution = resolution or default_resolution(inst)
    path = front_cache_path(inst, resolution, directory)
    if path.exists():
        return load_front(path)
    if not generate:
        raise FileNotFoundError(f"reference front missing and generation disabled: {path}")
    front = generate_reference_front(inst, resolution)
    save_front(front, path)
    return front
