"""Reference solvers: MOEA/D-CDP and NSGA-II-CDP.

Both use simulated binary crossover and polynomial mutation (distribution
index 20) and handle constraints through the constraint-dominance principle.
A single run is sequential and fully determined by its seed; distinct runs
are independent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np
from scipy.spatial.distance import cdist

from .toolkit import ProblemInstance


@dataclass
class AlgoConfig:
    pop_size: int
    max_evals: int
    crossover_rate: float = 0.9
    mutation_prob: float | None = None  # defaults to 1/n
    sbx_index: float = 20.0
    mutation_index: float = 20.0
    neighborhood: int = 20
    neighbor_prob: float = 0.9
    max_replacements: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.pop_size <= 0:
            raise ValueError("pop_size must be positive")
        if not (0.0 <= self.crossover_rate <= 1.0) or not (0.0 <= self.neighbor_prob <= 1.0):
            raise ValueError("rates must lie in [0, 1]")
        if self.neighborhood > self.pop_size:
            raise ValueError("neighborhood larger than population")
        if self.max_replacements < 1:
            raise ValueError("max_replacements must be at least 1")


def default_config(pid: int, seed: int = 0, max_evals: int | None = None) -> AlgoConfig:
    """Protocol settings: N=200/T=20/100k evals for the two-objective
    instances, N=105/T=10/200k evals for the three-objective ones."""
    if pid <= 6:
        return AlgoConfig(pop_size=200, max_evals=max_evals or 100_000, neighborhood=20, seed=seed)
    return AlgoConfig(pop_size=105, max_evals=max_evals or 200_000, neighborhood=10, seed=seed)


@dataclass
class Population:
    x: np.ndarray
    f: np.ndarray
    c: np.ndarray
    violation: np.ndarray

    def __len__(self):
        return len(self.x)


def _violations(c: np.ndarray) -> np.ndarray:
    return -np.minimum(c, 0.0).sum(axis=1)


# ---------------------------------------------------------------------------
# Variation operators

def sbx_crossover(p1: np.ndarray, p2: np.ndarray, crossover_rate: float, index: float, rng: np.random.Generator):
    """Simulated binary crossover on [0,1]-bounded vectors.

    Applied with probability crossover_rate per pair and 0.5 per variable;
    children are clipped to the box.
    """
    c1, c2 = p1.copy(), p2.copy()
    if rng.random() > crossover_rate:
        return c1, c2
    # Coincident genes stay put; spreading them is pure floating-point noise.
    do = (rng.random(len(p1)) <= 0.5) & (np.abs(p1 - p2) > 1e-14)
    u = rng.random(len(p1))
    exponent = 1.0 / (index + 1.0)
    beta = np.where(u <= 0.5, (2.0 * u) ** exponent, (0.5 / (1.0 - u)) ** exponent)
    c1[do] = 0.5 * ((1 + beta[do]) * p1[do] + (1 - beta[do]) * p2[do])
    c2[do] = 0.5 * ((1 - beta[do]) * p1[do] + (1 + beta[do]) * p2[do])
    # Each crossed gene lands in either child with equal probability, so a
    # child mixes near-p1 and near-p2 genes instead of tracking one parent.
    swap = do & (rng.random(len(p1)) <= 0.5)
    c1[swap], c2[swap] = c2[swap], c1[swap].copy()
    return np.clip(c1, 0.0, 1.0), np.clip(c2, 0.0, 1.0)


def polynomial_mutation(x: np.ndarray, prob: float, index: float, rng: np.random.Generator) -> np.ndarray:
    """Bounded polynomial mutation on [0,1]; each variable mutates with
    probability prob."""
    y = x.copy()
    do = rng.random(len(x)) < prob
    if not do.any():
        return y
    u = rng.random(int(do.sum()))
    xv = y[do]
    exponent = 1.0 / (index + 1.0)
    low, high = u < 0.5, u >= 0.5
    delta = np.empty_like(u)
    delta[low] = (2.0 * u[low] + (1.0 - 2.0 * u[low]) * (1.0 - xv[low]) ** (index + 1.0)) ** exponent - 1.0
    delta[high] = 1.0 - (2.0 * (1.0 - u[high]) + 2.0 * (u[high] - 0.5) * xv[high] ** (index + 1.0)) ** exponent
    y[do] = np.clip(xv + delta, 0.0, 1.0)
    return y


# ---------------------------------------------------------------------------
# Decomposition machinery

def generate_weight_vectors(m: int, n_vectors: int) -> np.ndarray:
    """Uniform simplex-lattice weight vectors.

    For m=2 the lattice is (i/(N-1), 1-i/(N-1)); for m>=3, n_vectors must be
    a lattice cardinality C(H+m-1, m-1) for some integer H.
    """
    if m == 2:
        t = np.linspace(0.0, 1.0, n_vectors)
        return np.column_stack([t, 1.0 - t])
    for h in range(1, 200):
        if math.comb(h + m - 1, m - 1) == n_vectors:
            vecs = []
            for cuts in combinations_with_replacement(range(h + 1), m - 1):
                parts = (cuts[0],) + tuple(cuts[i] - cuts[i - 1] for i in range(1, m - 1)) + (h - cuts[-1],)
                vecs.append([p / h for p in parts])
            return np.asarray(vecs)
    raise ValueError(f"{n_vectors} is not a simplex-lattice size for m={m}")


def tchebycheff(f: np.ndarray, weights: np.ndarray, ideal: np.ndarray) -> np.ndarray:
    """Weighted Tchebycheff aggregation against the ideal point."""
    return (weights * np.abs(f - ideal)).max(axis=-1)


class _Trace:
    """Records trace_fn(F) every 1000 evaluations."""

    def __init__(self, trace_fn):
        self.fn = trace_fn
        self.next = 1000
        self.records: list[tuple[int, float]] = []

    def maybe(self, evals: int, objectives: np.ndarray) -> None:
        if self.fn is not None and evals >= self.next:
            self.records.append((evals, float(self.fn(objectives))))
            while self.next <= evals:
                self.next += 1000


def moead_cdp_run(inst: ProblemInstance, cfg: AlgoConfig, trace_fn=None) -> tuple[Population, list]:
    """MOEA/D with constraint-dominance replacement.

    One child per subproblem iteration; replacement visits the mating pool
    in random order, swapping in the child when it wins under CDP with the
    Tchebycheff value standing in for dominance between feasible solutions,
    touching at most max_replacements incumbents.
    """
    rng = np.random.default_rng(cfg.seed)
    n_pop, n_var = cfg.pop_size, inst.n
    weights = generate_weight_vectors(inst.m, n_pop)
    neighbors = np.argsort(cdist(weights, weights), axis=1, kind="stable")[:, : cfg.neighborhood]
    p_mut = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / n_var

    x = rng.random((n_pop, n_var))
    f, c = inst.evaluate_batch(x)
    viol = _violations(c)
    ideal = f.min(axis=0)
    evals = n_pop
    trace = _Trace(trace_fn)
    trace.maybe(evals, f)
    whole = np.arange(n_pop)

    while evals < cfg.max_evals:
        for i in range(n_pop):
            if evals >= cfg.max_evals:
                break
            pool = neighbors[i] if rng.random() < cfg.neighbor_prob else whole
            pa, pb = pool[rng.choice(len(pool), size=2, replace=False)]
            child, _ = sbx_crossover(x[pa], x[pb], cfg.crossover_rate, cfg.sbx_index, rng)
            child = polynomial_mutation(child, p_mut, cfg.mutation_index, rng)
            f_ch, c_ch = inst.evaluate(child)
            v_ch = _violations(c_ch[None, :])[0]
            evals += 1
            ideal = np.minimum(ideal, f_ch)

            tch_child = tchebycheff(f_ch, weights[pool], ideal)
            tch_inc = tchebycheff(f[pool], weights[pool], ideal)
            replaced = 0
            for k in rng.permutation(len(pool)):
                if replaced >= cfg.max_replacements:
                    break
                j = pool[k]
                if v_ch == 0.0 and viol[j] == 0.0:
                    better = tch_child[k] < tch_inc[k]
                elif v_ch == 0.0:
                    better = True
                elif viol[j] == 0.0:
                    better = False
                else:
                    better = v_ch < viol[j]
                if better:
                    x[j], f[j], c[j], viol[j] = child, f_ch, c_ch, v_ch
                    replaced += 1
            trace.maybe(evals, f)
    return Population(x, f, c, viol), trace.records


# ---------------------------------------------------------------------------
# NSGA-II machinery

def fast_nondominated_sort(f: np.ndarray, violation: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Front peeling under CDP dominance; returns (ranks, fronts)."""
    f = np.asarray(f, dtype=float)
    violation = np.asarray(violation, dtype=float)
    feas = violation == 0.0
    le = (f[:, None, :] <= f[None, :, :]).all(axis=2)
    lt = (f[:, None, :] < f[None, :, :]).any(axis=2)
    obj_dom = le & lt
    dom = (
        (feas[:, None] & ~feas[None, :])
        | (~feas[:, None] & ~feas[None, :] & (violation[:, None] < violation[None, :]))
        | (feas[:, None] & feas[None, :] & obj_dom)
    )
    n_dominators = dom.sum(axis=0)
    ranks = np.full(len(f), -1, dtype=int)
    fronts = []
    remaining = n_dominators.copy()
    assigned = np.zeros(len(f), dtype=bool)
    level = 0
    while not assigned.all():
        current = np.flatnonzero((remaining == 0) & ~assigned)
        ranks[current] = level
        fronts.append(current)
        assigned[current] = True
        remaining = remaining - dom[current].sum(axis=0)
        level += 1
    return ranks, fronts


def crowding_distance(front: np.ndarray) -> np.ndarray:
    """Per-point crowding distance within one front.

    Boundary points per objective get infinity; interior points accumulate
    normalized neighbor gaps. Objectives with zero spread contribute nothing.
    """
    f = np.atleast_2d(np.asarray(front, dtype=float))
    n = len(f)
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for j in range(f.shape[1]):
        order = np.argsort(f[:, j], kind="stable")
        span = f[order[-1], j] - f[order[0], j]
        dist[order[0]] = dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (f[order[2:], j] - f[order[:-2], j]) / span
    return dist


def _rank_and_crowd(f: np.ndarray, violation: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ranks, fronts = fast_nondominated_sort(f, violation)
    crowd = np.empty(len(f))
    for front in fronts:
        crowd[front] = crowding_distance(f[front])
    return ranks, crowd


def _tournament(rng, ranks, crowd, i, j):
    if ranks[i] != ranks[j]:
        return i if ranks[i] < ranks[j] else j
    if crowd[i] != crowd[j]:
        return i if crowd[i] > crowd[j] else j
    return i if rng.random() < 0.5 else j


def nsga2_cdp_run(inst: ProblemInstance, cfg: AlgoConfig, trace_fn=None) -> tuple[Population, list]:
    """Generational NSGA-II with CDP-based nondominated sorting."""
    rng = np.random.default_rng(cfg.seed)
    n_pop, n_var = cfg.pop_size, inst.n
    p_mut = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / n_var

    x = rng.random((n_pop, n_var))
    f, c = inst.evaluate_batch(x)
    viol = _violations(c)
    evals = n_pop
    trace = _Trace(trace_fn)
    trace.maybe(evals, f)

    while evals < cfg.max_evals:
        ranks, crowd = _rank_and_crowd(f, viol)
        n_children = min(n_pop, cfg.max_evals - evals)
        children = np.empty((n_children, n_var))
        made = 0
        while made < n_children:
            cand = rng.integers(0, n_pop, size=4)
            i1 = _tournament(rng, ranks, crowd, cand[0], cand[1])
            i2 = _tournament(rng, ranks, crowd, cand[2], cand[3])
            c1, c2 = sbx_crossover(x[i1], x[i2], cfg.crossover_rate, cfg.sbx_index, rng)
            children[made] = polynomial_mutation(c1, p_mut, cfg.mutation_index, rng)
            made += 1
            if made < n_children:
                children[made] = polynomial_mutation(c2, p_mut, cfg.mutation_index, rng)
                made += 1
        f_ch, c_ch = inst.evaluate_batch(children)
        v_ch = _violations(c_ch)
        evals += n_children

        x_all = np.vstack([x, children])
        f_all = np.vstack([f, f_ch])
        c_all = np.vstack([c, c_ch])
        v_all = np.concatenate([viol, v_ch])
        _, fronts = fast_nondominated_sort(f_all, v_all)
        chosen: list[int] = []
        for front in fronts:
            if len(chosen) + len(front) <= n_pop:
                chosen.extend(front.tolist())
            else:
                cd = crowding_distance(f_all[front])
                order = np.argsort(-cd, kind="stable")
                chosen.extend(front[order[: n_pop - len(chosen)]].tolist())
                break
        sel = np.asarray(chosen)
        x, f, c, viol = x_all[sel], f_all[sel], c_all[sel], v_all[sel]
        trace.maybe(evals, f)
    return Population(x, f, c, viol), trace.records


ALGORITHMS = {
    "moead-cdp": moead_cdp_run,
    "nsga2-cdp": nsga2_cdp_run,
}
