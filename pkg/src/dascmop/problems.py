"""The nine named benchmark instances DAS-CMOP1-9.

Instances 1-6 have two objectives and 30 variables; 7-9 have three
objectives. Constraint layout per instance group:

* 1-3: 1 Type-I + 2 Type-II + 9 Type-III = 12 constraints
* 4-6: 1 Type-I + 1 Type-II + 9 Type-III = 11 constraints
* 7-9: 2 Type-I + 1 Type-II + 4 Type-III = 7 constraints
"""
from __future__ import annotations

import numpy as np

from .core import DifficultyTriplet
from .toolkit import GeneratorSpec, ProblemInstance, assemble_problem

PROBLEM_IDS = tuple(range(1, 10))


def _shape_convex(s):
    x1 = s[:, 0]
    return np.column_stack([x1, 1.0 - x1**2])


def _shape_concave(s):
    x1 = s[:, 0]
    return np.column_stack([x1, 1.0 - np.sqrt(x1)])


def _shape_discrete(s):
    x1 = s[:, 0]
    return np.column_stack([x1, 1.0 - np.sqrt(x1) + 0.5 * np.abs(np.sin(5 * np.pi * x1))])


def _shape_linear3(s):
    x1, x2 = s[:, 0], s[:, 1]
    return np.column_stack([x1 * x2, x2 * (1.0 - x1), 1.0 - x2])


def _shape_sphere3(s):
    t1 = 0.5 * np.pi * s[:, 0]
    t2 = 0.5 * np.pi * s[:, 1]
    return np.column_stack([np.cos(t1) * np.cos(t2), np.cos(t1) * np.sin(t2), np.sin(t1)])


def _dist_tracking(x):
    # g1 over odd j >= 3, g2 over even j >= 2 (1-based variable indices).
    x1 = x[:, 0]
    g1 = ((x[:, 2::2] - np.sin(0.5 * np.pi * x1)[:, None]) ** 2).sum(axis=1)
    g2 = ((x[:, 1::2] - np.cos(0.5 * np.pi * x1)[:, None]) ** 2).sum(axis=1)
    return np.column_stack([g1, g2])


def _dist_rastrigin(x, skip: int):
    tail = x[:, skip:] - 0.5
    n = x.shape[1]
    return (n - skip) + (tail**2 - np.cos(20 * np.pi * tail)).sum(axis=1)


def _dist_rastrigin2(x):
    g = _dist_rastrigin(x, 1)
    return np.column_stack([g, g])


def _dist_rastrigin3(x):
    g = _dist_rastrigin(x, 2)
    return np.column_stack([g, g, g])


def _dist_curved3(x):
    n = x.shape[1]
    j = np.arange(3, n + 1)
    centers = np.cos(0.25 * j[None, :] / n * np.pi * (x[:, 0] + x[:, 1])[:, None])
    g = ((x[:, 2:] - centers) ** 2).sum(axis=1)
    return np.column_stack([g, g, g])


_SHAPES = {
    1: _shape_convex,
    2: _shape_concave,
    3: _shape_discrete,
    4: _shape_convex,
    5: _shape_concave,
    6: _shape_discrete,
    7: _shape_linear3,
    8: _shape_sphere3,
    9: _shape_sphere3,
}

_DISTANCES = {
    1: _dist_tracking,
    2: _dist_tracking,
    3: _dist_tracking,
    4: _dist_rastrigin2,
    5: _dist_rastrigin2,
    6: _dist_rastrigin2,
    7: _dist_rastrigin3,
    8: _dist_rastrigin3,
    9: _dist_curved3,
}

# (m, Type-I count, Type-II count) per instance id.
_LAYOUT = {pid: (2, 1, 2) for pid in (1, 2, 3)}
_LAYOUT.update({pid: (2, 1, 1) for pid in (4, 5, 6)})
_LAYOUT.update({pid: (3, 2, 1) for pid in (7, 8, 9)})


def problem_spec(pid: int, n: int = 30) -> GeneratorSpec:
    """Generator spec for DAS-CMOP<pid>; n is adjustable but defaults to 30."""
    if pid not in PROBLEM_IDS:
        raise ValueError(f"unknown problem id {pid}; expected 1..9")
    m, k, p = _LAYOUT[pid]
    return GeneratorSpec(
        m=m,
        n=n,
        n_type1=k,
        n_type2=p,
        shape=_SHAPES[pid],
        distance=_DISTANCES[pid],
    )


def make_problem(pid: int, triplet: DifficultyTriplet | tuple, n: int = 30) -> ProblemInstance:
    """Instantiate DAS-CMOP<pid> with the given difficulty triplet."""
    if not isinstance(triplet, DifficultyTriplet):
        triplet = DifficultyTriplet(*triplet)
    return assemble_problem(problem_spec(pid, n), triplet, name=f"das-cmop{pid}", pid=pid)


def constraint_count(inst: ProblemInstance) -> int:
    """Number of constraint slots (triplet-independent)."""
    return inst.n_constraints


def unconstrained_pf_point(inst: ProblemInstance, s) -> np.ndarray:
    """Image of shape parameter(s) s on the distance-zero front surface.

    s is a scalar for two-objective instances, a pair for three-objective
    ones; values must lie in [0, 1].
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if s.shape != (inst.m - 1,):
        raise ValueError(f"expected {inst.m - 1} shape parameter(s), got {s.shape}")
    if np.any(s < 0.0) or np.any(s > 1.0):
        raise ValueError("shape parameter outside [0, 1]")
    return inst.pf_shape(s.reshape(1, -1))[0]


def parse_problem_name(name: str) -> int:
    """Map a CLI name like 'das-cmop3' (or just '3') to a problem id."""
    s = name.strip().lower()
    if s.startswith("das-cmop"):
        s = s[len("das-cmop"):]
    elif s.startswith("dascmop"):
        s = s[len("dascmop"):]
    try:
        pid = int(s)
    except ValueError:
        raise ValueError(f"cannot parse problem name {name!r}") from None
    if pid not in PROBLEM_IDS:
        raise ValueError(f"problem id {pid} outside 1..9")
    return pid
