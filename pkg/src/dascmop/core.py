"""Value types, feasibility, Pareto dominance and the constraint-dominance comparator.

Everything here is a pure function on immutable values; the two solvers and
the metrics module build on these primitives.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Orderings returned by cdp_compare.
A_BETTER = 1
B_BETTER = -1
TIE = 0


class EvaluationError(ValueError):
    """Raised when an evaluation receives or produces non-finite values."""


@dataclass(frozen=True)
class DifficultyTriplet:
    """Difficulty levels (eta, zeta, gamma), each in [0, 1].

    eta controls diversity-hardness, zeta feasibility-hardness and gamma
    convergence-hardness.
    """

    eta: float
    zeta: float
    gamma: float

    def __post_init__(self):
        for name in ("eta", "zeta", "gamma"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name}={v} outside [0, 1]")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.eta, self.zeta, self.gamma)


@dataclass(frozen=True)
class EvaluatedSolution:
    """A decision vector with its cached objectives and constraint values."""

    x: np.ndarray
    f: np.ndarray
    c: np.ndarray
    violation: float

    @property
    def feasible(self) -> bool:
        return self.violation == 0.0


def overall_violation(c) -> float:
    """Aggregate constraint violation: sum of negative parts of c.

    Zero exactly when every constraint value is >= 0.
    """
    c = np.asarray(c, dtype=float)
    if not np.all(np.isfinite(c)):
        raise EvaluationError("non-finite constraint value")
    return float(-np.minimum(c, 0.0).sum())


def dominates(a, b) -> bool:
    """Pareto dominance for minimization: a <= b everywhere, < somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"objective vectors of different length: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def constrained_dominates(fa, va: float, fb, vb: float) -> bool:
    """CDP dominance on raw (objectives, violation) pairs.

    Feasible beats infeasible; between infeasibles the smaller violation
    wins; between feasibles Pareto dominance decides.
    """
    if va == 0.0 and vb > 0.0:
        return True
    if va > 0.0 and vb > 0.0:
        return va < vb
    if va > 0.0:
        return False
    return dominates(fa, fb)


def cdp_compare(a: EvaluatedSolution, b: EvaluatedSolution) -> int:
    """Three-rule constraint-dominance comparison.

    Returns A_BETTER, B_BETTER or TIE. Non-dominated feasible pairs and
    equal-violation infeasible pairs tie; tie-breaking is left to the caller.
    """
    if constrained_dominates(a.f, a.violation, b.f, b.violation):
        return A_BETTER
    if constrained_dominates(b.f, b.violation, a.f, a.violation):
        return B_BETTER
    return TIE
