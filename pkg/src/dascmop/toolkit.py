"""Construction toolkit for difficulty-adjustable constrained problems.

Three parameterized constraint families are combined with a shape+distance
objective decomposition:

* Type-I  - sin/cos bounds on the shape variables, segmenting the front
  (diversity-hardness, level eta).
* Type-II - band constraints d <= beta <= e on the distance functions
  (feasibility-hardness, level zeta).
* Type-III - exclusion regions in objective space that block convergence
  (convergence-hardness, level gamma).

A problem is assembled from a GeneratorSpec plus a DifficultyTriplet; the
triplet maps onto the internal constraint parameters (b, d, e, r).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import DifficultyTriplet, EvaluatedSolution, overall_violation

# Constraint value substituted for a disabled family so the constraint
# vector keeps the same length across the whole triplet grid.
INACTIVE_VALUE = 1.0


@dataclass(frozen=True)
class TripletParams:
    """Internal constraint parameters derived from a difficulty triplet."""

    b: float
    d: float
    e: float
    r: float
    type1_active: bool
    type2_active: bool
    type3_active: bool


def triplet_to_params(t: DifficultyTriplet, d: float = 0.5) -> TripletParams:
    """Map (eta, zeta, gamma) onto (b, d, e, r) and the active-family flags.

    b = 2*eta - 1, zeta = exp(d - e) so e = d - ln(zeta), and r = gamma / 2.
    A zero triplet component disables the corresponding family outright.
    """
    if d < 0:
        raise ValueError(f"d must be nonnegative, got {d}")
    b = 2.0 * t.eta - 1.0
    e = d - math.log(t.zeta) if t.zeta > 0 else math.inf
    r = t.gamma / 2.0
    return TripletParams(
        b=b,
        d=d,
        e=e,
        r=r,
        type1_active=t.eta > 0,
        type2_active=t.zeta > 0,
        type3_active=t.gamma > 0,
    )


def type1_constraint(x_k, k: int, a: float, b: float):
    """Segmenting constraint on shape variable x_k: sin for odd k, cos for even."""
    x_k = np.asarray(x_k, dtype=float)
    if k % 2 == 1:
        return np.sin(a * np.pi * x_k) - b
    return np.cos(a * np.pi * x_k) - b


def type2_constraint(beta_p, d: float, e: float):
    """Band constraint (e - beta)(beta - d); nonnegative iff beta in [d, e]."""
    beta_p = np.asarray(beta_p, dtype=float)
    return (e - beta_p) * (beta_p - d)


@dataclass(frozen=True)
class EllipseParams:
    """A rotated ellipse exclusion region in two-objective space."""

    p: float
    q: float
    a2: float
    b2: float
    theta: float


def type3_ellipse_constraint(f, ep: EllipseParams, r: float):
    """Expanded rotated-ellipse form; nonnegative outside the blocked region.

    f is one objective pair or an (N, 2) array of pairs.
    """
    f = np.asarray(f, dtype=float)
    u = f[..., 0] - ep.p
    v = f[..., 1] - ep.q
    ct, st = math.cos(ep.theta), math.sin(ep.theta)
    return (u * ct - v * st) ** 2 / ep.a2 + (u * st + v * ct) ** 2 / ep.b2 - r


def ellipse_matrix(ep: EllipseParams) -> np.ndarray:
    """Quadratic-form matrix of the ellipse constraint (rotation + stretch)."""
    ct2 = math.cos(ep.theta) ** 2
    st2 = math.sin(ep.theta) ** 2
    s2t = math.sin(2 * ep.theta)
    return np.array(
        [
            [ct2 / ep.a2 + st2 / ep.b2, -s2t / ep.a2],
            [s2t / ep.b2, ct2 / ep.b2 + st2 / ep.a2],
        ]
    )


def type3_ellipse_constraint_matrix(f, ep: EllipseParams, r: float):
    """Matrix form (F - H)^T S (F - H) - r of the ellipse constraint.

    Agrees with type3_ellipse_constraint to machine precision; kept as an
    independent route for cross-checking.
    """
    f = np.asarray(f, dtype=float)
    h = np.array([ep.p, ep.q])
    s = ellipse_matrix(ep)
    z = f - h
    return np.einsum("...i,ij,...j->...", z, s, z) - r


def type3_sphere_constraints(f, r: float):
    """Sphere exclusion regions for three objectives, per unit-corner centers.

    Returns four values: spheres centered at the three unit vectors plus one
    at the simplex centroid. These use r**2 where the two-objective ellipse
    family uses r; implemented exactly as defined.
    """
    f = np.asarray(f, dtype=float)
    out = np.empty(f.shape[:-1] + (4,))
    total_sq = (f**2).sum(axis=-1)
    for k in range(3):
        out[..., k] = total_sq - f[..., k] ** 2 + (f[..., k] - 1.0) ** 2 - r**2
    c = 1.0 / math.sqrt(3.0)
    out[..., 3] = ((f - c) ** 2).sum(axis=-1) - r**2
    return out


# The nine ellipse centers used by the named two-objective instances.
DEFAULT_ELLIPSES: tuple[EllipseParams, ...] = tuple(
    EllipseParams(p=p, q=q, a2=0.3, b2=1.2, theta=-0.25 * math.pi)
    for p, q in zip(
        [0, 1, 0, 1, 2, 0, 1, 2, 3],
        [1.5, 0.5, 2.5, 1.5, 0.5, 3.5, 2.5, 1.5, 0.5],
    )
)


@dataclass(frozen=True)
class GeneratorSpec:
    """Everything needed to assemble a problem, short of the difficulty triplet.

    shape maps the first m-1 variables (as an (N, m-1) array) to the (N, m)
    front-surface coordinates; distance maps the full (N, n) decision matrix
    to (N, m) nonnegative offsets, one per objective. The first n_type2
    distance columns receive band constraints.
    """

    m: int
    n: int
    n_type1: int
    n_type2: int
    shape: Callable[[np.ndarray], np.ndarray]
    distance: Callable[[np.ndarray], np.ndarray]
    ellipses: Sequence[EllipseParams] = field(default=DEFAULT_ELLIPSES)
    a: float = 20.0
    d: float = 0.5

    @property
    def n_type3(self) -> int:
        return 4 if self.m == 3 else len(self.ellipses)

    def validate(self) -> None:
        if self.m < 2:
            raise ValueError("at least two objectives required")
        if self.n < self.m:
            raise ValueError(f"n={self.n} smaller than m={self.m}")
        if not (1 <= self.n_type1 <= self.m - 1):
            raise ValueError(f"Type-I count {self.n_type1} outside 1..{self.m - 1}")
        if not (1 <= self.n_type2 <= self.m):
            raise ValueError(f"Type-II count {self.n_type2} outside 1..{self.m}")
        if self.n_type3 < 1:
            raise ValueError("at least one Type-III region required")
        if self.m not in (2, 3):
            raise ValueError("Type-III regions are defined for m = 2 or 3")


class ProblemInstance:
    """An assembled problem: objectives, bounded domain, and constraint stack.

    Immutable after construction; evaluation is pure and deterministic.
    Constraint order is fixed Type-I, Type-II, Type-III, and disabled
    families keep their slots with a constant satisfied value.
    """

    def __init__(self, spec: GeneratorSpec, triplet: DifficultyTriplet, name: str = "custom", pid: int | None = None):
        spec.validate()
        self.spec = spec
        self.triplet = triplet
        self.params = triplet_to_params(triplet, spec.d)
        self.name = name
        self.pid = pid
        self.m = spec.m
        self.n = spec.n
        self.n_constraints = spec.n_type1 + spec.n_type2 + spec.n_type3

    def __repr__(self):
        t = self.triplet
        return f"<{self.name} m={self.m} n={self.n} triplet=({t.eta}, {t.zeta}, {t.gamma})>"

    def pf_shape(self, s: np.ndarray) -> np.ndarray:
        """Front-surface points for shape parameters s, an (N, m-1) array."""
        s = np.atleast_2d(np.asarray(s, dtype=float))
        return self.spec.shape(s)

    def type3_values(self, f: np.ndarray) -> np.ndarray:
        """Type-III constraint values at objective points f, shape (N, Q)."""
        f = np.atleast_2d(np.asarray(f, dtype=float))
        r = self.params.r
        if self.m == 3:
            return type3_sphere_constraints(f, r)
        return np.column_stack([type3_ellipse_constraint(f, ep, r) for ep in self.spec.ellipses])

    def evaluate_batch(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Objectives and constraints for an (N, n) batch of decision vectors."""
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.n:
            raise ValueError(f"expected (N, {self.n}) decision matrix, got {x.shape}")
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise ValueError("decision variable outside [0, 1]; clip before evaluating")
        spec, p = self.spec, self.params

        alpha = spec.shape(x[:, : self.m - 1])
        beta = spec.distance(x)
        f = alpha + beta

        c = np.empty((x.shape[0], self.n_constraints))
        for k in range(spec.n_type1):
            c[:, k] = (
                type1_constraint(x[:, k], k + 1, spec.a, p.b)
                if p.type1_active
                else INACTIVE_VALUE
            )
        for j in range(spec.n_type2):
            c[:, spec.n_type1 + j] = (
                type2_constraint(beta[:, j], p.d, p.e)
                if p.type2_active
                else INACTIVE_VALUE
            )
        off = spec.n_type1 + spec.n_type2
        if p.type3_active:
            c[:, off:] = self.type3_values(f)
        else:
            c[:, off:] = INACTIVE_VALUE
        return f, c

    def evaluate(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Objectives and constraints for a single decision vector."""
        f, c = self.evaluate_batch(np.asarray(x, dtype=float).reshape(1, -1))
        return f[0], c[0]

    def evaluate_solution(self, x) -> EvaluatedSolution:
        x = np.asarray(x, dtype=float)
        f, c = self.evaluate(x)
        return EvaluatedSolution(x=x, f=f, c=c, violation=overall_violation(c))


def assemble_problem(spec: GeneratorSpec, triplet: DifficultyTriplet, name: str = "custom", pid: int | None = None) -> ProblemInstance:
    """Build a ProblemInstance from a generator spec and a difficulty triplet."""
    return ProblemInstance(spec, triplet, name=name, pid=pid)
