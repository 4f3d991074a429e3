"""Difficulty-adjustable, objective-scalable constrained multi-objective benchmarks."""

from .core import (
    A_BETTER,
    B_BETTER,
    TIE,
    DifficultyTriplet,
    EvaluatedSolution,
    cdp_compare,
    dominates,
    overall_violation,
)
from .problems import constraint_count, make_problem, unconstrained_pf_point
from .toolkit import (
    EllipseParams,
    GeneratorSpec,
    ProblemInstance,
    TripletParams,
    assemble_problem,
    triplet_to_params,
    type1_constraint,
    type2_constraint,
    type3_ellipse_constraint,
    type3_sphere_constraints,
)
from .metrics import (
    EmptyFrontError,
    ReferenceFront,
    feasible_ratio_mc,
    generate_reference_front,
    get_reference_front,
    igd,
    nondominated_filter,
)
from .algorithms import (
    AlgoConfig,
    Population,
    crowding_distance,
    default_config,
    generate_weight_vectors,
    moead_cdp_run,
    nsga2_cdp_run,
    polynomial_mutation,
    sbx_crossover,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
