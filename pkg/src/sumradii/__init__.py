"""Approximation algorithms for clustering under sum-of-radii,
sum-of-diameters, and sum-of-squared-radii objectives, with an exact
rational LP engine and brute-force oracles for verification."""

from .audit import Audit, Check
from .bipoint import BiPoint, build_primal, delta, find_bipoint
from .combine import (
    ALPHA,
    BETA,
    OBJECTIVES,
    CombineResult,
    MergePlan,
    choose_groups,
    combine_solutions,
    form_groups,
    merge_bound_msr,
    merge_bound_mssr,
    min_enclosing_ball,
)
from .generate import euclidean_instance, make_instance, random_metric_instance, suite
from .kcenter import KCenterResult, farthest_first
from .lp import LinearProgram, LPResult, linprog, solve as lp_solve
from .metric import (
    Ball,
    Instance,
    InvalidInstance,
    TriangleViolation,
    ball_members,
    candidate_balls,
    cost,
    covers,
    diameter,
    instance_from_json,
    instance_to_json,
    rationalize_euclidean,
    validate_instance,
)
from .oracle import (
    InstanceTooLarge,
    opt_ball_cover,
    opt_kcenter,
    opt_partition_msd,
)
from .rational import Rat, format_rat, parse_rat, rat, rat_to_decimal
from .solver import (
    MSD_RATIO,
    MSR_RATIO,
    MSSR_RATIO,
    GuessContext,
    SolveResult,
    brute_small,
    enumerate_guesses,
    precheck,
    solve,
    witness_guess,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
