"""Circumcentered Douglas-Rachford and companion projection methods."""

from ._circumfeas import (  # noqa: F401
    AffineSubspace,
    Ball,
    DegenerateConfigurationError,
    GenerationFailureError,
    InfeasibleInstanceError,
    InvalidConfigError,
    InvalidInputError,
    UndefinedProjectionError,
    UndefinedRateError,
    UnsupportedCriterionError,
    FriedrichsAngle,
    InstanceMetadata,
    IterationRecord,
    LinearSubspace,
    OrthonormalBasis,
    PerformanceProfile,
    ProblemInstance,
    ProjectableSet,
    RunRecord,
    RunResult,
    Sphere,
    best_approximation,
    canonical_pair,
    cdrm_step,
    cimmino_step,
    circum_cimmino_step,
    circum_map_step,
    circumcenter,
    drm_step,
    empirical_rate,
    fix_t_basis,
    friedrichs_cosine,
    gallery,
    gallery_names,
    gap_distance,
    instance_from_json,
    map_step,
    multiset_cdrm_step,
    orthogonal_complement,
    orthonormalize,
    performance_profile,
    random_pair,
    run_experiment,
    solve,
    subspace_intersection,
    subspace_sum,
)

__all__ = [
    "AffineSubspace",
    "Ball",
    "DegenerateConfigurationError",
    "GenerationFailureError",
    "InfeasibleInstanceError",
    "InvalidConfigError",
    "InvalidInputError",
    "UndefinedProjectionError",
    "UndefinedRateError",
    "UnsupportedCriterionError",
    "FriedrichsAngle",
    "InstanceMetadata",
    "IterationRecord",
    "LinearSubspace",
    "OrthonormalBasis",
    "PerformanceProfile",
    "ProblemInstance",
    "ProjectableSet",
    "RunRecord",
    "RunResult",
    "Sphere",
    "best_approximation",
    "canonical_pair",
    "cdrm_step",
    "cimmino_step",
    "circum_cimmino_step",
    "circum_map_step",
    "circumcenter",
    "drm_step",
    "empirical_rate",
    "fix_t_basis",
    "friedrichs_cosine",
    "gallery",
    "gallery_names",
    "gap_distance",
    "instance_from_json",
    "map_step",
    "multiset_cdrm_step",
    "orthogonal_complement",
    "orthonormalize",
    "performance_profile",
    "random_pair",
    "run_experiment",
    "solve",
    "subspace_intersection",
    "subspace_sum",
]
