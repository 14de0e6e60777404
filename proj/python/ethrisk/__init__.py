"""Python bindings for the ethrisk planning and risk library."""

from ._core import (  # noqa: F401
    DegenerateHorizon,
    EmptyRiskSet,
    Error,
    ParseError,
    PoseOffCorridor,
    ReferencePath,
    SingularCovariance,
    ValidationError,
    bayes_cost,
    dynamic_priority,
    effective_collision_speed,
    equality_cost,
    ethical_cost,
    harm,
    lagrange_update,
    mahalanobis_probability,
    make_plan,
    maximin_cost,
    run_episode,
    sat_overlap,
    selfish_cost,
    solve_lateral,
    solve_longitudinal,
    validate_scenario,
)
