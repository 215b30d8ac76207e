"""Geodesic lattice swarms: formation building, curvature estimation and online DMD."""

from ._geoswarm import (
    GeoswarmError,
    NumericalError,
    PotentialField,
    OdmdModel,
    eval_potential,
    metric,
    christoffel,
    sectional_curvature,
    gaussian_curvature,
    integrate,
    orthonormal_launch,
    build_formation,
    analyze,
    init_batch,
    update,
    predict,
    run_control,
    parse_config,
    run,
)

__all__ = [
    "GeoswarmError",
    "NumericalError",
    "PotentialField",
    "OdmdModel",
    "eval_potential",
    "metric",
    "christoffel",
    "sectional_curvature",
    "gaussian_curvature",
    "integrate",
    "orthonormal_launch",
    "build_formation",
    "analyze",
    "init_batch",
    "update",
    "predict",
    "run_control",
    "parse_config",
    "run",
]
