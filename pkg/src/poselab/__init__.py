"""Desk-scale laboratory for the three-pose planar pose-graph problem.

Builds benchmark problems, eliminates positions in closed form, analyzes
the geodesic and chordal heading costs (profiles, minima catalogs,
stationary-point enumeration), and runs region-of-attraction sweeps.
"""

from .angles import chordal_err_sq, geodesic_err, rot2, wrap
from .chordal import (
    CriticalPoint,
    anchor_aligned,
    critical_points_antipodal,
    critical_points_numeric,
    critical_points_perfect,
    reduced_chordal_cost,
    reduced_chordal_grad,
    reduced_chordal_hess,
)
from .geodesic import (
    GeodesicMinimum,
    curvature_case,
    enumerate_1d_minima,
    geodesic_minima_catalog,
    profile_cost,
    reduced_geodesic_cost,
    reduced_geodesic_grad,
    region_of,
)
from .optimizer import BatchMinimizeResult, MinimizeOptions, MinimizeResult, minimize, minimize_batch
from .problem import (
    DEFAULT_SPLIT,
    LOOP_SPLIT,
    BenchmarkProblem,
    GroundTruth,
    InvalidProblemError,
    MeasurementSet,
    apply_orientation_mismatch,
    benchmark_problem,
    custom_problem,
    load_problem,
    measurements_from_ground_truth,
    mismatch,
    save_problem,
)
from .reduction import (
    DegenerateProblemError,
    ReducedModel,
    SingularProblemError,
    build_reduced_model,
    eliminated_position_cost,
    full_chordal_cost,
    full_geodesic_cost,
    gls_solve,
    positions_star,
)
from .sweep import SweepConfig, SweepResult, catalog_for, run_sweep, summarize
from .version import __version__

__all__ = [
    "BatchMinimizeResult",
    "BenchmarkProblem",
    "CriticalPoint",
    "DEFAULT_SPLIT",
    "DegenerateProblemError",
    "LOOP_SPLIT",
    "GeodesicMinimum",
    "GroundTruth",
    "InvalidProblemError",
    "MeasurementSet",
    "MinimizeOptions",
    "MinimizeResult",
    "ReducedModel",
    "SingularProblemError",
    "SweepConfig",
    "SweepResult",
    "__version__",
    "anchor_aligned",
    "apply_orientation_mismatch",
    "benchmark_problem",
    "build_reduced_model",
    "catalog_for",
    "chordal_err_sq",
    "critical_points_antipodal",
    "critical_points_numeric",
    "critical_points_perfect",
    "curvature_case",
    "custom_problem",
    "eliminated_position_cost",
    "enumerate_1d_minima",
    "full_chordal_cost",
    "full_geodesic_cost",
    "geodesic_err",
    "geodesic_minima_catalog",
    "gls_solve",
    "load_problem",
    "measurements_from_ground_truth",
    "minimize",
    "minimize_batch",
    "mismatch",
    "positions_star",
    "profile_cost",
    "reduced_chordal_cost",
    "reduced_chordal_grad",
    "reduced_chordal_hess",
    "reduced_geodesic_cost",
    "reduced_geodesic_grad",
    "region_of",
    "rot2",
    "run_sweep",
    "save_problem",
    "summarize",
    "wrap",
]
