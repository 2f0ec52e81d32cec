"""Magnitude of finite metric spaces, with exact line and pixel oracles.

The core pipeline: build or validate a metric space (spaces), form the
similarity matrix and solve for the weighting (engine). Around it sit
exact closed forms for subsets of the real line (lines), exact rational
machinery for unions of grid cells and convex bodies in the taxicab plane
(pixels), a maximum-diversity optimizer with growth-based dimension
estimates (diversity), and Euclidean ball and sphere formulas (euclid).
Hot kernels run through numba when available; set MAGNITUDE_BACKEND=numpy
to force the pure-numpy fallback (see _backend).
"""

__version__ = "0.1.0"

from ._backend import backend_name
from .engine import (
    DefinitenessReport,
    MagnitudeFunctionSample,
    MonotonicityViolation,
    RefinementSample,
    SimilarityMatrix,
    UndefinedMagnitude,
    WeightingResult,
    approximate_compact_magnitude,
    definiteness_report,
    magnitude,
    magnitude_function,
    similarity_matrix,
    solve_weighting,
    speyer_magnitude,
)
from .spaces import (
    FiniteMetricSpace,
    MetricError,
    SpaceSpec,
    TriangleViolation,
    cantor_endpoints,
    generate_space,
    graph_metric,
    l1_product,
    lp_grid,
    points_on_line,
    scale_space,
    validate_metric,
)

__all__ = [
    "__version__",
    "backend_name",
    "DefinitenessReport",
    "FiniteMetricSpace",
    "MagnitudeFunctionSample",
    "MetricError",
    "MonotonicityViolation",
    "RefinementSample",
    "SimilarityMatrix",
    "SpaceSpec",
    "TriangleViolation",
    "UndefinedMagnitude",
    "WeightingResult",
    "approximate_compact_magnitude",
    "cantor_endpoints",
    "definiteness_report",
    "generate_space",
    "graph_metric",
    "l1_product",
    "lp_grid",
    "magnitude",
    "magnitude_function",
    "points_on_line",
    "scale_space",
    "similarity_matrix",
    "solve_weighting",
    "speyer_magnitude",
    "validate_metric",
]
