"""Quantile-based skewness: point estimates, delta-method intervals, coverage
simulations, and an analytic distribution zoo."""

from .distributions import (
    Beta,
    ChiSquare,
    DistributionSpec,
    Exponential,
    FisherF,
    Gamma,
    LogNormal,
    Normal,
    ParetoII,
    Weibull,
    parse_distribution,
)
from .errors import (
    DegenerateScaleError,
    MissingProbabilityError,
    NumericalError,
    QuantileDensityError,
    SkewkitError,
    UnsupportedMeasureError,
)
from .inference import (
    DifferenceEstimate,
    Estimate,
    IntervalEstimate,
    difference_interval,
    interval,
    point_estimate,
    z_quantile,
)
from .quantiles import (
    BandwidthRule,
    SortedSample,
    default_bandwidth,
    quantile_density_estimate,
    quantile_type8,
)
from .simulation import CoverageReport, SimConfig, coverage_standard_error, run_coverage
from .skewness import (
    Direction,
    MeasureKind,
    QuantileGrid,
    SkewMeasure,
    build_grid,
    estimate_auc,
    estimate_b3,
    estimate_pointwise,
    mean_skew,
    midpoint_probs,
    parse_measure,
    population_measure,
)

__version__ = "0.1.0"

__all__ = [
    "Beta", "ChiSquare", "DistributionSpec", "Exponential", "FisherF", "Gamma",
    "LogNormal", "Normal", "ParetoII", "Weibull", "parse_distribution",
    "SkewkitError", "DegenerateScaleError", "QuantileDensityError",
    "MissingProbabilityError", "UnsupportedMeasureError", "NumericalError",
    "SortedSample", "BandwidthRule", "quantile_type8", "default_bandwidth",
    "quantile_density_estimate",
    "Direction", "MeasureKind", "SkewMeasure", "QuantileGrid", "parse_measure",
    "midpoint_probs", "build_grid", "estimate_pointwise", "estimate_auc",
    "estimate_b3", "mean_skew", "population_measure",
    "Estimate", "IntervalEstimate", "DifferenceEstimate", "interval",
    "difference_interval", "point_estimate", "z_quantile",
    "SimConfig", "CoverageReport", "run_coverage", "coverage_standard_error",
    "__version__",
]
