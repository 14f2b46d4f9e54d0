"""coverfield: field regression, coverage-radius maps and station planning.

Fits a smoothed biquadratic surface to scattered scalar-field
measurements, derives the sensor coverage-radius field from its
gradient, plans a minimal covering set of survey stations with a short
visiting tour, and flags anomalous readings against the fit.
"""

from .anomaly import AnomalyReport, detect
from .config import PipelineConfig, config_from_dict, load_config
from .coverage import (
    GridSpec,
    RasterField,
    SensorSpec,
    coverage_field,
    coverage_radius_at,
    gradient_magnitude_field,
    region_refine,
)
from .errors import (
    ConfigError,
    CoverfieldError,
    DegenerateDesignError,
    EmptyDomainError,
    EmptyFileError,
    EmptyRegionError,
    GridMismatchError,
    InvalidCellError,
    InvalidPlanError,
    MalformedRowError,
    MaskMismatchError,
    NonFiniteValueError,
    ShapeMismatchError,
    StageError,
    TooFewSamplesError,
)
from .estimator import BiquadraticFieldRegressor
from .fitting import (
    FitReport,
    fit_gradient_descent,
    fit_normal_equations,
    residual_sigma,
)
from .io import (
    EquirectProjection,
    parse_mask,
    parse_samples,
    read_plan,
    read_raster,
    write_anomalies,
    write_plan,
    write_raster,
)
from .planning import (
    Station,
    StationPlan,
    improve_tour_2opt,
    order_tour_nearest_neighbor,
    plan_stations_greedy,
    tour_length,
    verify_coverage,
)
from .samples import SampleSet, ScatterSample
from .surface import BiquadraticSurface, CoordTransform

__version__ = "0.1.0"

__all__ = [
    "AnomalyReport",
    "BiquadraticFieldRegressor",
    "BiquadraticSurface",
    "ConfigError",
    "CoordTransform",
    "CoverfieldError",
    "DegenerateDesignError",
    "EmptyDomainError",
    "EmptyFileError",
    "EmptyRegionError",
    "EquirectProjection",
    "FitReport",
    "GridMismatchError",
    "GridSpec",
    "InvalidCellError",
    "InvalidPlanError",
    "MalformedRowError",
    "MaskMismatchError",
    "NonFiniteValueError",
    "PipelineConfig",
    "RasterField",
    "SampleSet",
    "ScatterSample",
    "SensorSpec",
    "ShapeMismatchError",
    "StageError",
    "Station",
    "StationPlan",
    "TooFewSamplesError",
    "config_from_dict",
    "coverage_field",
    "coverage_radius_at",
    "detect",
    "fit_gradient_descent",
    "fit_normal_equations",
    "gradient_magnitude_field",
    "improve_tour_2opt",
    "load_config",
    "order_tour_nearest_neighbor",
    "parse_mask",
    "parse_samples",
    "plan_stations_greedy",
    "read_plan",
    "read_raster",
    "region_refine",
    "residual_sigma",
    "tour_length",
    "verify_coverage",
    "write_anomalies",
    "write_plan",
    "write_raster",
]
