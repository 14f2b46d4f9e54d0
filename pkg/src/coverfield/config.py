"""Pipeline configuration: TOML loading, defaults and validation.

Every key has a default except the grid extents, which define the
monitoring area and must be stated.  Unknown keys are rejected so typos
fail loudly before any stage runs.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .coverage import GridSpec, SensorSpec
from .errors import ConfigError
from .io import EquirectProjection

DEFAULT_ABS_ERROR = 0.001  # dissolved-oxygen channel resolution, ml/l


@dataclass(frozen=True)
class SensorConfig:
    r_max: Optional[float] = None
    xi: Optional[float] = None
    abs_error: Optional[float] = None
    r_cap: Optional[float] = None  # None: grid diagonal

    def spec(self, grid: GridSpec) -> SensorSpec:
        abs_error = self.abs_error
        if abs_error is None and self.r_max is None and self.xi is None:
            abs_error = DEFAULT_ABS_ERROR
        return SensorSpec(
            r_cap=self.r_cap if self.r_cap is not None else grid.diagonal,
            r_max=self.r_max,
            xi=self.xi,
            abs_error=abs_error,
        )


@dataclass(frozen=True)
class FitConfig:
    learning_rate: Optional[float] = None
    max_iterations: int = 100_000
    tolerance: float = 1e-10
    beta: float = 1.0


@dataclass(frozen=True)
class RefineConfig:
    enabled: bool = False
    factor: int = 2
    bbox: Optional[Tuple[float, float, float, float]] = None  # None: full extent


@dataclass(frozen=True)
class AnomalyConfig:
    k: float = 3.0
    lo: float = -math.inf
    hi: float = math.inf


@dataclass(frozen=True)
class TourConfig:
    start_index: int = 0


@dataclass(frozen=True)
class ProjectionConfig:
    type: str = "none"
    ref_lat: Optional[float] = None

    def projection(self) -> Optional[EquirectProjection]:
        if self.type == "none":
            return None
        return EquirectProjection(ref_lat_deg=self.ref_lat)


@dataclass(frozen=True)
class PipelineConfig:
    grid: GridSpec
    sensor: SensorConfig = field(default_factory=SensorConfig)
    fit: FitConfig = field(default_factory=FitConfig)
    refine: RefineConfig = field(default_factory=RefineConfig)
    anomaly: AnomalyConfig = field(default_factory=AnomalyConfig)
    tour: TourConfig = field(default_factory=TourConfig)
    projection: ProjectionConfig = field(default_factory=ProjectionConfig)


_SECTION_KEYS = {
    "grid": {"x0", "y0", "dx", "dy", "nx", "ny"},
    "sensor": {"r_max", "xi", "abs_error", "r_cap"},
    "fit": {"learning_rate", "max_iterations", "tolerance", "beta"},
    "refine": {"enabled", "factor", "bbox"},
    "anomaly": {"k", "lo", "hi"},
    "tour": {"start_index"},
    "projection": {"type", "ref_lat"},
}


def _check_keys(section: str, table: dict) -> None:
    unknown = set(table) - _SECTION_KEYS[section]
    if unknown:
        raise ConfigError(f"[{section}] unknown key(s): {', '.join(sorted(unknown))}")


def config_from_dict(data: dict) -> PipelineConfig:
    """Build and validate a PipelineConfig from parsed TOML data."""
    unknown = set(data) - set(_SECTION_KEYS)
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")

    grid_table = data.get("grid")
    if grid_table is None:
        raise ConfigError("missing required [grid] section")
    _check_keys("grid", grid_table)
    missing = {"x0", "y0", "dx", "dy", "nx", "ny"} - set(grid_table)
    if missing:
        raise ConfigError(f"[grid] missing required key(s): {', '.join(sorted(missing))}")
    try:
        grid = GridSpec(
            x0=float(grid_table["x0"]),
            y0=float(grid_table["y0"]),
            dx=float(grid_table["dx"]),
            dy=float(grid_table["dy"]),
            nx=int(grid_table["nx"]),
            ny=int(grid_table["ny"]),
        )
    except ValueError as exc:
        raise ConfigError(f"[grid] {exc}") from None

    def section(name, cls, **casts):
        table = data.get(name, {})
        _check_keys(name, table)
        kwargs = {}
        for key, value in table.items():
            cast = casts.get(key)
            kwargs[key] = cast(value) if cast else value
        try:
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"[{name}] {exc}") from None

    sensor = section(
        "sensor", SensorConfig,
        r_max=float, xi=float, abs_error=float, r_cap=float,
    )
    fit = section(
        "fit", FitConfig,
        learning_rate=float, max_iterations=int, tolerance=float, beta=float,
    )
    refine = section(
        "refine", RefineConfig,
        factor=int, bbox=lambda b: tuple(float(v) for v in b),
    )
    anomaly = section("anomaly", AnomalyConfig, k=float, lo=float, hi=float)
    tour = section("tour", TourConfig, start_index=int)
    projection = section("projection", ProjectionConfig, ref_lat=float)

    config = PipelineConfig(
        grid=grid, sensor=sensor, fit=fit, refine=refine,
        anomaly=anomaly, tour=tour, projection=projection,
    )
    validate_config(config)
    return config


def load_config(path) -> PipelineConfig:
    """Load and validate a TOML pipeline configuration."""
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return config_from_dict(data)


def validate_config(config: PipelineConfig) -> None:
    """Check every stage precondition that is decidable before execution."""
    sensor = config.sensor
    if sensor.abs_error is not None:
        if not sensor.abs_error > 0:
            raise ConfigError("[sensor] abs_error must be strictly positive")
    elif (sensor.r_max is None) != (sensor.xi is None):
        raise ConfigError("[sensor] r_max and xi must be given together")
    elif sensor.r_max is not None:
        if not sensor.r_max > 0:
            raise ConfigError("[sensor] r_max must be strictly positive")
        if not 0 < sensor.xi < 1:
            raise ConfigError("[sensor] xi must lie strictly between 0 and 1")
    if sensor.r_cap is not None and not sensor.r_cap > 0:
        raise ConfigError("[sensor] r_cap must be strictly positive")

    fit = config.fit
    if fit.learning_rate is not None and not fit.learning_rate > 0:
        raise ConfigError("[fit] learning_rate must be strictly positive")
    if fit.max_iterations < 1:
        raise ConfigError("[fit] max_iterations must be at least 1")
    if not fit.tolerance > 0:
        raise ConfigError("[fit] tolerance must be strictly positive")
    if not fit.beta > 0:
        raise ConfigError("[fit] beta must be strictly positive")

    refine = config.refine
    if refine.enabled:
        if refine.factor < 2:
            raise ConfigError("[refine] factor must be at least 2")
        if refine.bbox is not None:
            if len(refine.bbox) != 4:
                raise ConfigError("[refine] bbox must be [x_lo, y_lo, x_hi, y_hi]")
            x_lo, y_lo, x_hi, y_hi = refine.bbox
            if x_lo >= x_hi or y_lo >= y_hi:
                raise ConfigError("[refine] bbox must have positive extent")

    anomaly = config.anomaly
    if not anomaly.k > 0:
        raise ConfigError("[anomaly] k must be strictly positive")
    if not anomaly.lo < anomaly.hi:
        raise ConfigError("[anomaly] lo must be below hi")

    if config.tour.start_index < 0:
        raise ConfigError("[tour] start_index must be non-negative")

    if config.projection.type not in ("none", "equirect"):
        raise ConfigError("[projection] type must be 'none' or 'equirect'")
