"""End-to-end pipeline: fit, rasterize, plan, detect, serialize.

Stages run in a fixed order and every failure is wrapped in a
:class:`StageError` naming the stage, so the CLI can report exactly
where a run broke.  All artifacts are byte-deterministic.
"""

import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import io
from .anomaly import detect
from .config import PipelineConfig
from .coverage import (
    GridSpec,
    coverage_field,
    gradient_magnitude_field,
    region_refine,
)
from .errors import CoverfieldError, StageError
from .fitting import fit_gradient_descent, residual_sigma
from .planning import plan_stations_greedy
from .samples import SampleSet
from .surface import BiquadraticSurface

GRADIENT_BASE = "gradient"
COVERAGE_BASE = "coverage"
PLAN_NAME = "plan.json"
FIT_REPORT_NAME = "fit.txt"
ANOMALIES_NAME = "anomalies.csv"


def _run_stage(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except (CoverfieldError, OSError, ValueError) as exc:
        raise StageError(stage, exc) from exc


def load_samples(config: PipelineConfig, samples_path) -> SampleSet:
    def _parse():
        with open(samples_path, newline="") as fh:
            return io.parse_samples(fh, projection=config.projection.projection())

    return _run_stage("parse_samples", _parse)


def fit_surface(config: PipelineConfig, samples: SampleSet):
    return _run_stage(
        "fit",
        fit_gradient_descent,
        samples,
        learning_rate=config.fit.learning_rate,
        max_iterations=config.fit.max_iterations,
        tolerance=config.fit.tolerance,
        beta=config.fit.beta,
    )


def effective_grid(config: PipelineConfig) -> GridSpec:
    grid = config.grid
    if not config.refine.enabled:
        return grid
    bbox = config.refine.bbox
    if bbox is None:
        bbox = (grid.x0, grid.y0, grid.x_max, grid.y_max)
    return _run_stage("refine", region_refine, grid, bbox, config.refine.factor)


def load_mask(grid: GridSpec, mask_path) -> np.ndarray:
    if mask_path is None:
        return np.ones(grid.size, dtype=bool)

    def _parse():
        with open(mask_path, newline="") as fh:
            return io.parse_mask(fh, grid)

    return _run_stage("parse_mask", _parse)


def write_fit_report(surface: BiquadraticSurface, report, path) -> Path:
    """Write the fitted coefficients (raw frame) and fit statistics."""
    raw = surface.raw_coefficients()
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        for idx, coeff in enumerate(raw):
            fh.write(f"a{idx} = {repr(float(coeff))}\n")
        fh.write(f"F = {repr(report.final_residual)}\n")
        fh.write(f"rmse = {repr(report.rmse)}\n")
        fh.write(f"iterations = {report.iterations}\n")
        fh.write(f"converged = {'true' if report.converged else 'false'}\n")
    return path


def run_fit(config, samples_path, out_dir) -> None:
    samples = load_samples(config, samples_path)
    surface, report = fit_surface(config, samples)
    _run_stage(
        "write_fit_report", write_fit_report, surface, report,
        Path(out_dir) / FIT_REPORT_NAME,
    )


def run_coverage_map(config, samples_path, mask_path, out_dir) -> None:
    samples = load_samples(config, samples_path)
    surface, _ = fit_surface(config, samples)
    grid = effective_grid(config)
    mask = load_mask(grid, mask_path)
    gradient = _run_stage("gradient_field", gradient_magnitude_field, surface, grid, mask)
    coverage = _run_stage(
        "coverage_field", coverage_field, surface, config.sensor.spec(grid), grid, mask
    )
    out = Path(out_dir)
    _run_stage("write_raster", io.write_raster, gradient, out / GRADIENT_BASE,
               units="field units / m")
    _run_stage("write_raster", io.write_raster, coverage, out / COVERAGE_BASE,
               units="m")


def run_plan(config, samples_path, mask_path, out_dir) -> None:
    samples = load_samples(config, samples_path)
    surface, _ = fit_surface(config, samples)
    grid = effective_grid(config)
    mask = load_mask(grid, mask_path)
    coverage = _run_stage(
        "coverage_field", coverage_field, surface, config.sensor.spec(grid), grid, mask
    )
    plan = _run_stage(
        "plan", plan_stations_greedy, coverage, tour_start=config.tour.start_index
    )
    _run_stage("write_plan", io.write_plan, plan, Path(out_dir) / PLAN_NAME)


def run_detect(config, samples_path, detect_samples_path, out_dir) -> None:
    samples = load_samples(config, samples_path)
    surface, _ = fit_surface(config, samples)
    sigma = _run_stage("detect", residual_sigma, surface, samples)

    def _parse():
        with open(detect_samples_path, newline="") as fh:
            return io.parse_samples(fh, projection=config.projection.projection())

    new_samples = _run_stage("parse_samples", _parse)
    reports = _run_stage(
        "detect", detect, new_samples, surface, sigma,
        k=config.anomaly.k, lo=config.anomaly.lo, hi=config.anomaly.hi,
    )
    _run_stage(
        "write_anomalies", io.write_anomalies, reports,
        Path(out_dir) / ANOMALIES_NAME,
    )


def run_pipeline(
    config: PipelineConfig,
    samples_path,
    mask_path,
    out_dir,
    detect_samples_path: Optional[str] = None,
) -> int:
    """Run every stage, writing all artifacts into ``out_dir``.

    Returns 0 on success; on failure prints a diagnostic naming the
    failing stage to stderr and returns 1.
    """
    try:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)

        samples = load_samples(config, samples_path)
        surface, report = fit_surface(config, samples)
        _run_stage(
            "write_fit_report", write_fit_report, surface, report,
            out / FIT_REPORT_NAME,
        )

        grid = effective_grid(config)
        mask = load_mask(grid, mask_path)
        gradient = _run_stage(
            "gradient_field", gradient_magnitude_field, surface, grid, mask
        )
        sensor = config.sensor.spec(grid)
        coverage = _run_stage(
            "coverage_field", coverage_field, surface, sensor, grid, mask
        )
        _run_stage("write_raster", io.write_raster, gradient, out / GRADIENT_BASE,
                   units="field units / m")
        _run_stage("write_raster", io.write_raster, coverage, out / COVERAGE_BASE,
                   units="m")

        plan = _run_stage(
            "plan", plan_stations_greedy, coverage, tour_start=config.tour.start_index
        )
        _run_stage("write_plan", io.write_plan, plan, out / PLAN_NAME)

        if detect_samples_path is not None:
            sigma = _run_stage("detect", residual_sigma, surface, samples)

            def _parse():
                with open(detect_samples_path, newline="") as fh:
                    return io.parse_samples(
                        fh, projection=config.projection.projection()
                    )

            new_samples = _run_stage("parse_samples", _parse)
            reports = _run_stage(
                "detect", detect, new_samples, surface, sigma,
                k=config.anomaly.k, lo=config.anomaly.lo, hi=config.anomaly.hi,
            )
            _run_stage(
                "write_anomalies", io.write_anomalies, reports,
                out / ANOMALIES_NAME,
            )
    except StageError as exc:
        print(f"coverfield: {exc}", file=sys.stderr)
        return 1
    return 0
