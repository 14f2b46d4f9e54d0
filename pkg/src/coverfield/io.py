"""File formats: sample/mask ingestion and raster/plan serialization.

All writers emit deterministic bytes for identical inputs: floats are
rendered with ``repr`` (shortest round-trip form), newlines are always
``\\n``, and no timestamps or environment details leak into outputs.

Formats
-------
samples CSV   header ``x,y,value`` (or ``lon,lat,value`` with an
              equirectangular projection), one sample per row.
mask CSV      ny rows by nx columns of 0/1; row 0 is the y0 row;
              1 = water (in-domain).
raster CSV    one header row with the six grid numbers
              x0,y0,dx,dy,nx,ny, then ny rows by nx values with masked
              nodes as ``NA``.
raster PGM    plain (P2) 8-bit heat map, min-max scaled over water
              nodes; masked nodes are 0.
plan JSON     keys ``stations``, ``tour``, ``tour_length_m``,
              ``covered_fraction`` in that order.
"""

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, TextIO, Tuple, Union

import numpy as np

from .coverage import GridSpec, RasterField
from .errors import (
    EmptyFileError,
    InvalidCellError,
    InvalidPlanError,
    MalformedRowError,
    NonFiniteValueError,
    ShapeMismatchError,
)
from .planning import Station, StationPlan
from .samples import SampleSet

EARTH_RADIUS_M = 6_371_000.0


@dataclass(frozen=True)
class EquirectProjection:
    """Equirectangular lon/lat to planar meters about the dataset centroid.

    ``x = R * cos(ref_lat) * dlon`` and ``y = R * dlat`` (angles in
    radians, offsets from the centroid).  When ``ref_lat_deg`` is None
    the centroid latitude is used.
    """

    ref_lat_deg: Optional[float] = None

    def to_meters(self, lon: np.ndarray, lat: np.ndarray):
        lon_c = float(np.mean(lon))
        lat_c = float(np.mean(lat))
        ref = self.ref_lat_deg if self.ref_lat_deg is not None else lat_c
        x = EARTH_RADIUS_M * math.cos(math.radians(ref)) * np.radians(lon - lon_c)
        y = EARTH_RADIUS_M * np.radians(lat - lat_c)
        return x, y


def _rows(stream: Union[TextIO, Iterable[str]]):
    return csv.reader(stream)


def parse_samples(
    stream: Union[TextIO, Iterable[str]],
    projection: Optional[EquirectProjection] = None,
) -> SampleSet:
    """Read scatter samples from a CSV stream.

    Expects header ``x,y,value``, or ``lon,lat,value`` when a projection
    is given (coordinates are then converted to planar meters).  Row
    numbers in errors are 1-based file rows, the header being row 1.
    """
    expected = ("lon", "lat", "value") if projection else ("x", "y", "value")
    header = None
    xs, ys, values = [], [], []
    row_no = 0
    for row_no, row in enumerate(_rows(stream), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        fields = [cell.strip() for cell in row]
        if header is None:
            header = tuple(f.lower() for f in fields)
            if header != expected:
                raise MalformedRowError(
                    row_no, f"expected header {','.join(expected)}, got {','.join(fields)}"
                )
            continue
        if len(fields) != 3:
            raise MalformedRowError(row_no, f"expected 3 fields, got {len(fields)}")
        try:
            x, y, value = (float(f) for f in fields)
        except ValueError as exc:
            raise MalformedRowError(row_no, str(exc)) from None
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(value)):
            raise NonFiniteValueError(f"row {row_no}: non-finite sample")
        xs.append(x)
        ys.append(y)
        values.append(value)

    if header is None:
        raise EmptyFileError("sample stream is empty")
    if not xs:
        raise EmptyFileError("sample stream has a header but no data rows")

    xs = np.array(xs)
    ys = np.array(ys)
    if projection is not None:
        xs, ys = projection.to_meters(xs, ys)
    return SampleSet.from_arrays(xs, ys, values)


def parse_mask(stream: Union[TextIO, Iterable[str]], grid: GridSpec) -> np.ndarray:
    """Read a 0/1 water mask aligned to ``grid`` (row 0 = y0 row)."""
    rows = []
    for row in _rows(stream):
        if not row or all(not cell.strip() for cell in row):
            continue
        rows.append([cell.strip() for cell in row])
    if len(rows) != grid.ny:
        raise ShapeMismatchError(f"expected {grid.ny} mask rows, got {len(rows)}")
    mask = np.empty(grid.size, dtype=bool)
    for i, cells in enumerate(rows):
        if len(cells) != grid.nx:
            raise ShapeMismatchError(
                f"mask row {i + 1}: expected {grid.nx} columns, got {len(cells)}"
            )
        for j, cell in enumerate(cells):
            if cell == "1":
                mask[i * grid.nx + j] = True
            elif cell == "0":
                mask[i * grid.nx + j] = False
            else:
                raise InvalidCellError(
                    f"mask row {i + 1}, column {j + 1}: expected 0 or 1, got {cell!r}"
                )
    return mask


def _fmt(value: float) -> str:
    return repr(float(value))


def write_raster(raster: RasterField, base_path, units: str = "") -> Tuple[Path, Path, Path]:
    """Write a raster as CSV + plain PGM heat map + legend.

    Returns the three paths (``<base>.csv``, ``<base>.pgm``,
    ``<base>.legend.txt``).  Byte output is deterministic.
    """
    base = Path(base_path)
    grid = raster.grid
    csv_path = Path(str(base) + ".csv")
    pgm_path = Path(str(base) + ".pgm")
    legend_path = Path(str(base) + ".legend.txt")

    with open(csv_path, "w", newline="\n") as fh:
        fh.write(
            ",".join(
                [_fmt(grid.x0), _fmt(grid.y0), _fmt(grid.dx), _fmt(grid.dy),
                 str(grid.nx), str(grid.ny)]
            )
            + "\n"
        )
        for i in range(grid.ny):
            row = raster.values[i * grid.nx : (i + 1) * grid.nx]
            row_mask = raster.mask[i * grid.nx : (i + 1) * grid.nx]
            cells = [
                _fmt(v) if m else "NA" for v, m in zip(row, row_mask)
            ]
            fh.write(",".join(cells) + "\n")

    water = raster.water_values()
    if len(water):
        vmin = float(water.min())
        vmax = float(water.max())
    else:
        vmin = vmax = float("nan")
    span = vmax - vmin
    pixels = np.zeros(grid.size, dtype=int)
    if len(water) and span > 0:
        scaled = (raster.values[raster.mask] - vmin) * (255.0 / span)
        pixels[raster.mask] = np.floor(scaled + 0.5).astype(int)
    with open(pgm_path, "w", newline="\n") as fh:
        fh.write("P2\n")
        fh.write(f"{grid.nx} {grid.ny}\n")
        fh.write("255\n")
        for i in range(grid.ny):
            row = pixels[i * grid.nx : (i + 1) * grid.nx]
            fh.write(" ".join(str(p) for p in row) + "\n")

    with open(legend_path, "w", newline="\n") as fh:
        fh.write(f"min = {_fmt(vmin)}\n")
        fh.write(f"max = {_fmt(vmax)}\n")
        fh.write(f"units = {units}\n")

    return csv_path, pgm_path, legend_path


def read_raster(path) -> RasterField:
    """Read back a raster CSV written by :func:`write_raster`."""
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise EmptyFileError(f"{path} is empty")
    header = rows[0]
    if len(header) != 6:
        raise MalformedRowError(1, f"expected 6 header fields, got {len(header)}")
    x0, y0, dx, dy = (float(cell) for cell in header[:4])
    nx, ny = int(header[4]), int(header[5])
    grid = GridSpec(x0=x0, y0=y0, dx=dx, dy=dy, nx=nx, ny=ny)
    if len(rows) - 1 != ny:
        raise ShapeMismatchError(f"expected {ny} data rows, got {len(rows) - 1}")
    values = np.full(grid.size, np.nan)
    mask = np.zeros(grid.size, dtype=bool)
    for i, row in enumerate(rows[1:]):
        if len(row) != nx:
            raise ShapeMismatchError(
                f"data row {i + 1}: expected {nx} columns, got {len(row)}"
            )
        for j, cell in enumerate(row):
            if cell != "NA":
                values[i * nx + j] = float(cell)
                mask[i * nx + j] = True
    return RasterField(grid=grid, values=values, mask=mask)


def write_plan(plan: StationPlan, path) -> Path:
    """Write a station plan as JSON with a fixed key order."""
    if not plan.stations:
        raise InvalidPlanError("plan has no stations")
    doc = {
        "stations": [
            {"x": s.x, "y": s.y, "radius": s.radius} for s in plan.stations
        ],
        "tour": list(plan.tour),
        "tour_length_m": plan.tour_length,
        "covered_fraction": plan.covered_fraction,
    }
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return path


def write_anomalies(reports, path) -> Path:
    """Write anomaly reports as CSV, one row per screened sample."""
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        fh.write("x,y,value,predicted,residual,z,flagged,reason\n")
        for r in reports:
            fh.write(
                ",".join(
                    [
                        _fmt(r.sample.x),
                        _fmt(r.sample.y),
                        _fmt(r.sample.value),
                        _fmt(r.predicted),
                        _fmt(r.residual),
                        _fmt(r.z_score),
                        "true" if r.flagged else "false",
                        r.reason,
                    ]
                )
                + "\n"
            )
    return path


def read_plan(path) -> StationPlan:
    """Read back a plan JSON written by :func:`write_plan`."""
    with open(path) as fh:
        doc = json.load(fh)
    stations = tuple(
        Station(x=s["x"], y=s["y"], radius=s["radius"]) for s in doc["stations"]
    )
    return StationPlan(
        stations=stations,
        covered_fraction=doc["covered_fraction"],
        tour=tuple(doc["tour"]),
        tour_length=doc["tour_length_m"],
    )
