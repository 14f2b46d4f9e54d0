"""Coverage-radius and gradient-magnitude rasters over a masked grid.

A point measurement is informative within the distance over which the
field changes by one sensor absolute error, so the coverage (visibility)
radius at a point is::

    R(x, y) = E / |grad f(x, y)|

with E the sensor absolute error (either given directly or as
``r_max * xi``, measuring-range limit times relative channel error).
Where the gradient vanishes the radius is capped at ``r_cap`` instead of
diverging.  Land nodes are excluded by the mask but never shrink water
coverage: obstacles and coastline do not affect coverage areas.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptyRegionError, MaskMismatchError
from .surface import BiquadraticSurface
from .validation import readonly


@dataclass(frozen=True)
class SensorSpec:
    """Measuring-channel error model and radius cap.

    Either give ``abs_error`` directly, or give the pair
    (``r_max``, ``xi``) from which the absolute error is
    ``r_max * xi``.  ``abs_error`` wins when both are present.
    """

    r_cap: float
    r_max: Optional[float] = None
    xi: Optional[float] = None
    abs_error: Optional[float] = None

    def __post_init__(self):
        if not self.r_cap > 0:
            raise ValueError("r_cap must be strictly positive")
        if self.abs_error is not None:
            if not self.abs_error > 0:
                raise ValueError("abs_error must be strictly positive")
        else:
            if self.r_max is None or self.xi is None:
                raise ValueError("need either abs_error or both r_max and xi")
            if not self.r_max > 0:
                raise ValueError("r_max must be strictly positive")
            if not 0 < self.xi < 1:
                raise ValueError("xi must lie strictly between 0 and 1")

    @property
    def absolute_error(self) -> float:
        """Effective absolute error E in field units."""
        if self.abs_error is not None:
            return self.abs_error
        return self.r_max * self.xi


@dataclass(frozen=True)
class GridSpec:
    """Regular grid: origin, node spacing and node counts.

    Node (row i, col j) sits at ``(x0 + j*dx, y0 + i*dy)``; flattened
    rasters are row-major with row 0 at y0.
    """

    x0: float
    y0: float
    dx: float
    dy: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError("grid spacing must be strictly positive")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 nodes per axis")

    @property
    def size(self) -> int:
        return self.nx * self.ny

    @property
    def x_max(self) -> float:
        return self.x0 + (self.nx - 1) * self.dx

    @property
    def y_max(self) -> float:
        return self.y0 + (self.ny - 1) * self.dy

    @property
    def diagonal(self) -> float:
        """Length of the grid extent diagonal (the default radius cap)."""
        return math.hypot((self.nx - 1) * self.dx, (self.ny - 1) * self.dy)

    def node_xs(self) -> np.ndarray:
        return self.x0 + np.arange(self.nx) * self.dx

    def node_ys(self) -> np.ndarray:
        return self.y0 + np.arange(self.ny) * self.dy

    def node_coords(self):
        """Flattened row-major node coordinates, each of length nx*ny."""
        xs, ys = np.meshgrid(self.node_xs(), self.node_ys())
        return xs.ravel(), ys.ravel()

    def node_index(self, x: float, y: float) -> Optional[int]:
        """Row-major index of the node at (x, y), or None if off-node."""
        j = (x - self.x0) / self.dx
        i = (y - self.y0) / self.dy
        ji, ii = round(j), round(i)
        if abs(j - ji) > 1e-9 or abs(i - ii) > 1e-9:
            return None
        if not (0 <= ji < self.nx and 0 <= ii < self.ny):
            return None
        return ii * self.nx + ji


@dataclass(frozen=True)
class RasterField:
    """Row-major node values over a grid, with a water/land mask.

    Masked-out (land) nodes carry NaN and are excluded from statistics.
    """

    grid: GridSpec
    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        mask = np.asarray(self.mask, dtype=bool).ravel()
        if len(values) != self.grid.size or len(mask) != self.grid.size:
            raise MaskMismatchError(
                f"raster length {len(values)}/{len(mask)} does not match "
                f"grid size {self.grid.size}"
            )
        object.__setattr__(self, "values", readonly(values))
        object.__setattr__(self, "mask", readonly(mask))

    def water_values(self) -> np.ndarray:
        return self.values[self.mask]

    def water_indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)


def _check_mask(grid: GridSpec, mask) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool).ravel()
    if len(mask) != grid.size:
        raise MaskMismatchError(
            f"mask length {len(mask)} does not match grid size {grid.size}"
        )
    return mask


def coverage_radius_at(
    surface: BiquadraticSurface, sensor: SensorSpec, x: float, y: float
) -> float:
    """Coverage (visibility) radius at one point, in meters.

    ``min(r_cap, E / |grad f|)``; the cap also applies where the
    gradient is exactly zero.
    """
    gx, gy = surface.gradient_smoothed(x, y)
    magnitude = math.hypot(gx, gy)
    if magnitude == 0.0:
        return sensor.r_cap
    return min(sensor.r_cap, sensor.absolute_error / magnitude)


def gradient_magnitude_field(
    surface: BiquadraticSurface, grid: GridSpec, mask
) -> RasterField:
    """|grad f| at every water node; land nodes carry NaN."""
    mask = _check_mask(grid, mask)
    xs, ys = grid.node_coords()
    gx, gy = surface.gradient_smoothed(xs, ys)
    values = np.hypot(gx, gy)
    values[~mask] = np.nan
    return RasterField(grid=grid, values=values, mask=mask)


def coverage_field(
    surface: BiquadraticSurface, sensor: SensorSpec, grid: GridSpec, mask
) -> RasterField:
    """Coverage radius at every water node; land nodes carry NaN."""
    mask = _check_mask(grid, mask)
    xs, ys = grid.node_coords()
    gx, gy = surface.gradient_smoothed(xs, ys)
    magnitude = np.hypot(gx, gy)
    values = np.full(grid.size, sensor.r_cap)
    nonzero = magnitude > 0.0
    values[nonzero] = np.minimum(
        sensor.r_cap, sensor.absolute_error / magnitude[nonzero]
    )
    values[~mask] = np.nan
    return RasterField(grid=grid, values=values, mask=mask)


def region_refine(grid: GridSpec, bbox, factor: int) -> GridSpec:
    """Denser grid over a region of interest.

    ``bbox`` is (x_lo, y_lo, x_hi, y_hi); it is clipped to the grid
    extent and must overlap it with positive area.  Spacing shrinks by
    ``factor`` and the refined origin sits on the clipped lower-left
    corner, with node counts chosen so nodes align with the bbox.
    """
    if factor < 2:
        raise ValueError("refinement factor must be at least 2")
    x_lo, y_lo, x_hi, y_hi = (float(b) for b in bbox)
    if x_lo > x_hi or y_lo > y_hi:
        raise ValueError("bbox lower corner must not exceed upper corner")
    x_lo = max(x_lo, grid.x0)
    y_lo = max(y_lo, grid.y0)
    x_hi = min(x_hi, grid.x_max)
    y_hi = min(y_hi, grid.y_max)
    if x_lo >= x_hi or y_lo >= y_hi:
        raise EmptyRegionError("bbox does not overlap the grid extent")
    # The small slack keeps ulp-level rounding (e.g. dx = 0.1) from
    # dropping the last node when the bbox width is an exact multiple.
    nx = int(math.floor((x_hi - x_lo) * factor / grid.dx + 1e-9)) + 1
    ny = int(math.floor((y_hi - y_lo) * factor / grid.dy + 1e-9)) + 1
    return GridSpec(
        x0=x_lo,
        y0=y_lo,
        dx=grid.dx / factor,
        dy=grid.dy / factor,
        nx=max(nx, 2),
        ny=max(ny, 2),
    )
