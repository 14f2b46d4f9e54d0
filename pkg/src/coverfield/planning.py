"""Greedy station placement over a coverage raster, plus survey tour ordering.

Stations sit on water grid nodes.  A station's visibility disk has the
coverage radius evaluated at its own position, and a water node counts
as covered when its Euclidean distance to some station is at most that
station's radius.  Greedy maximum-coverage placement repeats until every
water node is covered; it carries the classic ln(n)+1 set-cover
approximation guarantee and is fully deterministic (ties break toward
the lowest row-major node index).

The visiting order is a nearest-neighbor open path polished by 2-opt
segment reversals; the path does not return to its start.
"""

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .coverage import RasterField
from .errors import EmptyDomainError, GridMismatchError


@dataclass(frozen=True)
class Station:
    """A planned measurement location and its visibility radius (meters)."""

    x: float
    y: float
    radius: float


@dataclass(frozen=True)
class StationPlan:
    """Placed stations with coverage accounting and visiting order.

    ``tour`` is a permutation of station indices; ``tour_length`` is the
    total length of the open path (no return leg).
    """

    stations: Tuple[Station, ...]
    covered_fraction: float
    tour: Tuple[int, ...]
    tour_length: float


def tour_length(stations: Sequence[Station], tour: Sequence[int]) -> float:
    """Sum of consecutive Euclidean legs along an open path."""
    total = 0.0
    for a, b in zip(tour, tour[1:]):
        total += math.hypot(
            stations[a].x - stations[b].x, stations[a].y - stations[b].y
        )
    return total


def order_tour_nearest_neighbor(
    stations: Sequence[Station], start_index: int = 0
) -> List[int]:
    """Greedy nearest-unvisited ordering from a start station.

    Distance ties break toward the lower station index.
    """
    n = len(stations)
    if n == 0:
        raise ValueError("need at least one station")
    if not 0 <= start_index < n:
        raise ValueError(f"start_index {start_index} out of range for {n} stations")
    xs = np.array([s.x for s in stations])
    ys = np.array([s.y for s in stations])
    order = [start_index]
    remaining = [i for i in range(n) if i != start_index]
    current = start_index
    while remaining:
        d2 = (xs[remaining] - xs[current]) ** 2 + (ys[remaining] - ys[current]) ** 2
        current = remaining.pop(int(np.argmin(d2)))
        order.append(current)
    return order


def improve_tour_2opt(
    stations: Sequence[Station], tour: Sequence[int]
) -> List[int]:
    """Repeat first-improving 2-opt segment reversals until none remain.

    Works on the open path: reversing tour[i..j] swaps the two boundary
    legs (end reversals touch only one leg).  The returned order is
    never longer than the input.
    """
    if sorted(tour) != list(range(len(stations))):
        raise ValueError("tour must be a permutation of station indices")
    tour = list(tour)
    n = len(tour)
    if n < 3:
        return tour

    xs = [s.x for s in stations]
    ys = [s.y for s in stations]

    def leg(a: int, b: int) -> float:
        return math.hypot(xs[a] - xs[b], ys[a] - ys[b])

    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                if i == 0 and j == n - 1:
                    continue  # whole-path reversal never changes length
                old = new = 0.0
                if i > 0:
                    old += leg(tour[i - 1], tour[i])
                    new += leg(tour[i - 1], tour[j])
                if j < n - 1:
                    old += leg(tour[j], tour[j + 1])
                    new += leg(tour[i], tour[j + 1])
                if new < old - 1e-12:
                    tour[i : j + 1] = reversed(tour[i : j + 1])
                    improved = True
    return tour


def plan_stations_greedy(coverage: RasterField, tour_start: int = 0) -> StationPlan:
    """Minimal-practical station placement covering every water node.

    Repeatedly selects the water node whose visibility disk covers the
    most still-uncovered water nodes (ties to the lowest row-major
    index); every station covers at least its own node, so the loop
    always terminates with full coverage.  The visiting order is
    nearest-neighbor from ``tour_start`` refined by 2-opt.
    """
    water = coverage.water_indices()
    if len(water) == 0:
        raise EmptyDomainError("coverage raster has no water nodes")

    grid = coverage.grid
    xs, ys = grid.node_coords()
    wx, wy = xs[water], ys[water]
    radii = coverage.values[water]

    # covers[c, w]: does a station at water node c reach water node w?
    d2 = (wx[:, None] - wx[None, :]) ** 2 + (wy[:, None] - wy[None, :]) ** 2
    covers = d2 <= radii[:, None] ** 2

    uncovered = np.ones(len(water), dtype=bool)
    chosen: List[int] = []
    while uncovered.any():
        gains = (covers & uncovered[None, :]).sum(axis=1)
        best = int(np.argmax(gains))  # first max = lowest row-major index
        chosen.append(best)
        uncovered &= ~covers[best]

    stations = tuple(
        Station(x=float(wx[c]), y=float(wy[c]), radius=float(radii[c]))
        for c in chosen
    )
    order = order_tour_nearest_neighbor(stations, tour_start)
    order = improve_tour_2opt(stations, order)
    return StationPlan(
        stations=stations,
        covered_fraction=1.0 - float(uncovered.sum()) / len(water),
        tour=tuple(order),
        tour_length=tour_length(stations, order),
    )


def verify_coverage(plan: StationPlan, coverage: RasterField) -> List[int]:
    """Indices of water nodes left uncovered by the plan (empty if valid).

    Every station must sit on a water node of the raster grid, otherwise
    the plan and raster do not belong together.
    """
    grid = coverage.grid
    for station in plan.stations:
        node = grid.node_index(station.x, station.y)
        if node is None or not coverage.mask[node]:
            raise GridMismatchError(
                f"station at ({station.x}, {station.y}) is not a water node "
                "of the raster grid"
            )

    water = coverage.water_indices()
    xs, ys = grid.node_coords()
    covered = np.zeros(len(water), dtype=bool)
    for station in plan.stations:
        d2 = (xs[water] - station.x) ** 2 + (ys[water] - station.y) ** 2
        covered |= d2 <= station.radius**2
    return [int(i) for i in water[~covered]]
