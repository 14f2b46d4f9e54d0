"""Scattered field measurements and their observed value bounds."""

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import NonFiniteValueError, TooFewSamplesError
from .validation import readonly, require_finite


@dataclass(frozen=True)
class ScatterSample:
    """One (x, y, value) measurement in planar meters and field units."""

    x: float
    y: float
    value: float


@dataclass(frozen=True)
class SampleSet:
    """Ordered collection of scatter samples with cached value bounds.

    Arrays are parallel and read-only; ``value_min``/``value_max`` are the
    observed bounds, which downstream become the smoothing thresholds.
    Build instances through :meth:`from_arrays` or :meth:`from_samples`.
    """

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    value_min: float
    value_max: float

    def __post_init__(self):
        for name in ("xs", "ys", "values"):
            arr = np.asarray(getattr(self, name), dtype=float).ravel()
            if not np.all(np.isfinite(arr)):
                raise NonFiniteValueError(f"{name} contains non-finite values")
            object.__setattr__(self, name, readonly(arr))
        if len(self.xs) == 0:
            raise TooFewSamplesError("sample set is empty")
        if not (len(self.xs) == len(self.ys) == len(self.values)):
            raise ValueError("xs, ys and values must have equal length")
        require_finite([self.value_min, self.value_max], "value bounds")
        if self.value_min > self.value_max:
            raise ValueError("value_min must not exceed value_max")

    @classmethod
    def from_arrays(cls, xs, ys, values) -> "SampleSet":
        values = np.asarray(values, dtype=float).ravel()
        if values.size == 0:
            raise TooFewSamplesError("sample set is empty")
        require_finite(values, "values")
        return cls(
            xs=np.asarray(xs, dtype=float).ravel(),
            ys=np.asarray(ys, dtype=float).ravel(),
            values=values,
            value_min=float(values.min()),
            value_max=float(values.max()),
        )

    @classmethod
    def from_samples(cls, samples: Iterable[ScatterSample]) -> "SampleSet":
        samples = list(samples)
        return cls.from_arrays(
            [s.x for s in samples],
            [s.y for s in samples],
            [s.value for s in samples],
        )

    def __len__(self) -> int:
        return len(self.xs)

    def __iter__(self) -> Iterator[ScatterSample]:
        for x, y, value in zip(self.xs, self.ys, self.values):
            yield ScatterSample(float(x), float(y), float(value))
