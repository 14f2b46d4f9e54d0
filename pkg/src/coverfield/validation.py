"""Input validation helpers used across the package."""

import numpy as np

from .errors import NonFiniteValueError


def as_float_array(values, name: str) -> np.ndarray:
    """Coerce to a 1-D float64 array, rejecting NaN and infinities."""
    arr = np.asarray(values, dtype=float).ravel()
    require_finite(arr, name)
    return arr


def require_finite(values, name: str) -> None:
    """Raise NonFiniteValueError if any entry of ``values`` is NaN or infinite."""
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValueError(f"{name} contains non-finite values")


def check_xy(X) -> np.ndarray:
    """Validate an (n, 2) coordinate array of finite floats."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected coordinates of shape (n, 2), got {arr.shape}")
    require_finite(arr, "coordinates")
    return arr


def readonly(arr: np.ndarray) -> np.ndarray:
    """Return a copy of ``arr`` with the writeable flag cleared."""
    out = np.array(arr, dtype=arr.dtype, copy=True)
    out.flags.writeable = False
    return out
