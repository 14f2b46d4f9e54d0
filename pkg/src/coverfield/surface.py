"""Biquadratic regression surface with flexible threshold smoothing.

The surface is a 9-term polynomial, quadratic in each coordinate::

    f(x, y) = a0 + a1*x + a2*y + a3*x*y + a4*x**2 + a5*y**2
              + a6*x**2*y + a7*x*y**2 + a8*x**2*y**2

Coefficients live in a normalized coordinate frame (an affine map of the
data hull onto [-1, 1]**2) for numerical conditioning; the transform is
stored on the surface and applied transparently, so callers always work
in raw meters.

Values that stray outside the observed data bounds are compressed back
toward the nearest bound by a reciprocal branch rule ("flexible threshold
smoothing").  The rule as defined is discontinuous at the two thresholds:
the smoothed value jumps by 1/beta when the raw polynomial crosses a
bound.  This is intentional and implemented verbatim.
"""

from dataclasses import dataclass, field

import numpy as np

from .validation import readonly, require_finite

N_COEFFS = 9

# Exponent pairs (i, j) of the term x**i * y**j for each coefficient slot.
TERM_POWERS = ((0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2), (2, 2))


@dataclass(frozen=True)
class CoordTransform:
    """Affine map from raw planar meters into the normalized fitting frame.

    Forward map: ``u = (x - x_offset) * x_scale`` and likewise for y.
    Scales must be strictly positive so the map is invertible.
    """

    x_offset: float = 0.0
    x_scale: float = 1.0
    y_offset: float = 0.0
    y_scale: float = 1.0

    def __post_init__(self):
        for name in ("x_offset", "x_scale", "y_offset", "y_scale"):
            require_finite(getattr(self, name), name)
        if self.x_scale <= 0 or self.y_scale <= 0:
            raise ValueError("transform scales must be strictly positive")

    @classmethod
    def identity(cls) -> "CoordTransform":
        return cls()

    @classmethod
    def for_extent(cls, x_min, x_max, y_min, y_max) -> "CoordTransform":
        """Transform mapping the rectangle onto [-1, 1]**2.

        A degenerate extent (zero width or height) falls back to unit
        scale about the collapsed coordinate.
        """
        x_range = x_max - x_min
        y_range = y_max - y_min
        return cls(
            x_offset=0.5 * (x_min + x_max),
            x_scale=2.0 / x_range if x_range > 0 else 1.0,
            y_offset=0.5 * (y_min + y_max),
            y_scale=2.0 / y_range if y_range > 0 else 1.0,
        )

    def to_normalized(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (x - self.x_offset) * self.x_scale, (y - self.y_offset) * self.y_scale

    def to_raw(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return u / self.x_scale + self.x_offset, v / self.y_scale + self.y_offset


def design_matrix(u, v) -> np.ndarray:
    """Stack the nine polynomial basis terms column-wise for points (u, v)."""
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    uu = u * u
    vv = v * v
    return np.column_stack(
        [np.ones_like(u), u, v, u * v, uu, vv, uu * v, u * vv, uu * vv]
    )


def _poly_eval(a: np.ndarray, u, v):
    uu = u * u
    vv = v * v
    return (
        a[0]
        + a[1] * u
        + a[2] * v
        + a[3] * u * v
        + a[4] * uu
        + a[5] * vv
        + a[6] * uu * v
        + a[7] * u * vv
        + a[8] * uu * vv
    )


def _poly_grad(a: np.ndarray, u, v):
    """Partials of the 9-term polynomial with respect to u and v."""
    uu = u * u
    vv = v * v
    du = a[1] + a[3] * v + 2.0 * a[4] * u + 2.0 * a[6] * u * v + a[7] * vv + 2.0 * a[8] * u * vv
    dv = a[2] + a[3] * u + 2.0 * a[5] * v + a[6] * uu + 2.0 * a[7] * u * v + 2.0 * a[8] * uu * v
    return du, dv


def _power_basis_change(scale: float, offset: float) -> np.ndarray:
    """3x3 matrix B with B[i, k] = coefficient of x**k in (scale*(x-offset))**i."""
    p1 = scale
    p0 = -scale * offset
    return np.array(
        [
            [1.0, 0.0, 0.0],
            [p0, p1, 0.0],
            [p0 * p0, 2.0 * p0 * p1, p1 * p1],
        ]
    )


@dataclass(frozen=True)
class BiquadraticSurface:
    """Fitted biquadratic surface plus smoothing bounds.

    Parameters
    ----------
    coefficients : np.ndarray of shape (9,)
        Polynomial coefficients in the normalized frame, ordered
        (1, x, y, xy, x**2, y**2, x**2 y, x y**2, x**2 y**2).
    transform : CoordTransform
        Map from raw meters into the normalized frame.
    value_min, value_max : float
        Observed bounds of the fitted data; thresholds of the smoothing.
    beta : float
        Smoothing constant (> 0) controlling the compression strength;
        the smoothed value always lies in
        [value_min - 1/beta, value_max + 1/beta].
    """

    coefficients: np.ndarray
    transform: CoordTransform = field(default_factory=CoordTransform)
    value_min: float = -np.inf
    value_max: float = np.inf
    beta: float = 1.0

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float).ravel()
        if coeffs.shape != (N_COEFFS,):
            raise ValueError(f"expected {N_COEFFS} coefficients, got {coeffs.shape}")
        require_finite(coeffs, "coefficients")
        object.__setattr__(self, "coefficients", readonly(coeffs))
        if not self.beta > 0:
            raise ValueError("beta must be strictly positive")
        if self.value_min > self.value_max:
            raise ValueError("value_min must not exceed value_max")

    def eval_raw(self, x, y):
        """Evaluate the unsmoothed polynomial at raw coordinates."""
        u, v = self.transform.to_normalized(x, y)
        out = _poly_eval(self.coefficients, u, v)
        return out if out.ndim else float(out)

    def eval_smoothed(self, x, y):
        """Evaluate with flexible threshold smoothing applied.

        Branches, tested in order: values at or above value_max map to
        ``value_max + 1/(f - value_max + beta)``; values at or below
        value_min map to ``value_min - 1/(value_min - f + beta)``;
        everything in between passes through unchanged.
        """
        fr = np.atleast_1d(np.asarray(self.eval_raw(x, y), dtype=float))
        out = fr.copy()
        upper = fr >= self.value_max
        lower = (fr <= self.value_min) & ~upper
        out[upper] = self.value_max + 1.0 / (fr[upper] - self.value_max + self.beta)
        out[lower] = self.value_min - 1.0 / (self.value_min - fr[lower] + self.beta)
        if np.asarray(x).ndim == 0 and np.asarray(y).ndim == 0:
            return float(out[0])
        return out.reshape(np.broadcast(np.asarray(x), np.asarray(y)).shape)

    def gradient_smoothed(self, x, y):
        """Analytic partials of the smoothed surface, in field units per meter.

        The polynomial partials in the normalized frame are chained
        through the coordinate transform, then multiplied by the
        derivative of whichever smoothing branch is active at the point
        (-1/denominator**2 on the outer branches, 1 in the middle).
        """
        u, v = self.transform.to_normalized(x, y)
        u = np.atleast_1d(u)
        v = np.atleast_1d(v)
        du, dv = _poly_grad(self.coefficients, u, v)
        gx = du * self.transform.x_scale
        gy = dv * self.transform.y_scale

        fr = _poly_eval(self.coefficients, u, v)
        factor = np.ones_like(fr)
        upper = fr >= self.value_max
        lower = (fr <= self.value_min) & ~upper
        factor[upper] = -1.0 / (fr[upper] - self.value_max + self.beta) ** 2
        factor[lower] = -1.0 / (self.value_min - fr[lower] + self.beta) ** 2
        gx = gx * factor
        gy = gy * factor
        if np.asarray(x).ndim == 0 and np.asarray(y).ndim == 0:
            return float(gx[0]), float(gy[0])
        shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
        return gx.reshape(shape), gy.reshape(shape)

    def raw_coefficients(self) -> np.ndarray:
        """Coefficients of the equivalent polynomial in raw coordinates.

        The normalization is affine, so the surface is still a 9-term
        biquadratic in raw x, y; this expands the substitution.
        """
        bx = _power_basis_change(self.transform.x_scale, self.transform.x_offset)
        by = _power_basis_change(self.transform.y_scale, self.transform.y_offset)
        slot = {powers: idx for idx, powers in enumerate(TERM_POWERS)}
        raw = np.zeros(N_COEFFS)
        for idx, (i, j) in enumerate(TERM_POWERS):
            a = self.coefficients[idx]
            if a == 0.0:
                continue
            for k in range(i + 1):
                for l in range(j + 1):
                    raw[slot[(k, l)]] += a * bx[i, k] * by[j, l]
        return raw
