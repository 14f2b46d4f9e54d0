import numpy as np
import pytest

from coverfield import BiquadraticSurface, CoordTransform, SampleSet


def random_surface(rng, with_branches=True, beta=None):
    """Random surface; with_branches picks bounds interior to the sampled
    value range so all three smoothing branches are reachable on [-1,1]**2."""
    coeffs = rng.normal(0.0, 1.0, 9)
    transform = CoordTransform(
        x_offset=rng.uniform(-5.0, 5.0),
        x_scale=rng.uniform(0.5, 2.0),
        y_offset=rng.uniform(-5.0, 5.0),
        y_scale=rng.uniform(0.5, 2.0),
    )
    beta = float(rng.uniform(0.5, 2.0)) if beta is None else beta
    if with_branches:
        u = rng.uniform(-1.0, 1.0, 500)
        v = rng.uniform(-1.0, 1.0, 500)
        probe = BiquadraticSurface(coefficients=coeffs)
        fr = probe.eval_raw(u, v)
        lo, hi = np.quantile(fr, [0.2, 0.8])
    else:
        lo, hi = -1e12, 1e12
    return BiquadraticSurface(
        coefficients=coeffs,
        transform=transform,
        value_min=float(lo),
        value_max=float(hi),
        beta=beta,
    )


def surface_domain(surface):
    """Raw-coordinate box that maps onto the normalized [-1,1]**2 square."""
    x_lo, y_lo = surface.transform.to_raw(-1.0, -1.0)
    x_hi, y_hi = surface.transform.to_raw(1.0, 1.0)
    return float(x_lo), float(x_hi), float(y_lo), float(y_hi)


def sample_set_from_coeffs(rng, coeffs, n=200, noise=0.0):
    """Samples drawn on [-1,1]**2 from a known normalized-frame polynomial."""
    x = rng.uniform(-1.0, 1.0, n)
    y = rng.uniform(-1.0, 1.0, n)
    surface = BiquadraticSurface(coefficients=coeffs)
    values = surface.eval_raw(x, y)
    if noise > 0:
        values = values + rng.normal(0.0, noise, n)
    return SampleSet.from_arrays(x, y, values)


@pytest.fixture
def rng():
    return np.random.default_rng(42)
