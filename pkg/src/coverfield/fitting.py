"""Least-squares fitting of the biquadratic surface to scattered samples.

Two routes to the same minimum of the residual sum of squares
``F(a) = sum_i (f(x_i, y_i) - value_i)**2``:

* :func:`fit_gradient_descent` - iterative first-order descent with a
  backtracking (halving) step rule, the production fitting path.
* :func:`fit_normal_equations` - the closed-form least-squares solution,
  kept as an independent oracle (the model is linear in its
  coefficients, so the minimum has an exact solution).

Both fit in a normalized coordinate frame: raw survey coordinates are in
meters and would make the x**2 * y**2 design column catastrophically
ill-conditioned, so the data hull is mapped onto [-1, 1]**2 first.  The
transform is recorded on the returned surface and undone transparently
at evaluation time.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DegenerateDesignError, TooFewSamplesError
from .samples import SampleSet
from .surface import N_COEFFS, BiquadraticSurface, CoordTransform, design_matrix

DEFAULT_MAX_ITERATIONS = 100_000
DEFAULT_TOLERANCE = 1e-10
DEFAULT_BETA = 1.0

# Give up backtracking after this many halvings; at that point the step
# has shrunk by 2**-60 and the gradient is numerically negligible.
_MAX_HALVINGS = 60


@dataclass(frozen=True)
class FitReport:
    """Outcome of a fit: iteration count, final residual and convergence flag.

    ``residual_history`` records F(a) after every accepted iteration of
    gradient descent (empty for the closed-form fit); it exists for
    diagnostics and for checking monotone descent.
    """

    iterations: int
    final_residual: float
    rmse: float
    converged: bool
    residual_history: Tuple[float, ...] = ()


def _prepare_design(samples: SampleSet):
    if len(samples) < N_COEFFS:
        raise TooFewSamplesError(
            f"need at least {N_COEFFS} samples to fit, got {len(samples)}"
        )
    transform = CoordTransform.for_extent(
        samples.xs.min(), samples.xs.max(), samples.ys.min(), samples.ys.max()
    )
    u, v = transform.to_normalized(samples.xs, samples.ys)
    return transform, design_matrix(u, v)


def _make_surface(coeffs, transform, samples: SampleSet, beta: float) -> BiquadraticSurface:
    return BiquadraticSurface(
        coefficients=coeffs,
        transform=transform,
        value_min=samples.value_min,
        value_max=samples.value_max,
        beta=beta,
    )


def fit_normal_equations(samples: SampleSet, *, beta: float = DEFAULT_BETA):
    """Exact least-squares fit via the closed-form normal equations.

    Returns
    -------
    (BiquadraticSurface, FitReport)
        The report carries ``iterations=0`` and ``converged=True``.

    Raises
    ------
    TooFewSamplesError
        Fewer than 9 samples.
    DegenerateDesignError
        The design matrix has rank below 9 (e.g. collinear samples).
    """
    transform, G = _prepare_design(samples)
    coeffs, _, rank, _ = np.linalg.lstsq(G, samples.values, rcond=None)
    if rank < N_COEFFS:
        raise DegenerateDesignError(
            f"design matrix rank {rank} < {N_COEFFS}; samples do not determine "
            "a biquadratic surface"
        )
    residuals = G @ coeffs - samples.values
    final = float(residuals @ residuals)
    report = FitReport(
        iterations=0,
        final_residual=final,
        rmse=float(np.sqrt(final / len(samples))),
        converged=True,
    )
    return _make_surface(coeffs, transform, samples, beta), report


def fit_gradient_descent(
    samples: SampleSet,
    *,
    learning_rate: Optional[float] = None,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    tolerance: float = DEFAULT_TOLERANCE,
    beta: float = DEFAULT_BETA,
):
    """Fit by gradient descent on the residual sum of squares.

    Starts from a = 0 with a fixed learning rate (auto-selected as the
    inverse of the largest Hessian eigenvalue when not given) and halves
    the step whenever a proposed move would increase F, so accepted
    iterates descend monotonically.  Convergence is declared when the
    relative decrease of F between successive iterations drops below
    ``tolerance``.

    Parameters
    ----------
    samples : SampleSet
        At least 9 samples with a full-rank design.
    learning_rate : float, optional
        Step size (> 0).  Default: 1 / (2 * lambda_max(G^T G)), which
        guarantees descent for this quadratic objective.
    max_iterations : int, default=100000
    tolerance : float, default=1e-10
        Relative-decrease convergence threshold (> 0).
    beta : float, default=1.0
        Smoothing constant recorded on the returned surface.

    Returns
    -------
    (BiquadraticSurface, FitReport)

    Raises
    ------
    TooFewSamplesError, DegenerateDesignError
        Same preconditions as the closed-form fit.
    """
    if learning_rate is not None and not learning_rate > 0:
        raise ValueError("learning_rate must be strictly positive")
    if not tolerance > 0:
        raise ValueError("tolerance must be strictly positive")
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")

    transform, G = _prepare_design(samples)
    if np.linalg.matrix_rank(G) < N_COEFFS:
        raise DegenerateDesignError(
            f"design matrix rank below {N_COEFFS}; samples do not determine "
            "a biquadratic surface"
        )

    w = samples.values
    if learning_rate is None:
        # Hessian of F is 2 G^T G; 1/lambda_max is the classic safe step.
        lam_max = float(np.linalg.eigvalsh(G.T @ G)[-1])
        learning_rate = 1.0 / (2.0 * lam_max)

    def objective(a):
        r = G @ a - w
        return float(r @ r), r

    a = np.zeros(N_COEFFS)
    f_current, residual = objective(a)
    history = []
    step = learning_rate
    converged = False
    iterations = 0

    for iterations in range(1, max_iterations + 1):
        grad = 2.0 * (G.T @ residual)
        f_new, a_new, r_new = f_current, a, residual
        for _ in range(_MAX_HALVINGS):
            candidate = a - step * grad
            f_candidate, r_candidate = objective(candidate)
            if f_candidate <= f_current:
                f_new, a_new, r_new = f_candidate, candidate, r_candidate
                break
            step *= 0.5
        a, residual = a_new, r_new
        history.append(f_new)
        if f_current <= 0.0 or f_current - f_new <= tolerance * f_current:
            f_current = f_new
            converged = True
            break
        f_current = f_new

    report = FitReport(
        iterations=iterations,
        final_residual=f_current,
        rmse=float(np.sqrt(f_current / len(samples))),
        converged=converged,
        residual_history=tuple(history),
    )
    return _make_surface(a, transform, samples, beta), report


def residual_sigma(surface: BiquadraticSurface, samples: SampleSet) -> float:
    """Sample standard deviation of the smoothed-model residuals.

    Uses (n - 1) normalization; needs at least two samples.
    """
    if len(samples) < 2:
        raise TooFewSamplesError("residual sigma needs at least 2 samples")
    residuals = samples.values - surface.eval_smoothed(samples.xs, samples.ys)
    return float(np.std(residuals, ddof=1))
