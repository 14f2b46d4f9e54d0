"""scikit-learn estimator facade over the surface fitting routines.

Wraps the functional fitting API in a ``BaseEstimator`` so the surface
model composes with pipelines, grid search and cross-validation.
"""

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .fitting import (
    DEFAULT_BETA,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOLERANCE,
    fit_gradient_descent,
    fit_normal_equations,
)
from .samples import SampleSet
from .validation import check_xy, require_finite


class BiquadraticFieldRegressor(RegressorMixin, BaseEstimator):
    """Biquadratic surface regression with flexible threshold smoothing.

    Parameters
    ----------
    method : {"gradient_descent", "normal_equations"}, default="gradient_descent"
        Fitting route.  Both minimize the same residual sum of squares;
        the closed form is exact, gradient descent is iterative.
    learning_rate : float, optional
        Gradient-descent step size; auto-selected from the design
        spectrum when None.  Ignored by the closed form.
    max_iterations : int, default=100000
        Gradient-descent iteration cap.
    tolerance : float, default=1e-10
        Relative-decrease convergence threshold for gradient descent.
    beta : float, default=1.0
        Threshold-smoothing constant (> 0).
    smooth_predictions : bool, default=True
        If True, ``predict`` returns the threshold-smoothed surface;
        if False, the raw polynomial.

    Attributes
    ----------
    surface_ : BiquadraticSurface
        The fitted surface (normalized-frame coefficients, transform,
        value bounds and beta).
    report_ : FitReport
        Iterations, final residual, rmse and convergence flag.
    coef_ : np.ndarray of shape (9,)
        Normalized-frame polynomial coefficients.
    n_features_in_ : int
        Always 2 (planar coordinates).
    """

    def __init__(
        self,
        method: str = "gradient_descent",
        learning_rate: Optional[float] = None,
        max_iterations: int = DEFAULT_MAX_ITERATIONS,
        tolerance: float = DEFAULT_TOLERANCE,
        beta: float = DEFAULT_BETA,
        smooth_predictions: bool = True,
    ):
        self.method = method
        self.learning_rate = learning_rate
        self.max_iterations = max_iterations
        self.tolerance = tolerance
        self.beta = beta
        self.smooth_predictions = smooth_predictions

    def fit(self, X, y):
        """Fit the surface to coordinates X of shape (n, 2) and values y."""
        X = check_xy(X)
        y = np.asarray(y, dtype=float).ravel()
        if y.shape[0] != X.shape[0]:
            raise ValueError("X and y must have the same number of samples")
        require_finite(y, "y")
        samples = SampleSet.from_arrays(X[:, 0], X[:, 1], y)

        if self.method == "normal_equations":
            surface, report = fit_normal_equations(samples, beta=self.beta)
        elif self.method == "gradient_descent":
            surface, report = fit_gradient_descent(
                samples,
                learning_rate=self.learning_rate,
                max_iterations=self.max_iterations,
                tolerance=self.tolerance,
                beta=self.beta,
            )
        else:
            raise ValueError(
                "method must be 'gradient_descent' or 'normal_equations', "
                f"got {self.method!r}"
            )

        self.surface_ = surface
        self.report_ = report
        self.coef_ = surface.coefficients
        self.n_features_in_ = 2
        return self

    def predict(self, X):
        """Predict field values at coordinates X of shape (n, 2)."""
        check_is_fitted(self, "surface_")
        X = check_xy(X)
        if self.smooth_predictions:
            return np.asarray(self.surface_.eval_smoothed(X[:, 0], X[:, 1]))
        return np.asarray(self.surface_.eval_raw(X[:, 0], X[:, 1]))

    def gradient(self, X):
        """Analytic smoothed-surface gradient at X; returns shape (n, 2)."""
        check_is_fitted(self, "surface_")
        X = check_xy(X)
        gx, gy = self.surface_.gradient_smoothed(X[:, 0], X[:, 1])
        return np.column_stack([gx, gy])
