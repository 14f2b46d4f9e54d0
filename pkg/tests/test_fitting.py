import numpy as np
import pytest

from coverfield import (
    BiquadraticSurface,
    DegenerateDesignError,
    NonFiniteValueError,
    SampleSet,
    TooFewSamplesError,
    fit_gradient_descent,
    fit_normal_equations,
    residual_sigma,
)

from conftest import sample_set_from_coeffs


def residual_sum(surface, samples):
    """Direct evaluation of F(a), independent of the fitters' bookkeeping."""
    r = surface.eval_raw(samples.xs, samples.ys) - samples.values
    return float(np.sum(r * r))


def eval_grid_rmse(surface_a, surface_b, n=50):
    xs, ys = np.meshgrid(np.linspace(-1, 1, n), np.linspace(-1, 1, n))
    da = surface_a.eval_raw(xs.ravel(), ys.ravel())
    db = surface_b.eval_raw(xs.ravel(), ys.ravel())
    return float(np.sqrt(np.mean((da - db) ** 2)))


class TestNormalEquations:
    def test_constant_field_exact(self, rng):
        x = rng.uniform(-1, 1, 20)
        y = rng.uniform(-1, 1, 20)
        samples = SampleSet.from_arrays(x, y, np.full(20, 5.0))
        surface, report = fit_normal_equations(samples)
        assert surface.coefficients[0] == pytest.approx(5.0, abs=1e-9)
        assert np.allclose(surface.coefficients[1:], 0.0, atol=1e-9)
        assert report.final_residual == pytest.approx(0.0, abs=1e-16)
        assert report.iterations == 0
        assert report.converged

    def test_nine_samples_interpolate(self, rng):
        coeffs = rng.normal(0, 1, 9)
        samples = sample_set_from_coeffs(rng, coeffs, n=9)
        surface, report = fit_normal_equations(samples)
        assert report.final_residual <= 1e-8
        assert residual_sum(surface, samples) <= 1e-8

    def test_collinear_samples_degenerate(self):
        x = np.linspace(-1, 1, 20)
        samples = SampleSet.from_arrays(x, x, x**2)
        with pytest.raises(DegenerateDesignError):
            fit_normal_equations(samples)

    def test_too_few_samples(self, rng):
        samples = sample_set_from_coeffs(rng, np.ones(9), n=8)
        with pytest.raises(TooFewSamplesError):
            fit_normal_equations(samples)

    def test_records_bounds_and_beta(self, rng):
        samples = sample_set_from_coeffs(rng, np.ones(9), n=50)
        surface, _ = fit_normal_equations(samples, beta=2.5)
        assert surface.beta == 2.5
        assert surface.value_min == samples.value_min
        assert surface.value_max == samples.value_max


class TestGradientDescent:
    def test_constant_field(self, rng):
        x = rng.uniform(-1, 1, 20)
        y = rng.uniform(-1, 1, 20)
        samples = SampleSet.from_arrays(x, y, np.full(20, 5.0))
        surface, report = fit_gradient_descent(samples)
        assert report.final_residual <= 1e-8
        assert surface.eval_raw(0.3, -0.7) == pytest.approx(5.0, abs=1e-6)

    def test_noiseless_recovery_matches_oracle(self, rng):
        """Closed-form least squares is the oracle for the descent route."""
        coeffs = np.array([1.0, 2.0, -1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0])
        samples = sample_set_from_coeffs(rng, coeffs, n=200)
        gd_surface, _ = fit_gradient_descent(samples)
        oracle_surface, _ = fit_normal_equations(samples)
        assert eval_grid_rmse(gd_surface, oracle_surface) <= 1e-4
        truth = BiquadraticSurface(coefficients=coeffs)
        assert eval_grid_rmse(gd_surface, truth) <= 1e-4

    def test_noisy_fit_near_oracle_minimum(self, rng):
        coeffs = np.array([1.0, 2.0, -1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0])
        samples = sample_set_from_coeffs(rng, coeffs, n=200, noise=0.01)
        gd_surface, report = fit_gradient_descent(samples)
        _, oracle_report = fit_normal_equations(samples)
        assert 0.005 <= report.rmse <= 0.02
        assert report.final_residual <= oracle_report.final_residual * (1 + 1e-6)
        assert residual_sum(gd_surface, samples) == pytest.approx(
            report.final_residual, rel=1e-9
        )

    def test_monotone_descent(self, rng):
        samples = sample_set_from_coeffs(rng, rng.normal(0, 1, 9), n=100, noise=0.1)
        _, report = fit_gradient_descent(samples)
        history = np.array(report.residual_history)
        assert len(history) == report.iterations
        assert np.all(np.diff(history) <= 0.0)

    def test_degenerate_design_detected(self):
        x = np.linspace(-1, 1, 30)
        samples = SampleSet.from_arrays(x, 2 * x, x + 1)
        with pytest.raises(DegenerateDesignError):
            fit_gradient_descent(samples)

    def test_too_few_samples(self, rng):
        samples = sample_set_from_coeffs(rng, np.ones(9), n=5)
        with pytest.raises(TooFewSamplesError):
            fit_gradient_descent(samples)

    def test_nonfinite_input_rejected(self):
        with pytest.raises(NonFiniteValueError):
            SampleSet.from_arrays([0.0, np.inf], [0.0, 1.0], [1.0, 2.0])

    def test_invalid_options(self, rng):
        samples = sample_set_from_coeffs(rng, np.ones(9), n=20)
        with pytest.raises(ValueError):
            fit_gradient_descent(samples, learning_rate=-1.0)
        with pytest.raises(ValueError):
            fit_gradient_descent(samples, tolerance=0.0)

    def test_oracle_equivalence_on_random_sets(self, rng):
        """F(gd) <= F(oracle) * (1 + 1e-6) for full-rank noisy sample sets."""
        for _ in range(5):
            coeffs = rng.normal(0, 1, 9)
            samples = sample_set_from_coeffs(rng, coeffs, n=120, noise=0.05)
            _, gd_report = fit_gradient_descent(samples)
            _, oracle_report = fit_normal_equations(samples)
            assert gd_report.final_residual <= oracle_report.final_residual * (1 + 1e-6)


class TestNormalizationTransparency:
    def test_fits_agree_regardless_of_transform(self, rng):
        """Solving the same least-squares problem under two different valid
        normalizations gives the same function on the sample hull."""
        from coverfield import CoordTransform
        from coverfield.surface import design_matrix

        x = rng.uniform(100.0, 300.0, 150)
        y = rng.uniform(-50.0, 50.0, 150)
        values = 5.0 + 0.01 * x - 0.002 * y + 1e-4 * x * y + rng.normal(0, 0.1, 150)

        surfaces = []
        for transform in (
            CoordTransform.for_extent(x.min(), x.max(), y.min(), y.max()),
            CoordTransform(x_offset=200.0, x_scale=0.005, y_offset=0.0, y_scale=0.01),
        ):
            u, v = transform.to_normalized(x, y)
            coeffs, _, _, _ = np.linalg.lstsq(design_matrix(u, v), values, rcond=None)
            surfaces.append(
                BiquadraticSurface(coefficients=coeffs, transform=transform)
            )

        px = rng.uniform(x.min(), x.max(), 500)
        py = rng.uniform(y.min(), y.max(), 500)
        va = surfaces[0].eval_raw(px, py)
        vb = surfaces[1].eval_raw(px, py)
        assert np.max(np.abs(va - vb)) < 1e-8


class TestResidualSigma:
    def test_zero_for_exact_surface(self, rng):
        coeffs = rng.normal(0, 1, 9)
        samples = sample_set_from_coeffs(rng, coeffs, n=100)
        surface, _ = fit_normal_equations(samples)
        assert residual_sigma(surface, samples) == pytest.approx(0.0, abs=1e-10)

    def test_plus_minus_one_residuals(self):
        surface = BiquadraticSurface(
            coefficients=np.zeros(9), value_min=-100.0, value_max=100.0
        )
        samples = SampleSet.from_arrays([0.0, 1.0], [0.0, 0.0], [1.0, -1.0])
        assert residual_sigma(surface, samples) == pytest.approx(np.sqrt(2.0))

    def test_estimates_injected_noise(self):
        rng = np.random.default_rng(7)
        coeffs = rng.normal(0, 1, 9)
        samples = sample_set_from_coeffs(rng, coeffs, n=1000, noise=0.05)
        surface, _ = fit_normal_equations(samples)
        assert 0.04 <= residual_sigma(surface, samples) <= 0.06

    def test_needs_two_samples(self):
        surface = BiquadraticSurface(coefficients=np.zeros(9))
        samples = SampleSet.from_arrays([0.0], [0.0], [1.0])
        with pytest.raises(TooFewSamplesError):
            residual_sigma(surface, samples)
