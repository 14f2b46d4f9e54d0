import numpy as np
import pytest

from coverfield import BiquadraticSurface, CoordTransform

from conftest import random_surface, surface_domain

# Independent statement of the term order for brute-force evaluation.
POWERS = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2), (2, 2)]


def brute_force_eval(coeffs, u, v):
    return sum(a * u**i * v**j for a, (i, j) in zip(coeffs, POWERS))


class TestEvalRaw:
    def test_constant_surface(self):
        surf = BiquadraticSurface(coefficients=[4.2, 0, 0, 0, 0, 0, 0, 0, 0])
        assert surf.eval_raw(0.0, 0.0) == 4.2
        assert surf.eval_raw(-17.0, 123.0) == 4.2

    def test_top_degree_term(self):
        coeffs = np.zeros(9)
        coeffs[8] = 1.0
        surf = BiquadraticSurface(coefficients=coeffs)
        assert surf.eval_raw(2.0, 3.0) == 36.0  # x^2 y^2 = 4 * 9

    def test_matches_term_by_term_sum(self, rng):
        """Random coefficients agree with independent brute-force summation."""
        for _ in range(20):
            coeffs = rng.normal(0, 1, 9)
            surf = BiquadraticSurface(coefficients=coeffs)
            x, y = rng.uniform(-3, 3, 2)
            expected = brute_force_eval(coeffs, x, y)
            assert surf.eval_raw(float(x), float(y)) == pytest.approx(expected, abs=1e-12)

    def test_vectorized_matches_scalar(self, rng):
        surf = random_surface(rng)
        xs = rng.uniform(-4, 4, 30)
        ys = rng.uniform(-4, 4, 30)
        vec = surf.eval_raw(xs, ys)
        for i in range(30):
            assert vec[i] == surf.eval_raw(float(xs[i]), float(ys[i]))

    def test_normalization_applied(self):
        transform = CoordTransform(x_offset=10.0, x_scale=0.5, y_offset=-2.0, y_scale=2.0)
        coeffs = np.zeros(9)
        coeffs[1] = 1.0  # f = u
        surf = BiquadraticSurface(coefficients=coeffs, transform=transform)
        assert surf.eval_raw(12.0, 0.0) == pytest.approx((12.0 - 10.0) * 0.5)


class TestSmoothing:
    def bounded(self, vmin=0.0, vmax=10.0, beta=1.0, slope=1.0):
        return BiquadraticSurface(
            coefficients=[0, slope, 0, 0, 0, 0, 0, 0, 0],
            value_min=vmin, value_max=vmax, beta=beta,
        )

    def test_middle_branch_is_identity(self):
        surf = self.bounded()
        assert surf.eval_smoothed(5.0, 0.0) == surf.eval_raw(5.0, 0.0) == 5.0

    def test_upper_branch(self):
        # f_r = value_max + 1 with beta = 1 -> value_max + 1/2
        surf = self.bounded(vmax=10.0, beta=1.0)
        assert surf.eval_smoothed(11.0, 0.0) == pytest.approx(10.5)

    def test_lower_branch(self):
        # f_r = value_min - 3 with beta = 1 -> value_min - 1/4
        surf = self.bounded(vmin=0.0, beta=1.0)
        assert surf.eval_smoothed(-3.0, 0.0) == pytest.approx(-0.25)

    def test_equal_bounds_take_upper_branch(self):
        surf = BiquadraticSurface(
            coefficients=[5.0, 0, 0, 0, 0, 0, 0, 0, 0],
            value_min=5.0, value_max=5.0, beta=2.0,
        )
        # f_r == value_max, so the first branch applies: 5 + 1/(0 + 2)
        assert surf.eval_smoothed(0.0, 0.0) == pytest.approx(5.5)

    def test_bounds_hold_everywhere(self, rng):
        """Smoothed values stay within [min - 1/beta, max + 1/beta]."""
        for _ in range(10):
            surf = random_surface(rng)
            x_lo, x_hi, y_lo, y_hi = surface_domain(surf)
            xs = rng.uniform(x_lo, x_hi, 2000)
            ys = rng.uniform(y_lo, y_hi, 2000)
            fl = surf.eval_smoothed(xs, ys)
            assert np.all(fl >= surf.value_min - 1.0 / surf.beta)
            assert np.all(fl <= surf.value_max + 1.0 / surf.beta)

    def test_middle_branch_exact_passthrough(self, rng):
        for _ in range(5):
            surf = random_surface(rng)
            x_lo, x_hi, y_lo, y_hi = surface_domain(surf)
            xs = rng.uniform(x_lo, x_hi, 2000)
            ys = rng.uniform(y_lo, y_hi, 2000)
            fr = surf.eval_raw(xs, ys)
            middle = (fr > surf.value_min) & (fr < surf.value_max)
            fl = surf.eval_smoothed(xs, ys)
            assert np.array_equal(fl[middle], fr[middle])

    def test_jump_at_threshold_is_1_over_beta(self):
        surf = self.bounded(vmax=10.0, beta=2.0)
        below = surf.eval_smoothed(10.0 - 1e-12, 0.0)
        at = surf.eval_smoothed(10.0, 0.0)
        assert at - below == pytest.approx(0.5, abs=1e-9)


class TestGradient:
    def test_constant_surface_zero_gradient(self):
        surf = BiquadraticSurface(coefficients=[3, 0, 0, 0, 0, 0, 0, 0, 0])
        assert surf.gradient_smoothed(1.0, 2.0) == (0.0, 0.0)

    def test_linear_term(self):
        surf = BiquadraticSurface(
            coefficients=[0, 2, 0, 0, 0, 0, 0, 0, 0],
            value_min=-100.0, value_max=100.0,
        )
        gx, gy = surf.gradient_smoothed(1.0, 1.0)
        assert (gx, gy) == (2.0, 0.0)

    def test_chain_rule_through_transform(self):
        transform = CoordTransform(x_offset=0.0, x_scale=0.01, y_offset=0.0, y_scale=0.02)
        surf = BiquadraticSurface(
            coefficients=[0, 1, 1, 0, 0, 0, 0, 0, 0], transform=transform,
            value_min=-100.0, value_max=100.0,
        )
        gx, gy = surf.gradient_smoothed(0.0, 0.0)
        assert gx == pytest.approx(0.01)
        assert gy == pytest.approx(0.02)

    def test_matches_finite_differences(self, rng):
        """Analytic gradient vs central differences away from thresholds."""
        for _ in range(10):
            surf = random_surface(rng)
            x_lo, x_hi, y_lo, y_hi = surface_domain(surf)
            h = 1e-5 * (x_hi - x_lo)
            checked = 0
            while checked < 100:
                x = float(rng.uniform(x_lo + 2 * h, x_hi - 2 * h))
                y = float(rng.uniform(y_lo + 2 * h, y_hi - 2 * h))
                fr = surf.eval_raw(x, y)
                if min(abs(fr - surf.value_min), abs(fr - surf.value_max)) < 1e-3:
                    continue
                gx, gy = surf.gradient_smoothed(x, y)
                fd_x = (surf.eval_smoothed(x + h, y) - surf.eval_smoothed(x - h, y)) / (2 * h)
                fd_y = (surf.eval_smoothed(x, y + h) - surf.eval_smoothed(x, y - h)) / (2 * h)
                err = np.hypot(gx - fd_x, gy - fd_y)
                scale = max(np.hypot(fd_x, fd_y), 1e-12)
                assert err / scale < 1e-5
                checked += 1

    def test_branch_derivative_sign(self):
        # On the upper branch the smoothed surface decreases as f_r grows.
        surf = TestSmoothing().bounded(vmax=10.0, beta=1.0, slope=1.0)
        gx, _ = surf.gradient_smoothed(12.0, 0.0)
        assert gx == pytest.approx(-1.0 / (2.0 + 1.0) ** 2)


class TestRawCoefficients:
    def test_identity_transform_is_noop(self, rng):
        coeffs = rng.normal(0, 1, 9)
        surf = BiquadraticSurface(coefficients=coeffs)
        assert np.allclose(surf.raw_coefficients(), coeffs)

    def test_raw_polynomial_matches_eval(self, rng):
        for _ in range(10):
            surf = random_surface(rng, with_branches=False)
            raw = surf.raw_coefficients()
            x, y = rng.uniform(-3, 3, 2)
            expected = brute_force_eval(raw, float(x), float(y))
            assert surf.eval_raw(float(x), float(y)) == pytest.approx(expected, rel=1e-10, abs=1e-10)


class TestValidation:
    def test_rejects_nonfinite_coefficients(self):
        from coverfield import NonFiniteValueError

        with pytest.raises(NonFiniteValueError):
            BiquadraticSurface(coefficients=[np.nan] + [0.0] * 8)

    def test_rejects_bad_beta(self):
        with pytest.raises(ValueError):
            BiquadraticSurface(coefficients=np.zeros(9), beta=0.0)

    def test_rejects_inverted_bounds(self):
        with pytest.raises(ValueError):
            BiquadraticSurface(coefficients=np.zeros(9), value_min=2.0, value_max=1.0)

    def test_transform_rejects_nonpositive_scale(self):
        with pytest.raises(ValueError):
            CoordTransform(x_scale=0.0)

    def test_transform_round_trip(self, rng):
        t = CoordTransform(x_offset=3.0, x_scale=0.25, y_offset=-1.0, y_scale=4.0)
        x, y = rng.uniform(-10, 10, 2)
        u, v = t.to_normalized(float(x), float(y))
        xr, yr = t.to_raw(u, v)
        assert xr == pytest.approx(x, abs=1e-12)
        assert yr == pytest.approx(y, abs=1e-12)
