import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermocasimir.numerics import (ZETA3, QuadratureSpec, SeriesSpec, ToleranceError,
                                    central_derivative, ei_power_sum, exp_integral_Ei,
                                    integrate_finite, integrate_semiinfinite, riemann_zeta3)

# Ei(x) at 20 significant digits from an independent arbitrary-precision evaluation
EI_REFERENCE = {
    -1.0: -0.21938393439552027368,
    -10.0: -4.1569689296853242774e-06,
    -0.01: -4.0379295765381138318,
    -30.0: -3.0215520106888125448e-15,
    -1.5: -0.1000195824066326519,
    -4.0: -0.0037793524098489064789,
}


class TestIntegrateSemiinfinite:
    def test_gamma_two(self):
        assert integrate_semiinfinite(lambda y: y * np.exp(-y), 0.0, QuadratureSpec()) == \
            pytest.approx(1.0, rel=1e-12)

    def test_log_kernel_gives_minus_zeta3(self):
        val = integrate_semiinfinite(lambda y: y * np.log1p(-np.exp(-y)), 0.0,
                                     QuadratureSpec(1e-12))
        assert val == pytest.approx(-ZETA3, rel=1e-11)

    def test_shifted_lower_limit(self):
        val = integrate_semiinfinite(lambda y: y * np.exp(-y), 2.0, QuadratureSpec())
        assert val == pytest.approx(3 * math.exp(-2), rel=1e-12)

    def test_non_convergence_reports_estimate(self):
        spec = QuadratureSpec(relative_tolerance=1e-14, max_subdivisions=16)
        with pytest.raises(ToleranceError) as info:
            integrate_finite(lambda x: np.sin(1.0 / (x + 1e-4)), 0.0, 1.0, spec)
        assert info.value.estimate is not None and math.isfinite(info.value.estimate)

    def test_deterministic(self):
        f = lambda y: np.exp(-y) * np.cos(y)  # noqa: E731
        assert integrate_semiinfinite(f, 0.3, QuadratureSpec()) == \
            integrate_semiinfinite(f, 0.3, QuadratureSpec())

    @settings(max_examples=25, deadline=None)
    @given(st.floats(1.0, 3.0), st.floats(1.0, 3.0), st.floats(-2, 2), st.floats(-2, 2))
    def test_linearity(self, k1, k2, alpha, beta):
        spec = QuadratureSpec(1e-10)
        f = lambda y: y**2 * np.exp(-k1 * y)  # noqa: E731
        g = lambda y: np.exp(-k2 * y) / (1 + y)  # noqa: E731
        lhs = integrate_semiinfinite(lambda y: alpha * f(y) + beta * g(y), 0.0, spec)
        If, Ig = integrate_semiinfinite(f, 0.0, spec), integrate_semiinfinite(g, 0.0, spec)
        scale = abs(alpha * If) + abs(beta * Ig)
        assert abs(lhs - (alpha * If + beta * Ig)) <= 2 * 1e-10 * scale + 1e-300

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(relative_tolerance=0.1)
        with pytest.raises(ValueError):
            QuadratureSpec(max_subdivisions=4)
        with pytest.raises(ValueError):
            SeriesSpec(tail_tolerance=0.0)


class TestEi:
    @pytest.mark.parametrize("x, expected", sorted(EI_REFERENCE.items()))
    def test_reference_values(self, x, expected):
        assert exp_integral_Ei(x) == pytest.approx(expected, rel=2e-15)

    def test_large_negative_tends_to_zero_from_below(self):
        v = exp_integral_Ei(-700.0)
        assert v < 0 and v > -1e-300

    def test_domain(self):
        with pytest.raises(ValueError):
            exp_integral_Ei(0.0)
        with pytest.raises(ValueError):
            exp_integral_Ei(2.0)

    def test_vectorised_matches_scalar(self):
        xs = np.array([-0.3, -1.0, -7.0, -40.0])
        assert np.array_equal(exp_integral_Ei(xs), [exp_integral_Ei(float(x)) for x in xs])

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-50.0, -0.05))
    def test_derivative_relation(self, x):
        d, _ = central_derivative(exp_integral_Ei, x, abs(x) * 0.1)
        assert d == pytest.approx(math.exp(x) / x, rel=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-60.0, -1e-3), st.floats(1e-3, 5.0))
    def test_negative_and_rising_to_zero_as_x_decreases(self, x, dx):
        assert exp_integral_Ei(x) < 0
        assert exp_integral_Ei(x - dx) > exp_integral_Ei(x)


class TestEiPowerSum:
    @pytest.mark.parametrize("p, tau", [(2, 1.0), (4, 0.5), (2, 0.05), (4, 3.0)])
    def test_brute_force(self, p, tau):
        l = np.arange(1, 10**4 + 1, dtype=float)
        brute = math.fsum(l**p * exp_integral_Ei(-2 * tau * l))
        assert ei_power_sum(p, tau) == pytest.approx(brute, rel=1e-10)

    def test_negative_and_vanishing(self):
        assert ei_power_sum(4, 0.1) < 0
        assert -1e-250 < ei_power_sum(2, 300.0) < 0

    @pytest.mark.parametrize("p", [2, 4])
    def test_increasing_in_tau(self, p):
        taus = np.geomspace(0.05, 20, 40)
        vals = [ei_power_sum(p, t) for t in taus]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_max_terms(self):
        with pytest.raises(ToleranceError):
            ei_power_sum(2, 1e-4, SeriesSpec(max_terms=1000))

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            ei_power_sum(3, 1.0)
        with pytest.raises(ValueError):
            ei_power_sum(2, 0.0)


class TestZeta3:
    def test_value(self):
        assert riemann_zeta3() == 1.2020569031595942

    def test_partial_sum_bounds(self):
        n = np.arange(1, 10**6 + 1, dtype=float)
        partial = math.fsum(n**-3.0)
        # the tail is 5e-13 - O(1e-19), which is below one ulp of zeta(3)
        assert partial < riemann_zeta3() < partial + 5e-13 + math.ulp(1.2)

    def test_ratio_to_pi_squared(self):
        assert riemann_zeta3() / math.pi**2 == pytest.approx(0.121793, abs=1e-6)


class TestCentralDerivative:
    def test_polynomial(self):
        d, err = central_derivative(lambda x: x * x, 3.0, 3.0)
        assert d == pytest.approx(6.0, abs=1e-10)
        assert isinstance(d, float) and isinstance(err, float)

    def test_exponential(self):
        d, _ = central_derivative(math.exp, 0.0, 1.0)
        assert d == pytest.approx(1.0, abs=1e-9)

    def test_error_estimate_reflects_roughness(self):
        _, smooth = central_derivative(math.sin, 0.4, 1.0)
        _, rough = central_derivative(lambda x: math.sin(300 * x), 0.4, 1.0)
        assert rough > 1e3 * smooth

    def test_bad_scale(self):
        with pytest.raises(ValueError):
            central_derivative(math.exp, 0.0, 0.0)
