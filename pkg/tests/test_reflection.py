import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermocasimir.permittivity import IdealMetal
from thermocasimir.reflection import ReflectionPair, log_kernel, reflection_coeffs

IDEAL = reflection_coeffs(IdealMetal(), 0.0, 1.0)


def _log_terms(eps, zeta, y):
    r = reflection_coeffs(eps, zeta, y)
    ey = math.exp(-y)
    return math.log1p(-float(r.r_par) * ey), math.log1p(-float(r.r_perp) * ey)


def _eq4_orders(zeta, y):
    """First and second order coefficients of the dilute expansion."""
    ey = math.exp(-y)
    z2, z4, y2, y4 = zeta**2, zeta**4, y**2, y**4
    par1 = ey / 4 * (z2 / y2 - 2)
    par2 = -ey / (32 * y4) * ((4 + ey) * z4 - 4 * ey * z2 * y2 + 4 * (ey - 2) * y4)
    perp1 = -ey / 4 * z2 / y2
    perp2 = -ey / (32 * y4) * (ey - 4) * z4
    return (par1, par2), (perp1, perp2)


def _fit_orders(g, h):
    # g(eta) = c1 eta + c2 eta^2 + c3 eta^3 through eta = h, 2h, 3h
    etas = np.array([h, 2 * h, 3 * h])
    vander = np.stack([etas, etas**2, etas**3], axis=1)
    return np.linalg.solve(vander, np.array([g(e) for e in etas]))


class TestReflectionCoeffs:
    @pytest.mark.parametrize("y", [0.0, 0.3, 2.0, 40.0])
    def test_static_limit(self, y):
        r = reflection_coeffs(10.0, 0.0, y)
        assert float(r.r_par) == pytest.approx(9 / 11, rel=1e-15)
        assert float(r.r_perp) == 0.0

    @given(st.floats(0.0, 20.0), st.floats(0.0, 20.0))
    def test_vacuum_reflects_nothing(self, zeta, extra):
        r = reflection_coeffs(1.0, zeta, zeta + extra)
        assert float(r.r_par) == 0.0 and float(r.r_perp) == 0.0

    def test_hand_value(self):
        r = reflection_coeffs(2.0, 1.0, 1.0)
        s2 = math.sqrt(2.0)
        assert float(r.r_par) == pytest.approx((2 - s2) / (2 + s2), rel=1e-14)
        assert float(r.r_perp) == pytest.approx((s2 - 1) / (s2 + 1), rel=1e-14)
        assert float(r.r_par) == pytest.approx(0.171573, abs=1e-6)

    def test_matches_textbook_form(self):
        rng = np.random.default_rng(1)
        eps = rng.uniform(1.5, 30, 50)
        zeta = rng.uniform(0, 5, 50)
        y = zeta + rng.uniform(0, 5, 50)
        k = np.sqrt(y**2 + zeta**2 * (eps - 1))
        r = reflection_coeffs(eps, zeta, y)
        np.testing.assert_allclose(r.r_par, (eps * y - k) / (eps * y + k), rtol=1e-12, atol=1e-15)
        np.testing.assert_allclose(r.r_perp, (k - y) / (k + y), rtol=1e-12, atol=1e-15)

    def test_ideal_metal(self):
        r = reflection_coeffs(IdealMetal(), np.array([0.0, 1.0]), np.array([1.0, 3.0]))
        assert np.all(r.r_par == 1.0) and np.all(r.r_perp == 1.0)

    def test_infinite_eps(self):
        r = reflection_coeffs(math.inf, np.array([0.0, 1.0]), np.array([1.0, 2.0]))
        assert np.all(r.r_par == 1.0)
        assert list(r.r_perp) == [0.0, 1.0]

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            reflection_coeffs(2.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            reflection_coeffs(0.9, 0.0, 1.0)

    def test_dilute_no_cancellation(self):
        # r_perp ~ eta zeta^2 / (4 y^2) must keep relative accuracy for tiny eta
        eta = 1e-12
        r = reflection_coeffs(1.0 + eta, 1.0, 1.0)
        assert float(r.r_perp) == pytest.approx(eta / 4, rel=1e-3)

    @given(st.floats(1.0, 100.0), st.floats(0.0, 100.0), st.floats(0.0, 10.0),
           st.floats(0.0, 10.0))
    @settings(max_examples=200)
    def test_bounds_and_monotone_in_eps(self, eps, d_eps, zeta, extra):
        y = zeta + extra
        lo = reflection_coeffs(eps, zeta, y)
        hi = reflection_coeffs(eps + d_eps, zeta, y)
        for r in (lo, hi):
            assert 0.0 <= float(r.r_par) <= 1.0
            assert 0.0 <= float(r.r_perp) <= 1.0
        assert float(hi.r_par) >= float(lo.r_par) - 1e-15
        assert float(hi.r_perp) >= float(lo.r_perp) - 1e-15

    def test_ideal_metal_is_supremum(self):
        r = reflection_coeffs(1e12, 0.5, 1.0)
        assert float(r.r_par) == pytest.approx(1.0, abs=1e-5)
        assert float(r.r_perp) == pytest.approx(1.0, abs=1e-5)

    @given(st.floats(1.0, 50.0), st.floats(0.0, 30.0))
    def test_static_tm_independent_of_y(self, eps, y):
        r = reflection_coeffs(eps, 0.0, y)
        assert float(r.r_par) == pytest.approx((eps - 1) / (eps + 1), rel=1e-13, abs=1e-16)
        assert float(r.r_perp) == 0.0


class TestLogKernel:
    def test_no_reflection(self):
        zero = ReflectionPair(np.zeros(3), np.zeros(3))
        assert np.all(log_kernel(zero, zero, np.array([0.1, 1.0, 5.0])) == 0.0)

    def test_ideal_pair(self):
        y = np.array([0.01, 1.0, 10.0, 700.0])
        pair = reflection_coeffs(IdealMetal(), np.zeros(4), y)
        np.testing.assert_allclose(log_kernel(pair, pair, y), 2 * np.log1p(-np.exp(-y)),
                                   rtol=1e-15)

    @given(st.floats(1.0, 1e3), st.floats(0.0, 10.0), st.floats(1e-3, 10.0))
    def test_non_positive(self, eps, zeta, extra):
        y = zeta + extra
        value = log_kernel(IDEAL, reflection_coeffs(eps, zeta, y), y)
        assert float(value) <= 0.0

    @pytest.mark.parametrize("zeta,y", [(0.0, 0.5), (0.3, 0.3), (0.7, 2.1), (2.0, 2.5),
                                        (5.0, 9.0), (0.05, 4.0)])
    def test_dilute_first_and_second_order(self, zeta, y):
        (par1, par2), (perp1, perp2) = _eq4_orders(zeta, y)
        h = 1e-4
        c_par = _fit_orders(lambda e: _log_terms(1 + e, zeta, y)[0], h)
        c_perp = _fit_orders(lambda e: _log_terms(1 + e, zeta, y)[1], h)
        assert c_par[0] == pytest.approx(par1, abs=1e-8)
        assert c_perp[0] == pytest.approx(perp1, abs=1e-8)
        assert c_par[1] == pytest.approx(par2, abs=1e-6)
        assert c_perp[1] == pytest.approx(perp2, abs=1e-6)
        c_sum = _fit_orders(
            lambda e: float(log_kernel(IDEAL, reflection_coeffs(1 + e, zeta, y), y)), h)
        assert c_sum[0] == pytest.approx(par1 + perp1, abs=1e-8)
        assert c_sum[1] == pytest.approx(par2 + perp2, abs=1e-6)

    @given(st.floats(0.0, 6.0), st.floats(0.01, 6.0))
    @settings(max_examples=50)
    def test_dilute_first_order_random(self, zeta, extra):
        y = zeta + extra
        (par1, _), (perp1, _) = _eq4_orders(zeta, y)
        c = _fit_orders(lambda e: float(log_kernel(IDEAL, reflection_coeffs(1 + e, zeta, y), y)),
                        1e-4)
        assert c[0] == pytest.approx(par1 + perp1, abs=1e-8)
