import math

import numpy as np
import pytest
from scipy.constants import Boltzmann as K_B, c as C_LIGHT, hbar as HBAR

from thermocasimir import dilute as dl
from thermocasimir.asymptotics import ConstEpsAsymptotics, const_eps_low_T_entropy
from thermocasimir.lifshitz import (LowConfidenceWarning, PlateConfig, ScopeError, SolverSettings,
                                    effective_temperature, entropy, entropy_with_error,
                                    free_energy, matsubara_sum, phi, pressure,
                                    relative_thermal_correction_F, relative_thermal_correction_P,
                                    sweep, thermal_quantities, zero_temperature_free_energy)
from thermocasimir.numerics import ToleranceError
from thermocasimir.permittivity import Constant, Dilute, IdealMetal

IDEAL = IdealMetal()
A = 1e-6

# mpmath (25 digits) with the textbook reflection coefficients, ideal metal vs eps = 7:
#   sum'_l Phi(5 l) and int_0^inf Phi(zeta) d zeta
SUM_TAU5_EPS7 = -0.45890098544405820867
ZERO_T_EPS7 = -1.7515217515045472946


def _T(tau, a=A):
    return tau * effective_temperature(a) / (2 * math.pi)


def _energy_scale(a=A):
    return HBAR * C_LIGHT / (32 * math.pi**2 * a**3)


class TestPlateConfig:
    def test_effective_temperature(self):
        assert effective_temperature(1e-6) == pytest.approx(1144.94, abs=0.01)
        cfg = PlateConfig(1e-6, 300.0)
        assert cfg.tau == pytest.approx(2 * math.pi * 300 / cfg.T_eff)
        assert cfg.xi_c == pytest.approx(C_LIGHT / 2e-6)
        assert cfg.zeta(3) == pytest.approx(3 * cfg.tau)

    @pytest.mark.parametrize("a,T", [(0.0, 1.0), (-1e-6, 1.0), (1e-6, -1.0)])
    def test_invalid(self, a, T):
        with pytest.raises(ValueError):
            PlateConfig(a, T)

    def test_settings_validation(self):
        with pytest.raises(ValueError):
            SolverSettings(matsubara_tail_tol=0.0)
        with pytest.raises(ValueError):
            SolverSettings(gl_order=2)


class TestFreeEnergy:
    def test_against_high_precision_sum(self):
        T = _T(5.0)
        expected = K_B * T / (8 * math.pi * A**2) * SUM_TAU5_EPS7
        assert free_energy(PlateConfig(A, T), IDEAL, Constant(7.0)) == pytest.approx(expected,
                                                                                     rel=1e-10)

    def test_against_high_precision_zero_T(self):
        expected = _energy_scale() * ZERO_T_EPS7
        assert zero_temperature_free_energy(A, IDEAL, Constant(7.0)) == pytest.approx(expected,
                                                                                     rel=1e-10)
        assert free_energy(PlateConfig(A, 0.0), IDEAL, Constant(7.0)) == pytest.approx(expected,
                                                                                      rel=1e-10)

    @pytest.mark.parametrize("T", [0.0, 10.0, 300.0, 3000.0])
    def test_vacuum_gap(self, T):
        cfg = PlateConfig(A, T)
        assert free_energy(cfg, IDEAL, Constant(1.0)) == 0.0
        assert pressure(cfg, IDEAL, Constant(1.0)) == 0.0

    def test_ideal_metal_dielectric_is_out_of_scope(self):
        with pytest.raises(ScopeError):
            free_energy(PlateConfig(A, 300.0), Constant(5.0), IDEAL)

    @pytest.mark.parametrize("tau", [0.3, 2.0])
    def test_truncation_stability(self, tau):
        cfg = PlateConfig(A, _T(tau))
        tol = 1e-10
        base = free_energy(cfg, IDEAL, Constant(5.0), SolverSettings(matsubara_tail_tol=tol))
        term = lambda z: phi(z, IDEAL, np.full(np.shape(z), 5.0))
        l_max = int(math.ceil(10 / tau + 20))
        l = np.arange(1, 2 * l_max + 1, dtype=float)
        doubled = K_B * cfg.T / (8 * math.pi * A**2) * (0.5 * term(np.array([0.0]))[0]
                                                         + math.fsum(term(tau * l)))
        assert abs(doubled - base) <= 10 * tol * abs(base)

    def test_monotone_in_eps(self):
        cfg = PlateConfig(A, 300.0)
        values = [abs(free_energy(cfg, IDEAL, Constant(e))) for e in (1.0, 1.01, 2.0, 5.0, 11.66, 50.0)]
        assert values == sorted(values)

    def test_ideal_limit_of_dielectric(self):
        # huge eps approaches the ideal-metal pair at T = 0: -pi^2 hbar c / (720 a^3)
        f = zero_temperature_free_energy(A, IDEAL, Constant(1e8))
        assert f == pytest.approx(-math.pi**2 * HBAR * C_LIGHT / (720 * A**3), rel=1e-3)

    def test_dilute_agrees_to_second_order(self):
        # the engine is exact in eta, the closed forms keep eta and eta^2, so
        # the relative difference scales as eta^2
        gaps = []
        for eta in (0.01, 0.02, 0.04):
            p = dl.DiluteParams.from_temperature(eta, 2e-6, 270.0)
            engine = free_energy(PlateConfig(2e-6, 270.0), IDEAL, Constant(1 + eta))
            gaps.append(abs(engine / dl.dilute_free_energy(p) - 1))
        assert gaps[0] < 1e-4
        assert gaps[1] / gaps[0] == pytest.approx(4.0, rel=0.05)
        assert gaps[2] / gaps[1] == pytest.approx(4.0, rel=0.05)

    @pytest.mark.parametrize("tau", [0.1, 1.0, 10.0])
    def test_matsubara_sum_of_perturbative_term(self, tau):
        # summing the second-order term of each Matsubara frequency numerically
        # reproduces the Abel-Plana evaluation of the same series
        for eta in (0.01, 0.1):
            summed = tau * matsubara_sum(lambda u: dl.matsubara_term(eta, u), tau)
            ap = dl.free_energy_bracket(eta, tau, method="abel-plana")
            assert summed == pytest.approx(ap, rel=1e-8)

    def test_matsubara_sum_limits(self):
        with pytest.raises(ValueError):
            matsubara_sum(np.exp, 0.0)
        with pytest.raises(ToleranceError):
            matsubara_sum(lambda z: np.exp(-z), 1e-3, max_terms=100)
        assert matsubara_sum(lambda z: np.exp(-z), 1.0) == pytest.approx(
            0.5 + 1 / math.expm1(1.0), rel=1e-14)

    def test_high_temperature_approach(self):
        # far above T_eff the exact engine and the classical limit differ only by
        # the eta^3 remainder of the latter, which is constant in tau
        p = dl.DiluteParams(0.1, 40.0, A)
        engine = free_energy(PlateConfig(A, p.T), IDEAL, Dilute(0.1))
        classical = dl.high_T_free_energy(p)
        exact_closed = dl.dilute_free_energy(p)
        assert engine / classical - 1 == pytest.approx(engine / exact_closed - 1, abs=1e-9)
        assert abs(engine / classical - 1) < 2e-3


class TestDerivatives:
    def test_dilute_pressure_at_low_temperature(self):
        eta = 0.05
        cfg = PlateConfig(A, _T(1e-3))
        expected = -HBAR * C_LIGHT / (32 * math.pi**2 * A**4) * eta * (3 - 457 * eta / 320)
        got = pressure(cfg, IDEAL, Constant(1 + eta))
        assert got == pytest.approx(expected, rel=3 * eta**2)

    def test_pressure_matches_dilute_closed_form(self):
        eta = 0.01
        p = dl.DiluteParams.from_temperature(eta, 2e-6, 270.0)
        got = pressure(PlateConfig(2e-6, 270.0), IDEAL, Constant(1 + eta))
        assert got == pytest.approx(dl.dilute_pressure(p), rel=1e-4)

    def test_entropy_zero_at_zero_temperature(self):
        assert entropy(PlateConfig(A, 0.0), IDEAL, Constant(7.0)) == 0.0
        assert entropy_with_error(PlateConfig(A, 0.0), IDEAL, Constant(7.0)) == (0.0, 0.0)

    def test_dilute_entropy_non_negative(self):
        for T in (5.0, 50.0, 300.0, 2000.0):
            assert entropy(PlateConfig(A, T), IDEAL, Dilute(0.05)) >= 0.0

    def test_entropy_dip_for_eps7(self):
        s = entropy(PlateConfig(600e-9, 238.0), IDEAL, Constant(7.0))
        kev = s / (1e3 * 1.602176634e-19)
        assert kev == pytest.approx(-14.0, abs=0.5)

    def test_nernst_limit(self):
        tau = 0.002
        for eps in (3.0, 7.0, 10.0):
            T = _T(tau)
            got = entropy(PlateConfig(A, T), IDEAL, Constant(eps))
            asym = const_eps_low_T_entropy(ConstEpsAsymptotics.from_temperature(eps, A, T))
            assert got / asym == pytest.approx(1.0, abs=0.05)

    def test_relative_corrections_vanish_at_zero_T(self):
        cfg = PlateConfig(A, 0.0)
        assert relative_thermal_correction_F(cfg, IDEAL, Constant(3.0)) == 0.0
        assert relative_thermal_correction_P(cfg, IDEAL, Constant(3.0)) == 0.0

    def test_relative_correction_F(self):
        cfg = PlateConfig(A, 300.0)
        f = free_energy(cfg, IDEAL, Constant(10.0))
        f0 = zero_temperature_free_energy(A, IDEAL, Constant(10.0))
        assert relative_thermal_correction_F(cfg, IDEAL, Constant(10.0)) == pytest.approx(
            (f - f0) / f0, rel=1e-12)

    def test_low_confidence_flag(self):
        # a step scale far too small for the temperature makes the difference noisy
        s = SolverSettings(dT_scale=1e-9)
        with pytest.warns(LowConfidenceWarning):
            entropy(PlateConfig(A, 300.0), IDEAL, Constant(7.0), s)


class TestSweep:
    def test_two_points_equal_single_calls(self):
        template = PlateConfig(A, 0.0)
        rows = sweep("temperature", [100.0, 300.0], template, IDEAL, Constant(3.0))
        for row in rows:
            assert row.ok
            direct = thermal_quantities(PlateConfig(A, row.axis_value), IDEAL, Constant(3.0))
            assert tuple(row.quantities) == tuple(direct)

    def test_order_preserved_with_workers(self):
        values = [1.2e-6, 0.4e-6, 0.8e-6]
        template = PlateConfig(1e-6, 300.0)
        serial = sweep("separation", values, template, IDEAL, Constant(3.0))
        parallel = sweep("separation", values, template, IDEAL, Constant(3.0), workers=3)
        assert [r.axis_value for r in parallel] == values
        assert [tuple(r.quantities) for r in parallel] == [tuple(r.quantities) for r in serial]

    def test_failed_row_does_not_abort(self):
        s = SolverSettings(max_terms=1000)
        rows = sweep("temperature", [1e-3, 300.0], PlateConfig(A, 0.0), IDEAL, Constant(3.0), s)
        assert not rows[0].ok and math.isnan(rows[0].quantities.free_energy)
        assert rows[0].message
        assert rows[1].ok and rows[1].quantities.free_energy < 0

    def test_bad_axis(self):
        with pytest.raises(ValueError):
            sweep("pressure", [1.0], PlateConfig(A, 1.0), IDEAL, Constant(3.0))

    def test_scope(self):
        with pytest.raises(ScopeError):
            sweep("temperature", [1.0], PlateConfig(A, 1.0), IDEAL, IDEAL)
