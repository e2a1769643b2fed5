import math

import pytest
from hypothesis import given, strategies as st
from scipy.constants import Boltzmann as K_B, c as C_LIGHT, hbar as HBAR
from scipy.integrate import quad

from thermocasimir import dilute as dl
from thermocasimir.asymptotics import (VALIDITY_TAU, ConstEpsAsymptotics,
                                       const_eps_low_T_entropy, const_eps_low_T_free_energy,
                                       thermal_weight_moment, zero_freq_kernel_expansion)
from thermocasimir.lifshitz import (PlateConfig, effective_temperature, free_energy,
                                    zero_temperature_free_energy)
from thermocasimir.numerics import ZETA3, central_derivative
from thermocasimir.permittivity import Constant, IdealMetal

A = 1e-6


def test_no_contrast_no_correction():
    x = ConstEpsAsymptotics(1.0, A, 0.05)
    assert const_eps_low_T_free_energy(x, -1.23e-9) == -1.23e-9
    assert const_eps_low_T_entropy(x) == 0.0


def test_kernel_coefficient():
    assert zero_freq_kernel_expansion(3.0) == pytest.approx(math.pi / 4, rel=1e-15)
    assert zero_freq_kernel_expansion(1.0) == 0.0
    assert zero_freq_kernel_expansion(3.0, 0.2) == pytest.approx(math.pi / 4 * 0.04, rel=1e-15)
    with pytest.raises(ValueError):
        zero_freq_kernel_expansion(0.5)


def test_thermal_weight_moment_by_quadrature():
    value, _ = quad(lambda t: t * t * math.exp(-2 * math.pi * t) / -math.expm1(-2 * math.pi * t)
                    if t > 0 else 0.0, 0, math.inf,
                    epsabs=0, epsrel=1e-13)
    assert thermal_weight_moment() == pytest.approx(value, rel=1e-12)
    assert thermal_weight_moment() == pytest.approx(ZETA3 / (4 * math.pi**3), rel=1e-15)


def test_free_energy_coefficient_from_kernel():
    # energy scale * tau^3 * kernel coefficient * moment reproduces 1/(512 pi^4)
    x = ConstEpsAsymptotics(5.0, A, 0.03)
    scale = HBAR * C_LIGHT / (32 * math.pi**2 * A**3)
    from_kernel = -scale * x.tau**3 * zero_freq_kernel_expansion(5.0) * thermal_weight_moment()
    assert x.delta_free_energy == pytest.approx(from_kernel, rel=1e-14)


@pytest.mark.parametrize("eta", [1e-4, 1e-3, 1e-2])
def test_dilute_limit_matches_cubic_term(eta):
    # the tau^3 term of the dilute low-temperature free energy
    tau = 0.05
    x = ConstEpsAsymptotics(1.0 + eta, A, tau)
    scale = HBAR * C_LIGHT / (32 * math.pi**2 * A**3)
    cubic = -scale * eta**2 * ZETA3 * tau**3 / (32 * math.pi**2)
    assert x.delta_free_energy / cubic == pytest.approx(1.0, abs=eta)
    p0, p1 = dl.DiluteParams(eta, 0.0, A), dl.DiluteParams(eta, tau, A)
    # the dilute expansion's own tau^3 entropy term, to O(eta^3)
    s_dilute = K_B / (32 * math.pi * A**2) * eta**2 * tau**2 * 3 * ZETA3 / (8 * math.pi**2)
    assert const_eps_low_T_entropy(x) / s_dilute == pytest.approx(1.0, abs=eta)
    assert dl.low_T_entropy(p0) == 0.0 and dl.low_T_entropy(p1) > 0


def test_entropy_is_minus_temperature_derivative():
    eps0, T = 7.0, 20.0
    f = lambda t: ConstEpsAsymptotics.from_temperature(eps0, A, t).delta_free_energy
    d, _ = central_derivative(f, T, T)
    x = ConstEpsAsymptotics.from_temperature(eps0, A, T)
    assert -d == pytest.approx(x.entropy, rel=1e-10)
    # the monomial derivative explicitly
    dtau_dT = 2 * math.pi / effective_temperature(A)
    assert x.entropy == pytest.approx(-3 * x.delta_free_energy / x.tau * dtau_dT, rel=1e-14)


@given(st.floats(1.0, 1e4), st.floats(0.0, 1.0))
def test_entropy_non_negative(eps0, tau):
    assert ConstEpsAsymptotics(eps0, A, tau).entropy >= 0.0


def test_validity_flag():
    assert ConstEpsAsymptotics(7.0, A, VALIDITY_TAU).valid
    assert not ConstEpsAsymptotics(7.0, A, 0.11).valid
    with pytest.raises(ValueError):
        ConstEpsAsymptotics(0.5, A, 0.1)
    with pytest.raises(ValueError):
        ConstEpsAsymptotics(2.0, A, -0.1)


def test_engine_thermal_correction_approaches_cubic_law():
    # the tau^3 law is the leading term only: for eps0 = 7 the engine ratio
    # approaches 1 roughly linearly in tau
    f0 = zero_temperature_free_energy(A, IdealMetal(), Constant(7.0))
    ratios = []
    for tau in (0.01, 0.005, 0.002):
        T = tau * effective_temperature(A) / (2 * math.pi)
        f = free_energy(PlateConfig(A, T), IdealMetal(), Constant(7.0))
        ratios.append((f - f0) / ConstEpsAsymptotics(7.0, A, tau).delta_free_energy)
    assert ratios[0] < ratios[1] < ratios[2] < 1.0
    assert ratios[2] == pytest.approx(1.0, abs=0.02)
    # linear approach: the deficit shrinks in proportion to tau
    assert (1 - ratios[0]) / (1 - ratios[2]) == pytest.approx(5.0, rel=0.1)
