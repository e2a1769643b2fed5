r"""Ideal metal facing a dilute dielectric, ``eps = 1 + eta``, to second order in eta.

Every quantity is first computed as a dimensionless bracket in ``(eta, tau)``
and only then multiplied by its dimensional prefactor:

* free energy  ``F = -hbar c / (32 pi^2 a^3) * G(tau)``
* entropy      ``S = k_B / (8 pi a^2) * G'(tau)``
* pressure     ``P = -hbar c / (32 pi^2 a^4) * (3 G - tau G')``

Thermal effects are exact at each order in eta. Exponentials are expressed
through ``q = exp(-tau)`` so that large ``tau`` cannot overflow.

Two independent evaluations of ``G`` are provided: the closed form obtained by
summing over Matsubara frequencies term by term, and the Abel-Plana form
(integral over a continuous frequency plus a thermal integral along the
imaginary axis). The low- and high-temperature expansions follow from them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import Boltzmann as K_B, c as C_LIGHT, hbar as HBAR
from scipy.special import sici

from .lifshitz import effective_temperature
from .numerics import (ZETA3, QuadratureSpec, SeriesSpec, ei_power_sum, exp_integral_Ei,
                       integrate_semiinfinite)

__all__ = [
    "DiluteParams",
    "free_energy_bracket",
    "entropy_bracket",
    "pressure_bracket",
    "dilute_free_energy",
    "dilute_entropy",
    "dilute_pressure",
    "dilute_zero_T_free_energy",
    "dilute_zero_T_pressure",
    "dilute_relative_thermal_correction_F",
    "dilute_relative_thermal_correction_P",
    "matsubara_term",
    "zero_T_integral",
    "imaginary_axis_difference",
    "abel_plana_thermal_integral",
    "abel_plana_free_energy",
    "low_T_thermal_integral",
    "low_T_free_energy",
    "low_T_entropy",
    "low_T_pressure",
    "high_T_free_energy",
    "high_T_entropy",
    "high_T_pressure",
]

# Ei sums enter differences of large terms at small tau; sum them to the last digit
_SERIES = SeriesSpec(tail_tolerance=1e-17)


@dataclass(frozen=True)
class DiluteParams:
    eta: float
    tau: float
    a: float

    def __post_init__(self):
        if not 0.0 < self.eta <= 0.2:
            raise ValueError("eta must lie in (0, 0.2]")
        if not self.tau >= 0.0:
            raise ValueError("tau must be non-negative")
        if not self.a > 0.0:
            raise ValueError("separation must be positive")

    @classmethod
    def from_temperature(cls, eta: float, a: float, T: float) -> "DiluteParams":
        return cls(eta, 2.0 * math.pi * T / effective_temperature(a), a)

    @property
    def T(self) -> float:
        return self.tau * effective_temperature(self.a) / (2.0 * math.pi)

    @property
    def energy_scale(self) -> float:
        """``hbar c / (32 pi^2 a^3)`` in J/m^2."""
        return HBAR * C_LIGHT / (32.0 * math.pi**2 * self.a**3)


def _q_terms(tau):
    q = math.exp(-tau)
    one_m_q = -math.expm1(-tau)
    one_m_q2 = -math.expm1(-2.0 * tau)
    one_m_q4 = -math.expm1(-4.0 * tau)
    return q, one_m_q, one_m_q2, one_m_q4


def _g_closed(eta: float, tau: float) -> float:
    # sum over Matsubara frequencies done term by term
    q, d1, d2, d4 = _q_terms(tau)
    q2, q4 = q * q, q**4
    t1 = (d2 + 2.0 * tau * q) / d1**2
    t2 = (d4 + 4.0 * tau * q2) / d2**2
    t3 = tau**2 * q2 * (2.0 * tau * (1.0 + 4.0 * q2 + q4) - d4) / d2**4
    sums = 2.0 * tau**4 * ei_power_sum(4, tau, _SERIES) - 2.0 * tau**2 * ei_power_sum(2, tau, _SERIES)
    return eta * tau * t1 / 4.0 - eta**2 * tau / 16.0 * (2.0 * t1 - t2 / 4.0 + t3 / 2.0 + sums)


def _dg_closed(eta: float, tau: float) -> float:
    q, d1, d2, d4 = _q_terms(tau)
    q2, q4 = q * q, q**4
    u = tau * q * (q * (1.0 + tau) - (1.0 - tau)) / d1**3
    v = q2 * (2.0 * tau + d2) / d2**2
    w = tau**2 * q2 * (10.0 * tau * (1.0 + 4.0 * q2 + q4) - 3.0 * d4) / d2**4
    first = (1.0 + q) / (2.0 * d1) - u
    second = ((7.0 + 9.0 * q) / (4.0 * d1) - 4.0 * u - v / 2.0 + w / 2.0
              - 6.0 * tau**2 * ei_power_sum(2, tau, _SERIES)
              + 10.0 * tau**4 * ei_power_sum(4, tau, _SERIES))
    return eta / 2.0 * first - eta**2 / 16.0 * second


def _p_closed(eta: float, tau: float) -> float:
    q, d1, d2, d4 = _q_terms(tau)
    q2, q4 = q * q, q**4
    t1 = (d2 + 2.0 * tau * q) / d1**2
    t2 = (d4 + 4.0 * tau * q2) / d2**2
    x = tau**2 * q * (1.0 + q) / d1**3
    y = tau**3 * q2 * (1.0 + 4.0 * q2 + q4) / d2**4
    inner = t1 + x - t2 / 8.0 - y / 2.0 - tau**4 * ei_power_sum(4, tau, _SERIES)
    return tau * (eta / 2.0 * (t1 + x) - eta**2 / 4.0 * inner)


_METHODS = ("auto", "closed", "abel-plana")
# below these tau the closed forms lose digits to cancellation between 1/tau terms
_G_SWITCH = 0.01
_DG_SWITCH = 0.5


def _check(eta, tau, method):
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}")
    if not tau > 0.0:
        raise ValueError("tau must be positive")


def free_energy_bracket(eta: float, tau: float, method: str = "auto") -> float:
    """``G(tau)`` with ``F = -hbar c / (32 pi^2 a^3) G``.

    ``method="closed"`` sums the Matsubara series in closed form,
    ``"abel-plana"`` uses the integral representation, ``"auto"`` picks the
    closed form except at small ``tau`` where it cancels badly.
    """
    _check(eta, tau, method)
    if method == "closed" or (method == "auto" and tau >= _G_SWITCH):
        return _g_closed(eta, tau)
    return _zero_T_bracket(eta) + tau * abel_plana_thermal_integral(eta, tau)


def entropy_bracket(eta: float, tau: float, method: str = "auto") -> float:
    """``G'(tau)``, so that ``S = k_B / (8 pi a^2) G'``."""
    _check(eta, tau, method)
    if method == "closed" or (method == "auto" and tau >= _DG_SWITCH):
        return _dg_closed(eta, tau)
    return _abel_plana_dg(eta, tau)


def pressure_bracket(eta: float, tau: float, method: str = "auto") -> float:
    """``3 G - tau G'``, so that ``P = -hbar c / (32 pi^2 a^4) (3G - tau G')``."""
    _check(eta, tau, method)
    if method == "closed" or (method == "auto" and tau >= _G_SWITCH):
        return _p_closed(eta, tau)
    return 3.0 * free_energy_bracket(eta, tau, method) - tau * _abel_plana_dg(eta, tau)


def _zero_T_bracket(eta: float) -> float:
    return eta * (1.0 - 457.0 * eta / 960.0)


def dilute_free_energy(p: DiluteParams) -> float:
    """Free energy per unit area (J/m^2), exact in temperature at each order in eta."""
    if p.tau == 0.0:
        return dilute_zero_T_free_energy(p.eta, p.a)
    return -p.energy_scale * free_energy_bracket(p.eta, p.tau)


def dilute_entropy(p: DiluteParams) -> float:
    """Entropy per unit area, J/(m^2 K); zero at ``tau = 0``."""
    if p.tau == 0.0:
        return 0.0
    return K_B / (8.0 * math.pi * p.a**2) * entropy_bracket(p.eta, p.tau)


def dilute_pressure(p: DiluteParams) -> float:
    """Pressure in Pa (negative: attraction)."""
    if p.tau == 0.0:
        return dilute_zero_T_pressure(p.eta, p.a)
    return -p.energy_scale / p.a * pressure_bracket(p.eta, p.tau)


def dilute_zero_T_free_energy(eta: float, a: float) -> float:
    """``-(hbar c / 32 pi^2 a^3) eta (1 - 457 eta / 960)``."""
    return -HBAR * C_LIGHT / (32.0 * math.pi**2 * a**3) * _zero_T_bracket(eta)


def dilute_zero_T_pressure(eta: float, a: float) -> float:
    """``-(hbar c / 32 pi^2 a^4) eta (3 - 457 eta / 320)``."""
    return -HBAR * C_LIGHT / (32.0 * math.pi**2 * a**4) * eta * (3.0 - 457.0 * eta / 320.0)


def dilute_relative_thermal_correction_F(p: DiluteParams) -> float:
    if p.tau == 0.0:
        return 0.0
    return dilute_free_energy(p) / dilute_zero_T_free_energy(p.eta, p.a) - 1.0


def dilute_relative_thermal_correction_P(p: DiluteParams) -> float:
    if p.tau == 0.0:
        return 0.0
    return dilute_pressure(p) / dilute_zero_T_pressure(p.eta, p.a) - 1.0


# --- Abel-Plana route -------------------------------------------------------

def matsubara_term(eta: float, u):
    """Term of the Matsubara sum as a function of ``u = tau * l`` (``u >= 0``).

    ``G(tau) = tau * sum'_l matsubara_term(eta, tau l)``.
    """
    u = np.asarray(u, dtype=float)
    e1 = np.exp(-u)
    e2 = np.exp(-2.0 * u)
    ei_part = np.zeros_like(u)
    pos = u > 0
    ei_part[pos] = 2.0 * u[pos] ** 2 * (1.0 - u[pos] ** 2) * exp_integral_Ei(-2.0 * u[pos])
    bracket = (4.0 * (1.0 + u) * e1 - 0.5 * (1.0 + 2.0 * u + u**2 - 2.0 * u**3) * e2 - ei_part)
    return eta / 2.0 * (1.0 + u) * e1 - eta**2 / 16.0 * bracket


def zero_T_integral(eta: float, spec: QuadratureSpec = QuadratureSpec(1e-13)) -> float:
    """``int_0^inf matsubara_term(eta, u) du`` evaluated by quadrature."""
    return integrate_semiinfinite(lambda u: matsubara_term(eta, u), 0.0, spec)


# Taylor coefficients of odd functions, listed from u^3 upwards in steps of u^2,
# used where the closed forms cancel to a few digits near u = 0
_A_SERIES = (-1 / 3, 1 / 30, -1 / 840, 1 / 45360, -1 / 3991680, 1 / 518918400)
_B_SERIES = (4 / 3, -64 / 15, 152 / 105, -544 / 2835, 424 / 31185, -1216 / 2027025,
             1648 / 91216125)
_UA_SLOPE_SERIES = (-4 / 3, 1 / 5, -1 / 105, 1 / 4536, -1 / 332640, 1 / 37065600)
_UB_SLOPE_SERIES = (16 / 3, -128 / 5, 1216 / 105, -1088 / 567, 1696 / 10395, -2432 / 289575,
                    26368 / 91216125)
_SERIES_CUT = 0.1


def _with_series(u, exact, coeffs):
    small = np.abs(u) < _SERIES_CUT
    if np.any(small):
        us = u[small]
        exact[small] = us**3 * np.polyval(coeffs[::-1], us * us)
    return exact


def _ucos_minus_sin(u):
    return _with_series(u, u * np.cos(u) - np.sin(u), _A_SERIES)


def _oscillating_part(u):
    # (2u + 2u^3) cos 2u - (1 - u^2) sin 2u
    exact = (2.0 * u + 2.0 * u**3) * np.cos(2.0 * u) - (1.0 - u**2) * np.sin(2.0 * u)
    return _with_series(u, exact, _B_SERIES)


def imaginary_axis_difference(eta: float, u):
    """``(F(iu) - F(-iu)) / i`` for the term of :func:`matsubara_term`.

    The analytic continuation of ``Ei(-2u)`` to ``u = +-i s`` differs across
    the imaginary axis by ``-2i (Si(2s) - pi/2)``, which keeps everything real.
    """
    u = np.asarray(u, dtype=float)
    a = _ucos_minus_sin(u)
    si, _ = sici(2.0 * u)
    second = _oscillating_part(u)
    return (eta * a - eta**2 / 2.0 * a + eta**2 / 16.0 * second
            + eta**2 / 4.0 * u**2 * (1.0 + u**2) * (si - math.pi / 2.0))


def _imaginary_axis_slope(eta: float, u):
    """``d/du [u * D(u)]`` with ``D`` from :func:`imaginary_axis_difference`."""
    u = np.asarray(u, dtype=float)
    two_u = 2.0 * u
    si, _ = sici(two_u)
    s2, c2 = np.sin(two_u), np.cos(two_u)
    ua_slope = _with_series(u, u * np.cos(u) - np.sin(u) - u**2 * np.sin(u),
                            _UA_SLOPE_SERIES)
    second = (2.0 * u + 2.0 * u**3) * c2 - (1.0 - u**2) * s2
    dsecond = 8.0 * u**2 * c2 - (2.0 * u + 4.0 * u**3) * s2
    ub_slope = _with_series(u, second + u * dsecond, _UB_SLOPE_SERIES)
    h = u**2 * (1.0 + u**2) * (si - math.pi / 2.0)
    dh = (2.0 * u + 4.0 * u**3) * (si - math.pi / 2.0) + u * (1.0 + u**2) * s2
    return ((eta - eta**2 / 2.0) * ua_slope + eta**2 / 16.0 * ub_slope
            + eta**2 / 4.0 * (h + u * dh))


def _abel_plana_dg(eta: float, tau: float, spec: QuadratureSpec = QuadratureSpec(1e-13)) -> float:
    def integrand(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        pos = s > 0
        out[pos] = _imaginary_axis_slope(eta, tau * s[pos] / (2.0 * math.pi)) / np.expm1(s[pos])
        return out

    return -integrate_semiinfinite(integrand, 0.0, spec) / (2.0 * math.pi)


def abel_plana_thermal_integral(eta: float, tau: float,
                                spec: QuadratureSpec = QuadratureSpec(1e-13)) -> float:
    """``i int_0^inf dt (F(it) - F(-it)) / (exp(2 pi t) - 1)`` with ``F(t) = term(tau t)``."""
    # substitute s = 2 pi t so the weight decays like exp(-s)
    def integrand(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        pos = s > 0
        out[pos] = imaginary_axis_difference(eta, tau * s[pos] / (2.0 * math.pi)) / np.expm1(s[pos])
        return out

    return -integrate_semiinfinite(integrand, 0.0, spec) / (2.0 * math.pi)


def low_T_thermal_integral(eta: float, tau: float) -> float:
    """Leading small-``tau`` form of :func:`abel_plana_thermal_integral`."""
    return eta * tau**3 / 720.0 - eta**2 * tau**2 / 32.0 * (tau / 10.0 - ZETA3 / math.pi**2)


def abel_plana_free_energy(p: DiluteParams, spec: QuadratureSpec = QuadratureSpec(1e-13)) -> float:
    """Free energy from the Abel-Plana form of the Matsubara sum (J/m^2)."""
    if not p.tau > 0.0:
        raise ValueError("tau must be positive")
    total = zero_T_integral(p.eta, spec) / p.tau + abel_plana_thermal_integral(p.eta, p.tau, spec)
    return -p.energy_scale * p.tau * total


# --- asymptotic regimes -------------------------------------------------------

def low_T_free_energy(p: DiluteParams) -> float:
    """Low-temperature expansion; omits O(eta tau^6) and O(eta^2 tau^5)."""
    t, e = p.tau, p.eta
    return -p.energy_scale * e * (1.0 + t**4 / 720.0
                                  - e / 32.0 * (457.0 / 30.0 - ZETA3 * t**3 / math.pi**2
                                                + t**4 / 10.0))


def low_T_entropy(p: DiluteParams) -> float:
    t, e = p.tau, p.eta
    return K_B / (32.0 * math.pi * p.a**2) * e * t**2 * (
        t / 45.0 + e / 4.0 * (3.0 * ZETA3 / (2.0 * math.pi**2) - t / 5.0))


def low_T_pressure(p: DiluteParams) -> float:
    t, e = p.tau, p.eta
    return -p.energy_scale / p.a * e * (3.0 - t**4 / 720.0 - e / 320.0 * (457.0 - t**4))


def high_T_free_energy(p: DiluteParams) -> float:
    return -K_B * p.T / (32.0 * math.pi * p.a**2) * p.eta * (1.0 - 7.0 * p.eta / 16.0)


def high_T_entropy(p: DiluteParams) -> float:
    return K_B / (32.0 * math.pi * p.a**2) * p.eta * (1.0 - 7.0 * p.eta / 16.0)


def high_T_pressure(p: DiluteParams) -> float:
    return -K_B * p.T / (16.0 * math.pi * p.a**3) * p.eta * (1.0 - 7.0 * p.eta / 16.0)
