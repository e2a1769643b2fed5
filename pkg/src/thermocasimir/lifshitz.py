"""Finite-temperature Lifshitz free energy for a metal plate facing a dielectric.

The free energy per unit area is written in dimensionless variables as

    F(a, T) = k_B T / (8 pi a^2) * sum'_l Phi(zeta_l),
    Phi(zeta) = int_zeta^inf y dy [ln(1 - rM_par rD_par e^-y) + ln(1 - rM_perp rD_perp e^-y)]

with ``zeta_l = tau l``, ``tau = 2 pi T / T_eff`` and ``k_B T_eff = hbar c / (2a)``.
The primed sum gives the ``l = 0`` term half weight. At ``T = 0`` the sum
turns into ``hbar c / (32 pi^2 a^3) int_0^inf Phi(zeta) dzeta``.

``Phi`` is evaluated with a fixed composite Gauss-Legendre rule whose panels
are graded towards ``y = zeta``. A fixed rule (rather than an adaptive one)
keeps ``F`` a smooth function of ``a`` and ``T``, which the finite-difference
entropy and pressure rely on.
"""

from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.constants import Boltzmann as K_B, c as C_LIGHT, hbar as HBAR

from .numerics import QuadratureSpec, ToleranceError, central_derivative, gauss_legendre_panels
from .permittivity import IdealMetal, PermittivityModel, eval_epsilon
from .reflection import ReflectionPair, log_kernel, reflection_coeffs

__all__ = [
    "PlateConfig",
    "SolverSettings",
    "ThermalQuantities",
    "LowConfidenceWarning",
    "ScopeError",
    "effective_temperature",
    "phi",
    "matsubara_sum",
    "free_energy",
    "zero_temperature_free_energy",
    "pressure",
    "entropy",
    "pressure_with_error",
    "entropy_with_error",
    "relative_thermal_correction_F",
    "relative_thermal_correction_P",
    "thermal_quantities",
    "SweepRow",
    "sweep",
]

log = logging.getLogger(__name__)


class LowConfidenceWarning(RuntimeWarning):
    """A finite-difference derivative has a large Richardson error estimate."""


class ScopeError(ValueError):
    """Plate pair outside the metal-dielectric configuration handled here."""


def effective_temperature(a: float) -> float:
    """``T_eff = hbar c / (2 a k_B)`` in kelvin."""
    return HBAR * C_LIGHT / (2.0 * a * K_B)


@dataclass(frozen=True)
class PlateConfig:
    a: float
    T: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise ValueError("separation must be positive")
        if not self.T >= 0.0:
            raise ValueError("temperature must be non-negative")

    @property
    def T_eff(self) -> float:
        return effective_temperature(self.a)

    @property
    def tau(self) -> float:
        return 2.0 * math.pi * self.T / self.T_eff

    @property
    def xi_c(self) -> float:
        """Characteristic frequency ``c / (2a)`` in rad/s."""
        return C_LIGHT / (2.0 * self.a)

    def zeta(self, l):
        return self.tau * np.asarray(l, dtype=float)

    def replace(self, **changes) -> "PlateConfig":
        return PlateConfig(changes.get("a", self.a), changes.get("T", self.T))


@dataclass(frozen=True)
class SolverSettings:
    """Numerical knobs of the engine.

    ``dT_scale`` / ``da_scale`` set the finite-difference step scale (the
    step itself is ``scale * eps**(1/5)``); ``None`` means "the current value
    of T or a".
    """

    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    matsubara_tail_tol: float = 1e-14
    max_terms: int = 10**6
    gl_order: int = 12
    dT_scale: float | None = None
    da_scale: float | None = None

    def __post_init__(self):
        if not 0.0 < self.matsubara_tail_tol < 1e-3:
            raise ValueError("matsubara_tail_tol must be in (0, 1e-3)")
        if self.gl_order < 4:
            raise ValueError("gl_order must be at least 4")


class ThermalQuantities(NamedTuple):
    free_energy: float   # J/m^2
    pressure: float      # Pa
    entropy: float       # J/(m^2 K)
    delta_F: float
    delta_P: float


# panel edges in x = y - zeta: geometric from _graded_start(zeta) up to 1, then fixed
_N_GRADED = 22
_X_FIXED = np.array([ 1.6, 2.5, 3.7, 5.2, 7.0, 9.5, 12.5, 16.0, 20.5, 26.0, 32.5, 40.0, 48.0])
# panel edges for the zero-temperature zeta integral
_ZETA_EDGES = np.array([0.0, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 4e-3, 0.012, 0.03, 0.07, 0.15,
                        0.3, 0.55, 0.9, 1.4, 2.1, 3.0, 4.2, 5.8, 8.0, 11.0, 15.0, 20.0, 26.0,
                        33.0, 42.0, 55.0])
_BLOCK = 2048


def _check_pair(metal, dielectric):
    if isinstance(dielectric, IdealMetal):
        raise ScopeError("the dielectric plate cannot be an ideal metal")


def phi(zeta, eps_m, eps_d, gl_order: int = 12) -> np.ndarray:
    """``Phi(zeta) = int_zeta^inf y K(zeta, y) dy`` for arrays of ``zeta``.

    ``eps_m`` / ``eps_d`` are the permittivities at each ``zeta`` (arrays of
    the same shape) or an :class:`IdealMetal` instance.
    """
    zeta = np.atleast_1d(np.asarray(zeta, dtype=float))
    out = np.empty(zeta.shape)
    for start in range(0, zeta.size, _BLOCK):
        sl = slice(start, start + _BLOCK)
        z = zeta[sl]
        em = eps_m if isinstance(eps_m, IdealMetal) else np.atleast_1d(eps_m)[sl][:, None]
        ed = eps_d if isinstance(eps_d, IdealMetal) else np.atleast_1d(eps_d)[sl][:, None]
        # reflection coefficients vary on the scale y ~ zeta; at zeta = 0 a
        # product r r' close to 1 puts a near-singularity close to y = 0
        x0 = np.where(z > 0.0, np.minimum(3e-3 * z, 3e-3), 1e-4)
        graded = np.exp(np.linspace(np.log(x0), 0.0, _N_GRADED)[:-1].T)
        edges = np.concatenate([np.zeros((z.size, 1)), graded,
                                np.broadcast_to(_X_FIXED, (z.size, _X_FIXED.size))], axis=1)
        x, w = gauss_legendre_panels(edges, gl_order)
        y = z[:, None] + x
        zz = np.broadcast_to(z[:, None], y.shape)
        pair_m = reflection_coeffs(em, zz, y)
        pair_d = reflection_coeffs(ed, zz, y)
        out[sl] = np.sum(w * y * log_kernel(pair_m, pair_d, y), axis=1)
    return out


def _eps_at(model, xi):
    return model if isinstance(model, IdealMetal) else eval_epsilon(model, xi)


def _phi_for(cfg_xi_c: float, zeta, metal, dielectric, gl_order):
    xi = zeta * cfg_xi_c
    return phi(zeta, _eps_at(metal, xi), _eps_at(dielectric, xi), gl_order)


def matsubara_sum(term, tau: float, tail_tol: float = 1e-14, max_terms: int = 10**6) -> float:
    """``sum'_{l>=0} term(tau l)`` with the ``l = 0`` term at half weight.

    ``term`` maps an array of ``zeta`` values to an array of terms. Blocks
    of terms are added until a geometric bound on the remainder drops below
    ``tail_tol`` times the partial sum; at least ``10 / tau + 20`` terms are
    always taken.
    """
    if not tau > 0.0:
        raise ValueError("tau must be positive")
    l_min = int(math.ceil(10.0 / tau + 20))
    if l_min > max_terms:
        raise ToleranceError(f"tau = {tau:.3e} needs more than max_terms = {max_terms} "
                             "Matsubara terms")
    first = np.asarray(term(np.array([0.0])), dtype=float)
    parts = [0.5 * first[0]]
    start, stop = 1, l_min + 1
    while True:
        l = np.arange(start, stop, dtype=float)
        t = np.asarray(term(tau * l), dtype=float)
        parts.extend(t)
        total = math.fsum(parts)
        last, prev = abs(t[-1]), abs(t[-2]) if t.size > 1 else abs(parts[-2])
        ratio = last / prev if prev > 0 else 0.0
        tail = last * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf
        if tail <= tail_tol * abs(total) or last == 0.0:
            return total
        start = stop
        stop = start + max(64, int(math.ceil(5.0 / tau)))
        if stop - 1 > max_terms:
            raise ToleranceError(f"Matsubara sum not converged within {max_terms} terms",
                                 estimate=total)


def zero_temperature_free_energy(a: float, metal: PermittivityModel,
                                 dielectric: PermittivityModel,
                                 s: SolverSettings = SolverSettings()) -> float:
    """``F(a, 0)`` in J/m^2 from the continuous-frequency limit of the sum."""
    _check_pair(metal, dielectric)
    xi_c = C_LIGHT / (2.0 * a)
    zeta, w = gauss_legendre_panels(_ZETA_EDGES, s.gl_order)
    values = _phi_for(xi_c, zeta, metal, dielectric, s.gl_order)
    return HBAR * C_LIGHT / (32.0 * math.pi**2 * a**3) * math.fsum(w * values)


def free_energy(cfg: PlateConfig, metal: PermittivityModel, dielectric: PermittivityModel,
                s: SolverSettings = SolverSettings()) -> float:
    """Casimir free energy per unit area, J/m^2 (negative for attraction)."""
    _check_pair(metal, dielectric)
    if cfg.T == 0.0:
        return zero_temperature_free_energy(cfg.a, metal, dielectric, s)
    xi_c = cfg.xi_c
    total = matsubara_sum(lambda z: _phi_for(xi_c, z, metal, dielectric, s.gl_order),
                          cfg.tau, s.matsubara_tail_tol, s.max_terms)
    return K_B * cfg.T / (8.0 * math.pi * cfg.a**2) * total


def _flag(name, err, natural_scale):
    if err > 1e-4 * natural_scale:
        warnings.warn(f"{name} derivative error estimate {err:.2e} exceeds 1e-4 of "
                      f"the natural scale {natural_scale:.2e}", LowConfidenceWarning,
                      stacklevel=3)


def pressure_with_error(cfg: PlateConfig, metal: PermittivityModel,
                        dielectric: PermittivityModel,
                        s: SolverSettings = SolverSettings()) -> tuple[float, float]:
    """Pressure (Pa) and the Richardson estimate of its differentiation error."""
    _check_pair(metal, dielectric)
    scale = s.da_scale if s.da_scale is not None else cfg.a
    value, err = central_derivative(
        lambda a: free_energy(PlateConfig(a, cfg.T), metal, dielectric, s), cfg.a, scale)
    return -float(value), float(err)


def entropy_with_error(cfg: PlateConfig, metal: PermittivityModel,
                       dielectric: PermittivityModel,
                       s: SolverSettings = SolverSettings()) -> tuple[float, float]:
    """Entropy (J/(m^2 K)) and the Richardson estimate of its differentiation error."""
    _check_pair(metal, dielectric)
    if cfg.T == 0.0:
        return 0.0, 0.0
    scale = s.dT_scale if s.dT_scale is not None else cfg.T
    value, err = central_derivative(
        lambda T: free_energy(PlateConfig(cfg.a, T), metal, dielectric, s), cfg.T, scale)
    return -float(value), float(err)


def pressure(cfg: PlateConfig, metal: PermittivityModel, dielectric: PermittivityModel,
             s: SolverSettings = SolverSettings()) -> float:
    """``P = -dF/da`` at fixed temperature, in Pa (negative means attraction)."""
    value, err = pressure_with_error(cfg, metal, dielectric, s)
    _flag("pressure", err, abs(free_energy(cfg, metal, dielectric, s)) / cfg.a)
    return value


def entropy(cfg: PlateConfig, metal: PermittivityModel, dielectric: PermittivityModel,
            s: SolverSettings = SolverSettings()) -> float:
    """``S = -dF/dT`` at fixed separation, in J/(m^2 K). Zero at ``T = 0``."""
    if cfg.T == 0.0:
        _check_pair(metal, dielectric)
        return 0.0
    value, err = entropy_with_error(cfg, metal, dielectric, s)
    _flag("entropy", err, abs(free_energy(cfg, metal, dielectric, s)) / cfg.T)
    return value


def relative_thermal_correction_F(cfg, metal, dielectric, s: SolverSettings = SolverSettings()):
    """``(F(a, T) - F(a, 0)) / F(a, 0)``."""
    if cfg.T == 0.0:
        return 0.0
    f0 = zero_temperature_free_energy(cfg.a, metal, dielectric, s)
    return (free_energy(cfg, metal, dielectric, s) - f0) / f0


def relative_thermal_correction_P(cfg, metal, dielectric, s: SolverSettings = SolverSettings()):
    """``(P(a, T) - P(a, 0)) / P(a, 0)``."""
    if cfg.T == 0.0:
        return 0.0
    p0 = pressure(cfg.replace(T=0.0), metal, dielectric, s)
    return (pressure(cfg, metal, dielectric, s) - p0) / p0


def thermal_quantities(cfg, metal, dielectric, s: SolverSettings = SolverSettings()
                       ) -> ThermalQuantities:
    """Free energy, pressure, entropy and both relative thermal corrections."""
    f = free_energy(cfg, metal, dielectric, s)
    p = pressure(cfg, metal, dielectric, s)
    if cfg.T == 0.0:
        return ThermalQuantities(f, p, 0.0, 0.0, 0.0)
    f0 = zero_temperature_free_energy(cfg.a, metal, dielectric, s)
    p0 = pressure(cfg.replace(T=0.0), metal, dielectric, s)
    S = entropy(cfg, metal, dielectric, s)
    return ThermalQuantities(f, p, S, (f - f0) / f0 if f0 else 0.0, (p - p0) / p0 if p0 else 0.0)


class SweepRow(NamedTuple):
    axis_value: float
    quantities: ThermalQuantities
    ok: bool
    message: str = ""


def _row(axis, value, template, metal, dielectric, s):
    cfg = template.replace(T=value) if axis == "temperature" else template.replace(a=value)
    with warnings.catch_warnings():
        warnings.simplefilter("error", LowConfidenceWarning)
        try:
            return SweepRow(value, thermal_quantities(cfg, metal, dielectric, s), True)
        except (ToleranceError, LowConfidenceWarning, FloatingPointError) as exc:
            log.info("row %s=%g failed: %s", axis, value, exc)
            nan = ThermalQuantities(*(math.nan,) * 5)
            return SweepRow(value, nan, False, str(exc))


def sweep(axis: str, values: Sequence[float], template: PlateConfig, metal, dielectric,
          s: SolverSettings = SolverSettings(), workers: int = 1) -> list[SweepRow]:
    """Evaluate :func:`thermal_quantities` along temperature or separation.

    Rows are independent; a row whose numerics fail is returned with NaNs and
    ``ok=False`` instead of aborting the sweep. Output order follows
    ``values`` regardless of ``workers``.
    """
    if axis not in ("temperature", "separation"):
        raise ValueError("axis must be 'temperature' or 'separation'")
    _check_pair(metal, dielectric)
    values = [float(v) for v in values]
    if workers <= 1:
        return [_row(axis, v, template, metal, dielectric, s) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda v: _row(axis, v, template, metal, dielectric, s), values))
