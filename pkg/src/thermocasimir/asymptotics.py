r"""Low-temperature asymptotics for an ideal metal facing a constant-permittivity dielectric.

For ``eps = eps0`` independent of frequency the integrand of the Matsubara
sum, continued to imaginary frequency, differs across the imaginary axis by

    F(it) - F(-it) = i pi (eps0 - 1)^2 / (4 (eps0 + 1)) (tau t)^2 + O(t^3)

so the leading thermal corrections grow as ``tau^3`` (free energy) and
``tau^2`` (entropy). The entropy therefore vanishes at zero temperature.
These forms hold asymptotically as ``tau -> 0``; in practice the subleading
terms reach a few percent already at ``tau ~ 0.01`` for ``eps0 ~ 10``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.constants import Boltzmann as K_B, c as C_LIGHT, hbar as HBAR

from .lifshitz import effective_temperature
from .numerics import ZETA3

__all__ = [
    "VALIDITY_TAU",
    "ConstEpsAsymptotics",
    "zero_freq_kernel_expansion",
    "thermal_weight_moment",
    "const_eps_low_T_free_energy",
    "const_eps_low_T_entropy",
]

# the expansions are offered for tau at or below this value
VALIDITY_TAU = 0.1


def zero_freq_kernel_expansion(eps0: float, tau_t: float = 1.0) -> float:
    """Leading coefficient of ``(F(it) - F(-it)) / i`` at small ``tau t``.

    Returns ``pi (eps0 - 1)^2 / (4 (eps0 + 1)) * tau_t**2``; with the default
    ``tau_t = 1`` this is the bare coefficient.
    """
    if not eps0 >= 1.0:
        raise ValueError("eps0 must be >= 1")
    return math.pi * (eps0 - 1.0) ** 2 / (4.0 * (eps0 + 1.0)) * tau_t**2


def thermal_weight_moment() -> float:
    """``int_0^inf t^2 / (exp(2 pi t) - 1) dt = zeta(3) / (4 pi^3)``."""
    return ZETA3 / (4.0 * math.pi**3)


@dataclass(frozen=True)
class ConstEpsAsymptotics:
    """Low-temperature expansion at separation ``a`` and reduced temperature ``tau``."""

    eps0: float
    a: float
    tau: float

    def __post_init__(self):
        if not self.eps0 >= 1.0:
            raise ValueError("eps0 must be >= 1")
        if not self.a > 0.0:
            raise ValueError("separation must be positive")
        if not self.tau >= 0.0:
            raise ValueError("tau must be non-negative")

    @classmethod
    def from_temperature(cls, eps0: float, a: float, T: float) -> "ConstEpsAsymptotics":
        return cls(eps0, a, 2.0 * math.pi * T / effective_temperature(a))

    @property
    def valid(self) -> bool:
        return self.tau <= VALIDITY_TAU

    @property
    def _contrast(self) -> float:
        return (self.eps0 - 1.0) ** 2 / (self.eps0 + 1.0)

    @property
    def delta_free_energy(self) -> float:
        """Thermal correction ``F(T) - F(0)`` in J/m^2."""
        return -HBAR * C_LIGHT * ZETA3 * self.tau**3 * self._contrast / (512.0 * math.pi**4 * self.a**3)

    @property
    def entropy(self) -> float:
        """Entropy in J/(m^2 K)."""
        return 3.0 * K_B * ZETA3 * self.tau**2 * self._contrast / (128.0 * math.pi**3 * self.a**2)


def const_eps_low_T_free_energy(x: ConstEpsAsymptotics, F0: float) -> float:
    """``F0`` plus the leading ``tau^3`` thermal correction (J/m^2)."""
    return F0 + x.delta_free_energy


def const_eps_low_T_entropy(x: ConstEpsAsymptotics) -> float:
    """Leading ``tau^2`` entropy (J/(m^2 K))."""
    return x.entropy
