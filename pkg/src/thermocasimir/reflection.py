"""Fresnel reflection coefficients at imaginary frequencies.

Variables are dimensionless: ``zeta = xi / xi_c`` with ``xi_c = c / (2a)``,
and ``y = 2 a q`` where ``q`` is the modulus of the imaginary-frequency wave
vector component normal to the plates, so that ``y >= zeta``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .permittivity import IdealMetal

__all__ = ["ReflectionPair", "reflection_coeffs", "log_kernel"]


class ReflectionPair(NamedTuple):
    r_par: np.ndarray
    r_perp: np.ndarray


def reflection_coeffs(eps, zeta, y) -> ReflectionPair:
    """TM (``r_par``) and TE (``r_perp``) coefficients for permittivity ``eps``.

    ``eps`` may be an :class:`IdealMetal` instance, ``inf`` (a metal whose
    permittivity diverges, only meaningful at ``zeta = 0``) or a finite value
    ``>= 1``; arrays broadcast together.

    With ``t = zeta / y`` and ``s = sqrt(1 + t^2 (eps - 1))`` the square root is
    never subtracted from 1 directly: ``s - 1 = t^2 (eps - 1) / (s + 1)`` keeps
    full relative accuracy for ``eps -> 1``.
    """
    zeta = np.asarray(zeta, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(y < zeta):
        raise ValueError("reflection coefficients need y >= zeta")
    if isinstance(eps, IdealMetal):
        one = np.ones(np.broadcast_shapes(zeta.shape, y.shape))
        return ReflectionPair(one, one.copy())
    eps = np.asarray(eps, dtype=float)
    if np.any(eps < 1.0):
        raise ValueError("permittivity along the imaginary axis must be >= 1")
    eps, zeta, y = np.broadcast_arrays(eps, zeta, y)
    infinite = np.isinf(eps)
    r_par = np.empty(eps.shape)
    r_perp = np.empty(eps.shape)
    if np.any(infinite):
        # divergent eps: TM reflects perfectly; at zeta = 0 the TE coefficient
        # of a Drude-like metal vanishes
        r_par[infinite] = 1.0
        r_perp[infinite] = np.where(zeta[infinite] == 0.0, 0.0, 1.0)
    fin = ~infinite
    e, z, yy = eps[fin], zeta[fin], y[fin]
    em1 = e - 1.0
    # in terms of t = zeta / y in [0, 1] nothing is squared that could underflow;
    # y = zeta = 0 (lower limit of the l = 0 term) is the t = 0 limit
    t = np.divide(z, yy, out=np.zeros_like(z), where=yy > 0.0)
    t2em1 = t * t * em1
    s = np.sqrt(1.0 + t2em1)
    rp = em1 * (1.0 - t * t / (s + 1.0)) / (e + s)
    rs = t2em1 / ((s + 1.0) * (s + 1.0))
    r_par[fin] = rp
    r_perp[fin] = rs
    return ReflectionPair(r_par, r_perp)


def log_kernel(pair_m: ReflectionPair, pair_d: ReflectionPair, y):
    """``ln(1 - r_par^M r_par^D e^-y) + ln(1 - r_perp^M r_perp^D e^-y)``."""
    ey = np.exp(-np.asarray(y, dtype=float))
    return (np.log1p(-pair_m.r_par * pair_d.r_par * ey)
            + np.log1p(-pair_m.r_perp * pair_d.r_perp * ey))
