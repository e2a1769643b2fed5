"""Quadrature, series and special-function utilities.

Everything here is deterministic and free of global state. Integrands are
expected to be vectorised: they receive a 1-d ``numpy`` array of abscissae and
must return an array of the same shape.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "ToleranceError",
    "QuadratureSpec",
    "SeriesSpec",
    "integrate_finite",
    "integrate_semiinfinite",
    "exp_integral_Ei",
    "ei_power_sum",
    "riemann_zeta3",
    "ZETA3",
    "central_derivative",
    "gauss_legendre_panels",
]

ZETA3 = 1.2020569031595942853997381615114499907649862923405


class ToleranceError(ArithmeticError):
    """Raised when a numerical procedure cannot reach its requested tolerance.

    The best available estimate is attached as ``estimate`` (and, when known,
    the error bound as ``error``).
    """

    def __init__(self, message: str, estimate: float = math.nan, error: float = math.nan):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class QuadratureSpec:
    relative_tolerance: float = 1e-10
    absolute_floor: float = 1e-300
    max_subdivisions: int = 400

    def __post_init__(self):
        if not 0.0 < self.relative_tolerance <= 1e-3:
            raise ValueError("relative_tolerance must lie in (0, 1e-3]")
        if self.absolute_floor < 0.0:
            raise ValueError("absolute_floor must be non-negative")
        if self.max_subdivisions < 16:
            raise ValueError("max_subdivisions must be at least 16")


@dataclass(frozen=True)
class SeriesSpec:
    tail_tolerance: float = 1e-12
    max_terms: int = 10**6

    def __post_init__(self):
        if self.tail_tolerance <= 0.0:
            raise ValueError("tail_tolerance must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")


# 7-point Gauss / 15-point Kronrod pair (QUADPACK qk15 abscissae and weights).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_K15_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_K15_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_G7_WEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (0-based 1, 3, 5, centre 7, ...).
_G7_WEIGHTS[[1, 3, 5]] = _WG[:3]
_G7_WEIGHTS[7] = _WG[3]
_G7_WEIGHTS[[9, 11, 13]] = _WG[2::-1]


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    values = np.asarray(f(mid + half * _K15_NODES), dtype=float)
    kronrod = half * np.dot(_K15_WEIGHTS, values)
    gauss = half * np.dot(_G7_WEIGHTS, values)
    return kronrod, abs(kronrod - gauss)


def integrate_finite(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                     spec: QuadratureSpec = QuadratureSpec(),
                     breakpoints=()) -> tuple[float, float]:
    """Adaptive Gauss-Kronrod (7/15) integration of ``f`` over ``[a, b]``.

    Returns ``(integral, error_estimate)``. The interval with the largest
    error estimate is bisected until the total estimate drops below
    ``max(relative_tolerance * |I|, absolute_floor)``.
    """
    edges = sorted({float(a), float(b), *(float(p) for p in breakpoints if a < p < b)})
    heap = []
    total = 0.0
    total_err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = _gk15(f, lo, hi)
        heapq.heappush(heap, (-err, lo, hi, val))
        total += val
        total_err += err
    n_intervals = len(heap)
    while total_err > max(spec.relative_tolerance * abs(total), spec.absolute_floor):
        if n_intervals >= spec.max_subdivisions:
            raise ToleranceError(
                f"quadrature did not converge after {n_intervals} subdivisions",
                estimate=total, error=total_err)
        neg_err, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise ToleranceError("interval collapsed below floating-point resolution",
                                 estimate=total, error=total_err)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        n_intervals += 1
        # re-summing avoids drift from repeated add/subtract
        total = math.fsum(item[3] for item in heap)
        total_err = math.fsum(-item[0] for item in heap)
    return total, total_err


def integrate_semiinfinite(f: Callable[[np.ndarray], np.ndarray], lower: float,
                           spec: QuadratureSpec = QuadratureSpec(),
                           initial_length: float = 40.0) -> float:
    """Integrate an exponentially decaying ``f`` over ``[lower, inf)``.

    The finite part ``[lower, lower + L]`` is handled adaptively; beyond ``L``
    the integrand is assumed to fall off at least like ``exp(-y)``, so the
    remainder is bounded by ``|f(lower + L)|`` and added as a correction.
    ``L`` is doubled until that remainder is negligible.

    Examples
    --------
    >>> round(integrate_semiinfinite(lambda y: y * np.exp(-y), 0.0), 12)
    1.0
    """
    length = float(initial_length)
    breakpoints = [lower + x for x in (0.5, 1.0, 2.0, 4.0, 8.0, 16.0)]
    for _ in range(12):
        upper = lower + length
        value, err = integrate_finite(f, lower, upper, spec, breakpoints)
        tail = float(np.asarray(f(np.array([upper])))[0])
        budget = max(spec.relative_tolerance * abs(value), spec.absolute_floor)
        if abs(tail) <= budget or tail == 0.0:
            return value + tail
        length *= 2.0
    raise ToleranceError("integrand does not decay exponentially", estimate=value + tail,
                         error=abs(tail))


def _e1_series(z):
    # E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)
    term = -z
    acc = term.copy()
    k = 1
    while True:
        k += 1
        term = term * (-z) * (k - 1) / (k * k)
        acc += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(acc)):
            break
    return -np.euler_gamma - np.log(z) - acc


def _e1_continued_fraction(z):
    # modified Lentz on E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...)))
    tiny = 1e-300
    b = z + 1.0
    c = np.full_like(z, 1.0 / tiny)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, 500):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if np.all(np.abs(delta - 1.0) <= 1e-16):
            break
    return h * np.exp(-z)


def exp_integral_Ei(x):
    """Exponential integral ``Ei(x)`` for negative real ``x``.

    Uses ``Ei(x) = -E1(-x)``; the power series is used for ``|x| <= 1`` and a
    continued fraction beyond. Scalars in give a float back.

    Raises
    ------
    ValueError
        if any ``x >= 0``.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr < 0.0)):
        raise ValueError("exp_integral_Ei is only defined here for x < 0")
    z = -np.atleast_1d(arr)
    out = np.empty_like(z)
    small = z <= 1.0
    if np.any(small):
        out[small] = _e1_series(z[small])
    if np.any(~small):
        out[~small] = _e1_continued_fraction(z[~small])
    out = -out
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def ei_power_sum(p: int, tau: float, spec: SeriesSpec = SeriesSpec()) -> float:
    """``sum_{l>=1} l**p * Ei(-2 tau l)`` for ``p`` in {2, 4}.

    Terms are generated in blocks and summation stops once the geometric
    bound on the remaining tail drops below ``tail_tolerance * |sum|``.
    """
    if p not in (2, 4):
        raise ValueError("p must be 2 or 4")
    if not tau > 0.0:
        raise ValueError("tau must be positive")
    ratio = math.exp(-2.0 * tau)
    block = max(64, int(40.0 / tau))
    total = 0.0
    start = 1
    while start <= spec.max_terms:
        stop = min(start + block, spec.max_terms + 1)
        l = np.arange(start, stop, dtype=float)
        terms = l**p * exp_integral_Ei(-2.0 * tau * l)
        total += math.fsum(terms)
        last = abs(terms[-1])
        # term ratio tends to exp(-2 tau) (times a slowly varying factor)
        growth = ((stop) / (stop - 1.0)) ** p * ratio
        tail = last * growth / (1.0 - growth) if growth < 1.0 else math.inf
        if tail <= spec.tail_tolerance * abs(total) or last == 0.0:
            return total
        start = stop
    raise ToleranceError(f"Ei power sum needs more than {spec.max_terms} terms",
                         estimate=total)


def riemann_zeta3() -> float:
    """Apery's constant ``zeta(3)``."""
    return ZETA3


def central_derivative(f: Callable[[float], float], x: float, scale: float) -> tuple[float, float]:
    """First derivative of ``f`` at ``x`` from a five-point central stencil.

    The step is ``h = scale * eps**(1/5)``; the stencil is evaluated at ``h``
    and ``2h`` and combined by one Richardson step. Returns ``(derivative,
    error_estimate)`` where the error estimate is the size of the Richardson
    correction.
    """
    if not scale > 0.0:
        raise ValueError("scale must be positive")
    h = scale * np.finfo(float).eps ** 0.2
    values = {k: f(x + k * h) for k in (-4, -2, -1, 1, 2, 4)}

    def stencil(step: int) -> float:
        hh = step * h
        return (values[-2 * step] - 8.0 * values[-step] + 8.0 * values[step]
                - values[2 * step]) / (12.0 * hh)

    fine = stencil(1)
    coarse = stencil(2)
    correction = (fine - coarse) / 15.0
    return float(fine + correction), float(abs(correction))


def gauss_legendre_panels(breakpoints: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights.

    ``breakpoints`` may be 2-d with one row of panel edges per integral; the
    result then has shape ``(rows, panels * order)``. Zero-width panels are
    allowed and simply carry zero weight.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.asarray(breakpoints, dtype=float)
    lo = edges[..., :-1, None]
    hi = edges[..., 1:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * x).reshape(*edges.shape[:-1], -1)
    weights = (half * w).reshape(*edges.shape[:-1], -1)
    return nodes, weights
