"""Dielectric permittivity along the imaginary frequency axis.

All models are immutable and evaluate ``eps(i xi)`` for ``xi`` in rad/s.
Tabulated optical data (real frequencies, complex refractive index) are
mapped to the imaginary axis with the Kramers-Kronig dispersion relation

    eps(i xi) = 1 + (2/pi) * int_0^inf  w Im eps(w) / (w^2 + xi^2) dw.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union

import numpy as np
from scipy.constants import e as ELEMENTARY_CHARGE, hbar

from .numerics import QuadratureSpec, integrate_finite

__all__ = [
    "IdealMetal",
    "Constant",
    "Dilute",
    "NinhamParsegian",
    "Drude",
    "DrudeParams",
    "OpticalDataset",
    "Tabulated",
    "PermittivityModel",
    "RangeError",
    "DatasetError",
    "eval_epsilon",
    "im_eps_from_nk",
    "kramers_kronig",
    "load_optical_csv",
    "save_optical_csv",
    "EV_TO_RAD_S",
]

EV_TO_RAD_S = ELEMENTARY_CHARGE / hbar
_IM_EPS_CUTOFF = 1e-8


class RangeError(ValueError):
    """Tabulated permittivity requested outside its trusted frequency range."""


class DatasetError(ValueError):
    """Malformed optical data file or dataset."""


@dataclass(frozen=True)
class IdealMetal:
    """Perfect reflector; ``r = 1`` for both polarizations at every frequency."""


@dataclass(frozen=True)
class Constant:
    eps0: float

    def __post_init__(self):
        if not self.eps0 >= 1.0:
            raise ValueError("constant permittivity must be >= 1")


@dataclass(frozen=True)
class Dilute:
    """Frequency-independent ``eps = 1 + eta`` with ``eta`` small."""

    eta: float

    def __post_init__(self):
        if not 0.0 < self.eta <= 0.2:
            raise ValueError("dilute model requires 0 < eta <= 0.2")
        if self.eta > 0.1:
            warnings.warn(f"eta = {self.eta} is outside the well-controlled dilute regime "
                          "(eta <= 0.1); second-order results are approximate",
                          stacklevel=2)


@dataclass(frozen=True)
class NinhamParsegian:
    """Two-oscillator (infrared + ultraviolet) representation of ``eps(i xi)``."""

    c_ir: float
    omega_ir: float
    c_uv: float
    omega_uv: float

    def __post_init__(self):
        if self.c_ir < 0 or self.c_uv < 0:
            raise ValueError("oscillator strengths must be non-negative")
        if not 0.0 < self.omega_ir < self.omega_uv:
            raise ValueError("need 0 < omega_ir < omega_uv")

    @property
    def static(self) -> float:
        return 1.0 + self.c_ir + self.c_uv


@dataclass(frozen=True)
class DrudeParams:
    omega_p: float
    gamma: float

    def __post_init__(self):
        if not self.omega_p > 0.0:
            raise ValueError("plasma frequency must be positive")
        if not 0.0 < self.gamma < self.omega_p:
            raise ValueError("need 0 < gamma < omega_p")

    def im_eps(self, omega):
        omega = np.asarray(omega, dtype=float)
        return self.omega_p**2 * self.gamma / (omega * (omega**2 + self.gamma**2))


@dataclass(frozen=True)
class Drude:
    """Pure Drude metal, ``eps(i xi) = 1 + omega_p^2 / (xi (xi + gamma))``."""

    params: DrudeParams


@dataclass(frozen=True, eq=False)
class OpticalDataset:
    """Complex refractive index ``n1 + i n2`` sampled at angular frequencies (rad/s)."""

    omega: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        for name in ("omega", "n1", "n2"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.omega.shape == self.n1.shape == self.n2.shape) or self.omega.ndim != 1:
            raise DatasetError("omega, n1 and n2 must be 1-d arrays of equal length")
        if len(self.omega) < 8:
            raise DatasetError(f"need at least 8 rows, got {len(self.omega)}")
        if np.any(self.omega <= 0) or np.any(np.diff(self.omega) <= 0):
            raise DatasetError("frequencies must be positive and strictly increasing")
        if np.any(self.n1 <= 0) or np.any(self.n2 < 0):
            raise DatasetError("need n1 > 0 and n2 >= 0")
        if self.omega[-1] / self.omega[0] < 100.0:
            raise DatasetError("frequency range must span at least two decades")

    def __eq__(self, other):
        if not isinstance(other, OpticalDataset):
            return NotImplemented
        return (np.array_equal(self.omega, other.omega) and np.array_equal(self.n1, other.n1)
                and np.array_equal(self.n2, other.n2) and self.provenance == other.provenance)

    __hash__ = None

    @property
    def im_eps(self) -> np.ndarray:
        return im_eps_from_nk(self.n1, self.n2)


@dataclass(frozen=True)
class Tabulated:
    """Permittivity obtained from tabulated optical data via Kramers-Kronig.

    Below the lowest tabulated frequency ``Im eps`` is continued with the
    Drude form when ``extrapolation`` is given and taken as zero otherwise.
    Above the highest frequency it is continued as a power law through the
    last two samples and cut off once it falls below 1e-8.
    """

    data: OpticalDataset
    extrapolation: DrudeParams | None = None
    gl_order: int = 8
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def _grid(self):
        # quadrature nodes/weights over the tabulated range and the power-law tail, cached
        if "grid" in self._cache:
            return self._cache["grid"]
        w = self.data.omega
        im = self.data.im_eps
        logw = np.log(w)
        x, gw = np.polynomial.legendre.leggauss(self.gl_order)
        lo, hi = logw[:-1, None], logw[1:, None]
        u = (0.5 * (lo + hi) + 0.5 * (hi - lo) * x).ravel()
        du = (0.5 * (hi - lo) * gw).ravel()
        im_nodes = _loglog_interp(u, logw, im)
        # above the table: power law through the last two samples
        tail_u, tail_du, tail_im = _power_law_tail(logw[-2:], im[-2:], x, gw)
        u = np.concatenate([u, tail_u])
        du = np.concatenate([du, tail_du])
        im_nodes = np.concatenate([im_nodes, tail_im])
        omega_nodes = np.exp(u)
        # int w Im eps / (w^2 + xi^2) dw  with dw = w du
        grid = (omega_nodes, omega_nodes**2 * im_nodes * du)
        self._cache["grid"] = grid
        return grid

    def evaluate(self, xi):
        xi = np.asarray(xi, dtype=float)
        if self.extrapolation is None and np.any(xi > self.data.omega[-1]):
            raise RangeError(
                f"xi = {np.max(xi):.3e} rad/s exceeds the tabulated range "
                f"(max {self.data.omega[-1]:.3e} rad/s) and no extrapolation is configured")
        nodes, weights = self._grid()
        flat = np.atleast_1d(xi).ravel()
        integral = (weights[None, :] / (nodes[None, :] ** 2 + flat[:, None] ** 2)).sum(axis=1)
        if self.extrapolation is not None:
            integral = integral + _drude_low_integral(self.extrapolation, self.data.omega[0], flat)
        out = 1.0 + 2.0 / math.pi * integral
        return out.reshape(xi.shape) if xi.ndim else float(out[0])


PermittivityModel = Union[IdealMetal, Constant, Dilute, NinhamParsegian, Drude, Tabulated]


def _loglog_interp(u, logw, values):
    positive = np.where(values > 0, values, 1e-300)
    return np.exp(np.interp(u, logw, np.log(positive)))


def _power_law_tail(logw2, im2, x, gw):
    if np.any(im2 <= 0) or im2[-1] < _IM_EPS_CUTOFF:
        return np.empty(0), np.empty(0), np.empty(0)
    slope = (math.log(im2[1]) - math.log(im2[0])) / (logw2[1] - logw2[0])
    if slope >= -1e-3:
        # non-decaying continuation: cut two decades above the table
        u_end = logw2[1] + math.log(100.0)
    else:
        u_end = logw2[1] + math.log(_IM_EPS_CUTOFF / im2[1]) / slope
    n_panels = max(1, int(math.ceil((u_end - logw2[1]) / 0.5)))
    edges = np.linspace(logw2[1], u_end, n_panels + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    u = (0.5 * (lo + hi) + 0.5 * (hi - lo) * x).ravel()
    du = (0.5 * (hi - lo) * gw).ravel()
    im = im2[1] * np.exp(slope * (u - logw2[1]))
    return u, du, im


def _drude_low_integral(p: DrudeParams, omega_max: float, xi: np.ndarray) -> np.ndarray:
    """``int_0^omega_max w Im eps_Drude(w) / (w^2 + xi^2) dw`` in closed form."""
    g = p.gamma
    out = np.empty_like(xi)
    zero = xi == 0.0
    out[zero] = math.inf
    x = xi[~zero]
    # w_p^2 g int_0^W dw / ((w^2+g^2)(w^2+x^2)) = w_p^2 g [atan(W/g)/g - atan(W/x)/x] / (x^2 - g^2)
    near = np.abs(x - g) < 1e-6 * g
    res = np.empty_like(x)
    xs = x[~near]
    res[~near] = (np.arctan(omega_max / g) / g - np.arctan(omega_max / xs) / xs) / (xs**2 - g**2)
    if np.any(near):
        # x == g limit: int dw/(w^2+g^2)^2
        xn = x[near]
        res[near] = (np.arctan(omega_max / xn) / (2 * xn**3)
                     + omega_max / (2 * xn**2 * (omega_max**2 + xn**2)))
    out[~zero] = p.omega_p**2 * g * res
    return out


def eval_epsilon(model: PermittivityModel, xi):
    """``eps(i xi)`` for ``xi >= 0`` (scalar or array).

    ``IdealMetal`` has no finite permittivity; it evaluates to ``inf`` so
    that callers which do not special-case it fail loudly rather than
    silently. The reflection module handles it without arithmetic on ``inf``.
    """
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(xi_arr < 0):
        raise ValueError("xi must be non-negative")
    if isinstance(model, IdealMetal):
        out = np.full(xi_arr.shape, math.inf)
    elif isinstance(model, Constant):
        out = np.full(xi_arr.shape, float(model.eps0))
    elif isinstance(model, Dilute):
        out = np.full(xi_arr.shape, 1.0 + model.eta)
    elif isinstance(model, NinhamParsegian):
        out = (1.0 + model.c_ir / (1.0 + (xi_arr / model.omega_ir) ** 2)
               + model.c_uv / (1.0 + (xi_arr / model.omega_uv) ** 2))
    elif isinstance(model, Drude):
        p = model.params
        with np.errstate(divide="ignore"):
            out = 1.0 + p.omega_p**2 / (xi_arr * (xi_arr + p.gamma))
    elif isinstance(model, Tabulated):
        out = np.asarray(model.evaluate(xi_arr))
    else:
        raise TypeError(f"unknown permittivity model {model!r}")
    return float(out) if xi_arr.ndim == 0 else out


def im_eps_from_nk(n1, n2):
    """Imaginary part of the permittivity, ``2 n1 n2``."""
    n1 = np.asarray(n1, dtype=float)
    n2 = np.asarray(n2, dtype=float)
    if np.any(n1 < 0) or np.any(n2 < 0):
        raise ValueError("refractive index components must be non-negative")
    out = 2.0 * n1 * n2
    return float(out) if out.ndim == 0 else out


def kramers_kronig(im_eps: Callable[[np.ndarray], np.ndarray], xi: float,
                   spec: QuadratureSpec = QuadratureSpec(),
                   omega_range: tuple[float, float] = (1e6, 1e22),
                   breakpoints=()) -> float:
    """``eps(i xi)`` from a callable ``Im eps(omega)`` by the dispersion relation.

    The integral is taken in ``u = ln(omega)`` over ``omega_range``, which
    must cover the support of ``im_eps`` up to negligible contributions.
    ``breakpoints`` (in rad/s) mark features such as resonances.
    """
    if not xi > 0.0:
        raise ValueError("xi must be positive")

    def integrand(u):
        w = np.exp(u)
        return w * w * im_eps(w) / (w * w + xi * xi)

    lo, hi = (math.log(v) for v in omega_range)
    pts = [math.log(b) for b in breakpoints] + [math.log(xi)]
    # a coarse uniform grid in u keeps the adaptive rule from missing narrow peaks
    pts += list(np.arange(math.ceil(lo), hi, 1.0))
    value, _ = integrate_finite(integrand, lo, hi, spec, pts)
    return 1.0 + 2.0 / math.pi * value


_COLUMN_UNITS = {"omega": 1.0, "omega_rad_s": 1.0, "frequency_hz": 2.0 * math.pi,
                 "hz": 2.0 * math.pi, "energy_ev": EV_TO_RAD_S, "ev": EV_TO_RAD_S}


def load_optical_csv(path, frequency_unit: str | None = None, provenance: str | None = None
                     ) -> OpticalDataset:
    """Read an ``omega,n1,n2`` (or ``energy_ev,n1,n2`` / ``frequency_hz,n1,n2``) file.

    ``frequency_unit`` ("rad/s", "hz" or "ev") overrides the unit implied by
    the header. Lines starting with ``#`` are ignored. Rows may come in
    strictly decreasing frequency order (as is common for wavelength tables);
    anything non-monotone is rejected with the offending line number.
    """
    path = Path(path)
    rows = []
    header = None
    comments = []
    with path.open(encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                comments.append(stripped.lstrip("#").strip())
                continue
            cells = next(csv.reader([stripped]))
            if header is None:
                header = [c.strip().lower() for c in cells]
                if len(header) != 3 or header[0] not in _COLUMN_UNITS:
                    raise DatasetError(f"{path}:{lineno}: expected header like 'omega,n1,n2' "
                                       f"or 'energy_ev,n1,n2', got {stripped!r}")
                continue
            if len(cells) != 3:
                raise DatasetError(f"{path}:{lineno}: expected 3 columns, got {len(cells)}")
            try:
                w, n1, n2 = (float(c) for c in cells)
            except ValueError:
                raise DatasetError(f"{path}:{lineno}: non-numeric value in {stripped!r}") from None
            if not (math.isfinite(w) and math.isfinite(n1) and math.isfinite(n2)):
                raise DatasetError(f"{path}:{lineno}: non-finite value")
            if n1 <= 0 or n2 < 0:
                raise DatasetError(f"{path}:{lineno}: need n1 > 0 and n2 >= 0, got {n1}, {n2}")
            if w <= 0:
                raise DatasetError(f"{path}:{lineno}: frequency must be positive")
            rows.append((lineno, w, n1, n2))
    if header is None:
        raise DatasetError(f"{path}: no header line")
    if len(rows) < 8:
        raise DatasetError(f"{path}: need at least 8 data rows, got {len(rows)}")
    if frequency_unit is None:
        factor = _COLUMN_UNITS[header[0]]
    else:
        key = frequency_unit.lower().replace("rad/s", "omega")
        if key not in _COLUMN_UNITS:
            raise DatasetError(f"unknown frequency unit {frequency_unit!r}")
        factor = _COLUMN_UNITS[key]
    if len(rows) >= 2 and rows[0][1] > rows[-1][1]:
        rows.reverse()
    for prev, cur in zip(rows, rows[1:]):
        if cur[1] <= prev[1]:
            raise DatasetError(f"{path}:{cur[0]}: frequency column is not strictly monotone")
    arr = np.array([r[1:] for r in rows])
    label = provenance if provenance is not None else "\n".join(comments) or str(path.name)
    return OpticalDataset(arr[:, 0] * factor, arr[:, 1], arr[:, 2], label)


def save_optical_csv(dataset: OpticalDataset, path) -> None:
    """Write ``dataset`` as ``omega,n1,n2`` with round-trip-exact floats."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        for line in dataset.provenance.splitlines():
            fh.write(f"# {line}\n")
        fh.write("omega,n1,n2\n")
        for w, n1, n2 in zip(dataset.omega, dataset.n1, dataset.n2):
            fh.write(f"{float(w)!r},{float(n1)!r},{float(n2)!r}\n")
