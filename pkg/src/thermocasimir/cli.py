"""Command-line front end.

Subcommands::

    thermocasimir point    --metal ideal-metal --dielectric const:7 -a 600nm -T 238K [--json]
    thermocasimir sweep    [--config run.cfg] --axis temperature --min 0K --max 600K --steps 61 ...
    thermocasimir validate [all|dilute|const-eps|materials] [--au-table au.csv --si-table si.csv]
    thermocasimir perm-table --material alumina --xi-min 1e11 --xi-max 1e18 --steps 71
    thermocasimir material register NAME (--spec SPEC | --ninham-parsegian ... | --table CSV)
    thermocasimir material list

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numerical degradation (at least one sweep row could not be computed).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import re
import sys
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.constants import e as ELEMENTARY_CHARGE

from .lifshitz import PlateConfig, ScopeError, SolverSettings, sweep, thermal_quantities
from .materials import (BUILTIN_NAMES, MaterialError, MaterialRecord, MaterialStore,
                        builtin_material, resolve_material)
from .numerics import QuadratureSpec, ToleranceError
from .permittivity import (DatasetError, DrudeParams, NinhamParsegian, RangeError, Tabulated,
                           eval_epsilon, load_optical_csv)
from .validation import MaterialData, criterion_summary, run_suite

log = logging.getLogger("thermocasimir")

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
CSV_HEADER = ["axis_value", "free_energy_J_m2", "pressure_Pa", "entropy_J_m2_K", "delta_F",
              "delta_P"]
STORE_ENV = "THERMOCASIMIR_STORE"

_LENGTH_UNITS = {"nm": 1e-9, "um": 1e-6, "µm": 1e-6, "μm": 1e-6, "mm": 1e-3, "m": 1.0}
_QUANTITY_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([^\s\d.+-][^\s]*)?\s*$")


class ConfigError(ValueError):
    """Invalid command-line or config-file input."""


def parse_length(text: str) -> float:
    """``"600nm"``, ``"1.2 um"``, ``"2e-6m"`` -> metres. A unit is required."""
    m = _QUANTITY_RE.match(str(text))
    if not m or m.group(2) not in _LENGTH_UNITS:
        raise ConfigError(f"bad length {text!r}: give a number with a unit "
                          f"({', '.join(u for u in _LENGTH_UNITS if u != 'μm')})")
    return float(m.group(1)) * _LENGTH_UNITS[m.group(2)]


def parse_temperature(text: str) -> float:
    """``"300K"`` or ``"300"`` -> kelvin."""
    m = _QUANTITY_RE.match(str(text))
    if not m or m.group(2) not in (None, "K"):
        raise ConfigError(f"bad temperature {text!r}: expected kelvin, e.g. 300K")
    value = float(m.group(1))
    if value < 0:
        raise ConfigError(f"temperature must be non-negative, got {text!r}")
    return value


def read_config(path) -> dict[str, str]:
    """Parse a ``key = value`` run configuration (``#`` comments allowed)."""
    out = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _store(args) -> MaterialStore:
    directory = getattr(args, "store", None) or os.environ.get(STORE_ENV) or "materials"
    return MaterialStore(directory)


def _settings(opts: dict) -> SolverSettings:
    kwargs = {}
    if opts.get("rtol") is not None:
        kwargs["quadrature"] = QuadratureSpec(relative_tolerance=float(opts["rtol"]))
    if opts.get("matsubara_tol") is not None:
        kwargs["matsubara_tail_tol"] = float(opts["matsubara_tol"])
    if opts.get("max_terms") is not None:
        kwargs["max_terms"] = int(opts["max_terms"])
    if opts.get("gl_order") is not None:
        kwargs["gl_order"] = int(opts["gl_order"])
    try:
        return SolverSettings(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _plate(a: float, T: float) -> PlateConfig:
    try:
        return PlateConfig(a, T)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _fmt(x: float) -> str:
    # adding 0.0 maps -0.0 to 0.0 so that vanishing quantities print without a sign
    return "nan" if math.isnan(x) else f"{x + 0.0:.10e}"


# --- point ----------------------------------------------------------------------

def cmd_point(args) -> int:
    store = _store(args)
    metal = resolve_material(args.metal, store)
    dielectric = resolve_material(args.dielectric, store)
    cfg = _plate(parse_length(args.a), parse_temperature(args.T))
    q = thermal_quantities(cfg, metal.model, dielectric.model, _settings(vars(args)))
    result = {
        "metal": metal.name, "dielectric": dielectric.name,
        "a_m": cfg.a, "T_K": cfg.T, "T_eff_K": cfg.T_eff, "tau": cfg.tau,
        "free_energy_J_m2": q.free_energy, "pressure_Pa": q.pressure,
        "entropy_J_m2_K": q.entropy, "entropy_eV_m2_K": q.entropy / ELEMENTARY_CHARGE,
        "delta_F": q.delta_F, "delta_P": q.delta_P,
    }
    result = {k: v + 0.0 if isinstance(v, float) else v for k, v in result.items()}
    if args.json:
        print(json.dumps(result, indent=2))
    else:
        print(f"metal        {metal.name}")
        print(f"dielectric   {dielectric.name}")
        print(f"a            {cfg.a:.6g} m")
        print(f"T            {cfg.T:.6g} K")
        print(f"T_eff        {cfg.T_eff:.2f} K")
        print(f"tau          {cfg.tau:.6g}")
        for key in ("free_energy_J_m2", "pressure_Pa", "entropy_J_m2_K", "entropy_eV_m2_K",
                    "delta_F", "delta_P"):
            print(f"{key:<18} {result[key]: .8e}")
        if cfg.T == 0.0:
            print("note: entropy at T = 0 is the asymptotic limit 0")
    return EXIT_OK


# --- sweep ----------------------------------------------------------------------

_SWEEP_KEYS = ("metal", "dielectric", "axis", "min", "max", "steps", "fixed", "output", "spacing",
               "workers", "ev_entropy", "rtol", "matsubara_tol", "max_terms", "gl_order")


def _sweep_options(args) -> dict:
    opts = read_config(args.config) if args.config else {}
    unknown = set(opts) - set(_SWEEP_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key in _SWEEP_KEYS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            opts[key] = value
    for key in ("metal", "dielectric", "axis", "min", "max", "steps", "fixed"):
        if key not in opts:
            raise ConfigError(f"sweep needs '{key}' (flag or config key)")
    return opts


def sweep_grid(opts: dict) -> tuple[str, np.ndarray, PlateConfig]:
    axis = opts["axis"]
    if axis not in ("temperature", "separation"):
        raise ConfigError("axis must be 'temperature' or 'separation'")
    try:
        steps = int(opts["steps"])
    except ValueError:
        raise ConfigError(f"steps must be an integer, got {opts['steps']!r}") from None
    if steps < 2:
        raise ConfigError("steps must be at least 2")
    if axis == "temperature":
        lo, hi = parse_temperature(opts["min"]), parse_temperature(opts["max"])
        template = _plate(parse_length(opts["fixed"]), 0.0)
    else:
        lo, hi = parse_length(opts["min"]), parse_length(opts["max"])
        if lo <= 0:
            raise ConfigError("separation range must be positive")
        template = _plate(1e-6, parse_temperature(opts["fixed"]))
    if not lo < hi:
        raise ConfigError("need min < max")
    spacing = opts.get("spacing", "linear")
    if spacing == "linear":
        values = np.linspace(lo, hi, steps)
    elif spacing == "log":
        if lo <= 0:
            raise ConfigError("log spacing needs a positive minimum")
        values = np.geomspace(lo, hi, steps)
    else:
        raise ConfigError("spacing must be 'linear' or 'log'")
    return axis, values, template


def _truthy(value) -> bool:
    return value is True or str(value).lower() in ("1", "true", "yes", "on")


def cmd_sweep(args) -> int:
    opts = _sweep_options(args)
    store = _store(args)
    metal = resolve_material(opts["metal"], store)
    dielectric = resolve_material(opts["dielectric"], store)
    axis, values, template = sweep_grid(opts)
    settings = _settings(opts)
    workers = int(opts.get("workers", 1))
    rows = sweep(axis, values, template, metal.model, dielectric.model, settings, workers)
    ev = _truthy(opts.get("ev_entropy", False))
    header = CSV_HEADER + (["entropy_eV_m2_K"] if ev else [])
    lines = [",".join(header)]
    for row in rows:
        q = row.quantities
        cells = [row.axis_value, q.free_energy, q.pressure, q.entropy, q.delta_F, q.delta_P]
        if ev:
            cells.append(q.entropy / ELEMENTARY_CHARGE)
        lines.append(",".join(_fmt(float(c)) for c in cells))
    text = "\n".join(lines) + "\n"
    output = opts.get("output", "-")
    if output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")
    failed = [r for r in rows if not r.ok]
    for r in failed:
        print(f"warning: {axis} = {r.axis_value:g}: {r.message}", file=sys.stderr)
    return EXIT_NUMERIC if failed else EXIT_OK


# --- validate ---------------------------------------------------------------------

def cmd_validate(args) -> int:
    data = MaterialData(au_table=args.au_table, si_table=args.si_table)
    if args.suite in ("all", "materials") and not (args.au_table and args.si_table):
        print("note: no user-supplied Au/Si tabulated data; the materials checks run the "
              "fallback-model subset (pure-Drude Au, single-oscillator Si) with loose tolerances")

    def show(r):
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.criterion:>2}  {r.name}\n"
              f"           measured {r.measured}; expected {r.expected}"
              + (f"\n           {r.note}" if r.note else ""), flush=True)

    results = run_suite(args.suite, data, progress=show)
    summary = criterion_summary(results)
    print()
    for crit, ok in summary.items():
        print(f"criterion {crit:>2}: {'pass' if ok else 'FAIL'}")
    failing = [r for r in results if not r.passed]
    if failing:
        for r in failing:
            print(f"failed: criterion {r.criterion}: {r.name}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


# --- perm-table ----------------------------------------------------------------------

def cmd_perm_table(args) -> int:
    record = resolve_material(args.material, _store(args))
    try:
        lo, hi, steps = float(args.xi_min), float(args.xi_max), int(args.steps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not 0 < lo < hi or steps < 2:
        raise ConfigError("need 0 < xi_min < xi_max and steps >= 2")
    xi = np.geomspace(lo, hi, steps)
    eps = np.asarray(eval_epsilon(record.model, xi), dtype=float)
    lines = ["xi_rad_s,epsilon"] + [f"{x:.10e},{e:.10e}" for x, e in zip(xi, eps)]
    text = "\n".join(lines) + "\n"
    if args.output and args.output != "-":
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- material ---------------------------------------------------------------------------

def cmd_material_register(args) -> int:
    store = _store(args)
    chosen = [x for x in (args.spec, args.ninham_parsegian, args.table) if x]
    if len(chosen) != 1:
        raise ConfigError("give exactly one of --spec, --ninham-parsegian, --table")
    if args.spec:
        model = resolve_material(args.spec).model
    elif args.ninham_parsegian:
        try:
            model = NinhamParsegian(*(float(v) for v in args.ninham_parsegian.split(",")))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"--ninham-parsegian expects c_ir,omega_ir,c_uv,omega_uv: {exc}") from None
    else:
        extension = None
        if args.drude_extension:
            try:
                extension = DrudeParams(*(float(v) for v in args.drude_extension.split(",")))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"--drude-extension expects omega_p,gamma: {exc}") from None
        model = Tabulated(load_optical_csv(args.table, frequency_unit=args.unit), extension)
    record = MaterialRecord.from_model(args.name, model, args.source or "")
    path = store.register(record)
    print(f"registered {args.name} in {path}")
    return EXIT_OK


def cmd_material_list(args) -> int:
    store = _store(args)
    for name in BUILTIN_NAMES:
        r = builtin_material(name)
        print(f"{name:<14} built-in  static_eps={r.static_eps:<10.6g} {r.source}")
    for name in store.names():
        r = store.load(name)
        print(f"{name:<14} store     static_eps={r.static_eps:<10.6g} {r.source}")
    return EXIT_OK


# --- parser ------------------------------------------------------------------------------

def _add_solver_flags(p):
    p.add_argument("--rtol", help="quadrature relative tolerance")
    p.add_argument("--matsubara-tol", dest="matsubara_tol", help="Matsubara tail tolerance")
    p.add_argument("--max-terms", dest="max_terms", help="maximum number of Matsubara terms")
    p.add_argument("--gl-order", dest="gl_order", help="Gauss-Legendre order per panel")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thermocasimir", description=__doc__.split("\n")[0])
    parser.add_argument("--store", help=f"material store directory (default ${STORE_ENV} or ./materials)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate F, P, S and thermal corrections at one (a, T)")
    p.add_argument("--metal", required=True)
    p.add_argument("--dielectric", required=True)
    p.add_argument("-a", "--separation", dest="a", required=True, help="e.g. 600nm, 1um")
    p.add_argument("-T", "--temperature", dest="T", required=True, help="e.g. 300K")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="tabulate F, P, S along temperature or separation")
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--metal")
    p.add_argument("--dielectric")
    p.add_argument("--axis", choices=("temperature", "separation"))
    p.add_argument("--min")
    p.add_argument("--max")
    p.add_argument("--steps")
    p.add_argument("--fixed", help="value of the other variable (a for temperature sweeps)")
    p.add_argument("--spacing", choices=("linear", "log"))
    p.add_argument("--output", "-o", help="CSV path, '-' for stdout")
    p.add_argument("--workers", help="threads evaluating rows concurrently")
    p.add_argument("--ev-entropy", dest="ev_entropy", action="store_true",
                   help="append an entropy column in eV/(m^2 K)")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="run the reproduction checks")
    p.add_argument("suite", nargs="?", default="all", choices=("all", "dilute", "const-eps", "materials"))
    p.add_argument("--au-table", help="Au optical CSV (omega,n1,n2); Drude-extended below the table")
    p.add_argument("--si-table", help="Si optical CSV (omega,n1,n2)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("perm-table", help="eps(i xi) on a logarithmic grid")
    p.add_argument("--material", required=True)
    p.add_argument("--xi-min", default="1e11")
    p.add_argument("--xi-max", default="1e18")
    p.add_argument("--steps", default="71")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_perm_table)

    p = sub.add_parser("material", help="manage the material store")
    msub = p.add_subparsers(dest="material_command", required=True)
    r = msub.add_parser("register", help="add a material to the store")
    r.add_argument("name")
    r.add_argument("--spec", help="const:<eps0>, dilute:<eta> or drude:<omega_p>,<gamma>")
    r.add_argument("--ninham-parsegian", dest="ninham_parsegian",
                   help="c_ir,omega_ir,c_uv,omega_uv")
    r.add_argument("--table", help="optical CSV with omega,n1,n2 (or energy_ev / frequency_hz)")
    r.add_argument("--unit", help="override the table's frequency unit: rad/s, hz or ev")
    r.add_argument("--drude-extension", dest="drude_extension",
                   help="omega_p,gamma used below the lowest tabulated frequency")
    r.add_argument("--source", help="provenance text")
    r.set_defaults(func=cmd_material_register)
    lst = msub.add_parser("list", help="list built-in and stored materials")
    lst.set_defaults(func=cmd_material_list)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, MaterialError, DatasetError, ScopeError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ToleranceError as exc:
        print(f"error: numerical tolerance not met: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
