"""Built-in materials and a small on-disk material store.

A store is a directory holding one ``<name>.material`` text file per
material. Each file is a list of ``key = value`` lines (``#`` starts a
comment) naming the model variant and its parameters; floats are written
with ``repr`` so that a round trip is bit-exact. Tabulated materials refer to
a ``omega,n1,n2`` CSV by a path relative to the store directory::

    # thermocasimir material
    name = si-palik
    model = tabulated
    dataset = si-palik.csv
    gl_order = 8
    source = Palik handbook, digitised 2024
    dataset_provenance = ...

Recognised ``model`` values and their keys:

=================  ============================================
ideal-metal        (none)
constant           eps0
dilute             eta
ninham-parsegian   c_ir, omega_ir, c_uv, omega_uv
drude              omega_p, gamma
tabulated          dataset, gl_order, [drude_omega_p, drude_gamma]
=================  ============================================

Writes are single-writer: a file is created atomically and never replaced,
so concurrent readers only ever see complete records.
"""

from __future__ import annotations

import math
import os
import re
import tempfile
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .permittivity import (Constant, DatasetError, Dilute, Drude, DrudeParams, IdealMetal,
                           NinhamParsegian, PermittivityModel, Tabulated, eval_epsilon,
                           load_optical_csv, save_optical_csv)

__all__ = [
    "MaterialRecord",
    "MaterialError",
    "MaterialStore",
    "BUILTIN_NAMES",
    "builtin_material",
    "register_material",
    "resolve_material",
    "static_permittivity",
    "sample_dataset_path",
]

# alpha-Al2O3 two-oscillator parameters
ALUMINA = NinhamParsegian(c_ir=7.03, omega_ir=1e14, c_uv=2.072, omega_uv=2e16)
# single UV oscillator with the static permittivity of Si; flat to 5% up to 1e15 rad/s
SI_FALLBACK = NinhamParsegian(c_ir=0.0, omega_ir=1e13, c_uv=10.66, omega_uv=6.6e15)
# conventional Au Drude parameters
AU_DRUDE = Drude(DrudeParams(omega_p=1.37e16, gamma=5.3e13))

_NAME_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")
_FORMAT_LINE = "# thermocasimir material"


class MaterialError(ValueError):
    """Unknown, duplicate or malformed material."""


def static_permittivity(model: PermittivityModel) -> float:
    """``eps(0)``; ``math.inf`` for metals."""
    if isinstance(model, (IdealMetal, Drude)):
        return math.inf
    if isinstance(model, Tabulated) and model.extrapolation is not None:
        return math.inf
    return float(eval_epsilon(model, 0.0))


@dataclass(frozen=True)
class MaterialRecord:
    name: str
    model: PermittivityModel
    source: str
    static_eps: float

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise MaterialError(f"invalid material name {self.name!r}")
        expected = static_permittivity(self.model)
        if not (expected == self.static_eps
                or (math.isfinite(expected) and math.isclose(expected, self.static_eps,
                                                             rel_tol=1e-12))):
            raise MaterialError(f"static_eps {self.static_eps} disagrees with the model "
                                f"value {expected}")

    @classmethod
    def from_model(cls, name: str, model: PermittivityModel, source: str = "") -> "MaterialRecord":
        return cls(name, model, source, static_permittivity(model))


def sample_dataset_path() -> Path:
    """Path of the bundled synthetic Si-like optical table."""
    return Path(str(resources.files("thermocasimir") / "data" / "si_lorentz_sample.csv"))


def _builtins() -> dict[str, MaterialRecord]:
    return {
        "ideal-metal": MaterialRecord.from_model(
            "ideal-metal", IdealMetal(), "perfect reflector, r = 1 for both polarizations"),
        "vacuum": MaterialRecord.from_model("vacuum", Constant(1.0), "eps = 1"),
        "alumina": MaterialRecord.from_model(
            "alumina", ALUMINA,
            "alpha-Al2O3, Ninham-Parsegian form: C_IR = 7.03, omega_IR = 1e14 rad/s, "
            "C_UV = 2.072, omega_UV = 2e16 rad/s"),
        "si-fallback": MaterialRecord.from_model(
            "si-fallback", SI_FALLBACK,
            "APPROXIMATE: single UV oscillator, eps0 = 11.66, omega = 6.6e15 rad/s; "
            "replace with a tabulated dataset for quantitative work"),
        "au-drude": MaterialRecord.from_model(
            "au-drude", AU_DRUDE,
            "APPROXIMATE: pure Drude Au, omega_p = 1.37e16 rad/s, gamma = 5.3e13 rad/s"),
        "si-sample": MaterialRecord.from_model(
            "si-sample", Tabulated(load_optical_csv(sample_dataset_path())),
            "SYNTHETIC Lorentz-oscillator table shipped as a format example"),
    }


_BUILTIN_CACHE: dict[str, MaterialRecord] = {}
BUILTIN_NAMES = ("alumina", "si-fallback", "au-drude", "ideal-metal", "vacuum", "si-sample")


def builtin_material(name: str) -> MaterialRecord:
    if not _BUILTIN_CACHE:
        _BUILTIN_CACHE.update(_builtins())
    try:
        return _BUILTIN_CACHE[name]
    except KeyError:
        raise MaterialError(f"unknown built-in material {name!r}; "
                            f"known: {', '.join(BUILTIN_NAMES)}") from None


# --- serialisation ------------------------------------------------------------

def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\n", "\\n")


def _unescape(text: str) -> str:
    return re.sub(r"\\(.)", lambda m: "\n" if m.group(1) == "n" else m.group(1), text)


def _model_fields(model: PermittivityModel) -> list[tuple[str, object]]:
    if isinstance(model, IdealMetal):
        return [("model", "ideal-metal")]
    if isinstance(model, Constant):
        return [("model", "constant"), ("eps0", model.eps0)]
    if isinstance(model, Dilute):
        return [("model", "dilute"), ("eta", model.eta)]
    if isinstance(model, NinhamParsegian):
        return [("model", "ninham-parsegian"), ("c_ir", model.c_ir), ("omega_ir", model.omega_ir),
                ("c_uv", model.c_uv), ("omega_uv", model.omega_uv)]
    if isinstance(model, Drude):
        return [("model", "drude"), ("omega_p", model.params.omega_p),
                ("gamma", model.params.gamma)]
    raise MaterialError(f"cannot serialise model {type(model).__name__}")


def _format(value) -> str:
    return repr(float(value)) if isinstance(value, float) else str(value)


def _parse(path: Path) -> dict[str, str]:
    fields = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise MaterialError(f"{path}:{lineno}: expected 'key = value'")
        key = key.strip()
        if key in fields:
            raise MaterialError(f"{path}:{lineno}: duplicate key {key!r}")
        fields[key] = value.strip()
    return fields


def _float(fields, key, path):
    try:
        return float(fields[key])
    except KeyError:
        raise MaterialError(f"{path}: missing key {key!r}") from None
    except ValueError:
        raise MaterialError(f"{path}: {key} = {fields[key]!r} is not a number") from None


def _build_model(fields: dict[str, str], path: Path) -> PermittivityModel:
    kind = fields.get("model")
    f = lambda key: _float(fields, key, path)  # noqa: E731
    try:
        if kind == "ideal-metal":
            return IdealMetal()
        if kind == "constant":
            return Constant(f("eps0"))
        if kind == "dilute":
            return Dilute(f("eta"))
        if kind == "ninham-parsegian":
            return NinhamParsegian(f("c_ir"), f("omega_ir"), f("c_uv"), f("omega_uv"))
        if kind == "drude":
            return Drude(DrudeParams(f("omega_p"), f("gamma")))
        if kind == "tabulated":
            if "dataset" not in fields:
                raise MaterialError(f"{path}: tabulated material needs a 'dataset' key")
            csv_path = path.parent / fields["dataset"]
            provenance = _unescape(fields["dataset_provenance"]) \
                if "dataset_provenance" in fields else None
            data = load_optical_csv(csv_path, provenance=provenance)
            extrapolation = None
            if "drude_omega_p" in fields or "drude_gamma" in fields:
                extrapolation = DrudeParams(f("drude_omega_p"), f("drude_gamma"))
            return Tabulated(data, extrapolation, int(fields.get("gl_order", "8")))
    except (ValueError, DatasetError) as exc:
        if isinstance(exc, MaterialError):
            raise
        raise MaterialError(f"{path}: {exc}") from exc
    raise MaterialError(f"{path}: unknown model {kind!r}")


class MaterialStore:
    """Directory of ``<name>.material`` files."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def _path(self, name: str) -> Path:
        if not _NAME_RE.match(name):
            raise MaterialError(f"invalid material name {name!r}")
        return self.directory / f"{name}.material"

    def names(self) -> list[str]:
        if not self.directory.is_dir():
            return []
        return sorted(p.stem for p in self.directory.glob("*.material"))

    def __contains__(self, name: str) -> bool:
        return self._path(name).exists()

    def load(self, name: str) -> MaterialRecord:
        path = self._path(name)
        if not path.exists():
            raise MaterialError(f"material {name!r} not found in {self.directory}")
        fields = _parse(path)
        if fields.get("name") != name:
            raise MaterialError(f"{path}: name field {fields.get('name')!r} does not match "
                                "the file name")
        model = _build_model(fields, path)
        return MaterialRecord.from_model(name, model, _unescape(fields.get("source", "")))

    def register(self, record: MaterialRecord) -> Path:
        """Persist ``record``; refuses to overwrite an existing name."""
        if record.name in BUILTIN_NAMES:
            raise MaterialError(f"{record.name!r} is a built-in material name")
        path = self._path(record.name)
        if path.exists():
            raise MaterialError(f"material {record.name!r} already registered in {self.directory}")
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise MaterialError(f"cannot create store {self.directory}: {exc}") from exc
        lines = [_FORMAT_LINE, f"name = {record.name}"]
        model = record.model
        if isinstance(model, Tabulated):
            csv_name = f"{record.name}.csv"
            if (self.directory / csv_name).exists():
                raise MaterialError(f"{self.directory / csv_name} already exists")
            lines += ["model = tabulated", f"dataset = {csv_name}", f"gl_order = {model.gl_order}"]
            if model.extrapolation is not None:
                lines += [f"drude_omega_p = {_format(model.extrapolation.omega_p)}",
                          f"drude_gamma = {_format(model.extrapolation.gamma)}"]
            lines.append(f"dataset_provenance = {_escape(model.data.provenance)}")
        else:
            lines += [f"{k} = {_format(v)}" for k, v in _model_fields(model)]
        lines.append(f"source = {_escape(record.source)}")
        text = "\n".join(lines) + "\n"
        try:
            if isinstance(model, Tabulated):
                save_optical_csv(model.data, self.directory / csv_name)
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".material")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            try:
                # link fails if the name appeared meanwhile: never overwrite
                os.link(tmp, path)
            except FileExistsError:
                raise MaterialError(f"material {record.name!r} already registered") from None
            finally:
                os.unlink(tmp)
        except OSError as exc:
            raise MaterialError(f"cannot write to store {self.directory}: {exc}") from exc
        return path


def register_material(record: MaterialRecord, store: MaterialStore | str | os.PathLike) -> Path:
    if not isinstance(store, MaterialStore):
        store = MaterialStore(store)
    return store.register(record)


def resolve_material(spec: str, store: MaterialStore | None = None) -> MaterialRecord:
    """Turn a command-line material spec into a record.

    Accepts a built-in name, ``const:<eps0>``, ``dilute:<eta>``,
    ``drude:<omega_p>,<gamma>`` or the name of a material in ``store``.
    """
    kind, sep, arg = spec.partition(":")
    if sep:
        try:
            if kind == "const":
                return MaterialRecord.from_model(f"const-{arg}", Constant(float(arg)),
                                                 "constant permittivity")
            if kind == "dilute":
                return MaterialRecord.from_model(f"dilute-{arg}", Dilute(float(arg)),
                                                 "eps = 1 + eta")
            if kind == "drude":
                wp, gamma = (float(v) for v in arg.split(","))
                return MaterialRecord.from_model("drude", Drude(DrudeParams(wp, gamma)),
                                                 "pure Drude metal")
        except ValueError as exc:
            raise MaterialError(f"bad material spec {spec!r}: {exc}") from None
        raise MaterialError(f"unknown material kind {kind!r} in {spec!r}")
    if spec in BUILTIN_NAMES:
        return builtin_material(spec)
    if store is not None and _NAME_RE.match(spec) and spec in store:
        return store.load(spec)
    raise MaterialError(f"unknown material {spec!r}")
