"""Dielectric response of metals along the imaginary frequency axis.

Three models are supported:

* ``plasma``: ``eps(i xi) = 1 + wp**2 / xi**2``
* ``drude``: ``eps(i xi) = 1 + wp**2 / (xi * (xi + nu))``
* ``tabulated``: user supplied ``(xi, eps)`` pairs, interpolated linearly in
  ``(log xi, log(eps - 1))`` and clamped outside the table.

Records are read from a small line-oriented text format (see
``parse_material_db``); a default database with gold ships with the package.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from .constants import E_CHARGE, HBAR

MODELS = ("plasma", "drude", "tabulated")

DB_ENV_VAR = "CASIMIR_MATERIAL_DB"


class MaterialDBError(ValueError):
    """Malformed material database or invalid record."""


def ev_to_angular_frequency(energy):
    """Convert photon energy in eV to angular frequency in rad/s."""
    arr = np.asarray(energy, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("energy must be non-negative")
    out = arr * (E_CHARGE / HBAR)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MaterialRecord:
    """A named metal and its permittivity model.

    Frequencies are angular frequencies in rad/s. ``table`` holds increasing
    ``(xi, eps)`` pairs and is only used by the tabulated model, for which
    ``plasma_frequency`` is optional.
    """

    name: str
    model: str
    plasma_frequency: float | None = None
    relaxation_frequency: float = 0.0
    table: tuple[tuple[float, float], ...] | None = None
    _log_table: tuple | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"{self.name}: model must be one of {MODELS}, got {self.model!r}")
        if self.model in ("plasma", "drude") or self.plasma_frequency is not None:
            if self.plasma_frequency is None or not self.plasma_frequency > 0:
                raise ValueError(f"{self.name}: plasma_frequency must be > 0")
        if not self.relaxation_frequency >= 0:
            raise ValueError(f"{self.name}: relaxation_frequency must be >= 0")
        if self.model == "tabulated":
            if not self.table:
                raise ValueError(f"{self.name}: table must not be empty for the tabulated model")
            table = tuple((float(x), float(e)) for x, e in self.table)
            if len(table) < 2:
                raise ValueError(f"{self.name}: table needs at least 2 rows")
            xs = np.array([x for x, _ in table])
            eps = np.array([e for _, e in table])
            if np.any(xs <= 0) or np.any(np.diff(xs) <= 0):
                raise ValueError(f"{self.name}: table xi must be positive and strictly increasing")
            if np.any(eps <= 1):
                raise ValueError(f"{self.name}: table epsilon must be > 1")
            object.__setattr__(self, "table", table)
            object.__setattr__(self, "_log_table", (np.log(xs), np.log(eps - 1.0)))

    def with_model(self, model: str) -> "MaterialRecord":
        """Same metal under another free-electron model (plasma or drude)."""
        return MaterialRecord(
            name=self.name,
            model=model,
            plasma_frequency=self.plasma_frequency,
            relaxation_frequency=self.relaxation_frequency,
            table=self.table if model == "tabulated" else None,
        )


def permittivity_iw(material: MaterialRecord, xi):
    """Permittivity ``eps(i xi)`` at positive imaginary frequency ``xi`` (rad/s).

    Accepts scalars or arrays; the result has the shape of ``xi``.
    """
    x = np.asarray(xi, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("xi must be > 0; the xi -> 0 limit is handled by the m=0 term")
    wp = material.plasma_frequency
    # Same operation order for both models, so nu = 0 reproduces plasma bit for bit.
    if material.model == "plasma":
        out = 1.0 + (wp / x) * (wp / x)
    elif material.model == "drude":
        out = 1.0 + (wp / x) * (wp / (x + material.relaxation_frequency))
    else:
        if material._log_table is None:
            raise ValueError(f"{material.name}: tabulated model without a table")
        log_x, log_em1 = material._log_table
        out = 1.0 + np.exp(np.interp(np.log(x), log_x, log_em1))
    return float(out) if out.ndim == 0 else out


_HEADER = re.compile(r"^material\s+(\S+)\s*$")
_KEYVAL = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)\s*$")
_FIELDS = ("model", "plasma_frequency_eV", "relaxation_meV")


def _to_float(text: str, lineno: int, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise MaterialDBError(f"line {lineno}: {what}: cannot parse {text!r} as a number") from None


def _build_record(name: str, props: dict, table: list, lineno: int) -> MaterialRecord:
    model = props.get("model")
    if model is None:
        raise MaterialDBError(f"record {name!r} (line {lineno}): missing field 'model'")
    if model not in MODELS:
        raise MaterialDBError(f"record {name!r} (line {lineno}): field 'model' must be one of {MODELS}")
    wp_ev = props.get("plasma_frequency_eV")
    nu_mev = props.get("relaxation_meV")
    if model in ("plasma", "drude") and wp_ev is None:
        raise MaterialDBError(f"record {name!r} (line {lineno}): missing field 'plasma_frequency_eV'")
    if model == "drude" and nu_mev is None:
        raise MaterialDBError(f"record {name!r} (line {lineno}): missing field 'relaxation_meV'")
    if wp_ev is not None and not wp_ev > 0:
        raise MaterialDBError(f"record {name!r} (line {lineno}): field 'plasma_frequency_eV' must be > 0")
    if nu_mev is not None and not nu_mev >= 0:
        raise MaterialDBError(f"record {name!r} (line {lineno}): field 'relaxation_meV' must be >= 0")
    if model == "tabulated" and not table:
        raise MaterialDBError(f"record {name!r} (line {lineno}): field 'table' is required for tabulated")
    try:
        return MaterialRecord(
            name=name,
            model=model,
            plasma_frequency=None if wp_ev is None else ev_to_angular_frequency(wp_ev),
            relaxation_frequency=0.0 if nu_mev is None else ev_to_angular_frequency(nu_mev * 1e-3),
            table=tuple(table) if model == "tabulated" else None,
        )
    except ValueError as exc:
        raise MaterialDBError(f"record {name!r} (line {lineno}): field 'table': {exc}") from None


def parse_material_db(text: str) -> list[MaterialRecord]:
    """Parse material database text.

    Grammar::

        # comment
        material Au
            model = drude
            plasma_frequency_eV = 9.0
            relaxation_meV = 35
        material MyMetal
            model = tabulated
            table:
                1e13  8.0e5
                1e15  120.0

    Raises
    ------
    MaterialDBError
        On syntax errors (with the line number) and invalid records (naming
        the record and the field).
    """
    records: list[MaterialRecord] = []
    names: set[str] = set()
    current = None  # (name, props, table, start line)
    in_table = False

    def finish():
        if current is not None:
            name, props, table, start = current
            records.append(_build_record(name, props, table, start))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indented = line[0] in " \t"
        body = line.strip()
        if not indented:
            m = _HEADER.match(body)
            if not m:
                raise MaterialDBError(f"line {lineno}: expected 'material <name>', got {body!r}")
            finish()
            name = m.group(1)
            if name in names:
                raise MaterialDBError(f"line {lineno}: duplicate material name {name!r}")
            names.add(name)
            current = (name, {}, [], lineno)
            in_table = False
            continue
        if current is None:
            raise MaterialDBError(f"line {lineno}: property outside of a 'material' block")
        name, props, table, _ = current
        if body == "table:":
            in_table = True
            continue
        kv = _KEYVAL.match(body)
        if kv:
            in_table = False
            key, val = kv.groups()
            if key not in _FIELDS:
                raise MaterialDBError(f"line {lineno}: unknown field {key!r} in record {name!r}")
            if key in props:
                raise MaterialDBError(f"line {lineno}: field {key!r} repeated in record {name!r}")
            props[key] = val if key == "model" else _to_float(val, lineno, key)
            continue
        if in_table:
            parts = body.split()
            if len(parts) != 2:
                raise MaterialDBError(f"line {lineno}: table rows need '<xi_rad_per_s> <epsilon>'")
            table.append((_to_float(parts[0], lineno, "xi"), _to_float(parts[1], lineno, "epsilon")))
            continue
        raise MaterialDBError(f"line {lineno}: cannot parse {body!r}")
    finish()
    return records


def load_material_db(path: str | os.PathLike | None = None) -> list[MaterialRecord]:
    """Load a material database file (UTF-8, LF or CRLF).

    With ``path=None`` the file named by ``$CASIMIR_MATERIAL_DB`` is used if
    set, otherwise the built-in database.
    """
    if path is None:
        path = os.environ.get(DB_ENV_VAR) or None
    if path is None:
        return default_materials()
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise MaterialDBError(f"cannot read material database {os.fspath(path)!r}: {exc.strerror}") from None
    except UnicodeDecodeError as exc:
        raise MaterialDBError(f"material database {os.fspath(path)!r} is not UTF-8: {exc.reason}") from None
    return parse_material_db(text)


def default_materials() -> list[MaterialRecord]:
    text = resources.files("casimir_thermal").joinpath("data/materials.db").read_text(encoding="utf-8")
    return parse_material_db(text)


def get_material(name: str, records: Iterable[MaterialRecord] | None = None) -> MaterialRecord:
    """Look a record up by name (case-sensitive) in ``records`` or the default database."""
    pool: Sequence[MaterialRecord] = list(records) if records is not None else default_materials()
    for rec in pool:
        if rec.name == name:
            return rec
    known = ", ".join(r.name for r in pool) or "none"
    raise MaterialDBError(f"unknown material {name!r} (known: {known})")
