"""Command-line front end.

Subcommands: ``pp``, ``cp``, ``sweep``, ``asymptote``, ``dce``, ``materials``.
Distances are metres, temperatures kelvin and frequencies Hz at this boundary.

Exit codes: 0 success, 2 argument/input/I-O error, 3 material database error,
4 convergence failure. Failures print one line ``error: <kind>: <reason>`` on
stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import asymptotics as asym
from . import dce
from .lifshitz import ConvergenceError, NumericsConfig, ParallelPlates, force_pp, pressure_pp
from .materials import MaterialDBError, MaterialRecord, get_material, load_material_db
from .pfa import CylinderPlaneGeometry, force_cp

EXIT_OK = 0
EXIT_ARGS = 2
EXIT_DB = 3
EXIT_CONVERGENCE = 4

HEADER = ("d_m", "T_K", "model", "geometry", "value", "unit", "m_terms", "rel_err")
SWEEP_MODELS = ("plasma", "drude", "tabulated", "ideal", "thermal", "lowT")


@dataclass(frozen=True)
class Row:
    d_m: float
    T_K: float
    model: str
    geometry: str
    value: float
    unit: str
    m_terms: int = 0
    rel_err: float = 0.0


def _num(x: float) -> str:
    return f"{x:.8e}"


def _row_fields(row) -> list[str]:
    return [
        _num(row.d_m), _num(row.T_K), row.model, row.geometry,
        _num(row.value), row.unit, str(int(row.m_terms)), _num(row.rel_err),
    ]


def emit_table(rows, fmt: str = "csv", destination=None) -> int:
    """Write rows as CSV (fixed header) or JSON lines; return bytes written.

    ``destination`` is a path, a text stream, or ``None`` for stdout. Numbers
    carry 9 significant digits, so identical inputs give identical bytes.
    """
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(HEADER)
        for row in rows:
            writer.writerow(_row_fields(row))
    elif fmt == "jsonl":
        for row in rows:
            fields = _row_fields(row)
            obj = dict(zip(HEADER, fields))
            for key in ("d_m", "T_K", "value", "rel_err"):
                obj[key] = float(obj[key])
            obj["m_terms"] = int(obj["m_terms"])
            buf.write(json.dumps(obj, separators=(",", ":")) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return _write(buf.getvalue(), destination)


def _write(text: str, destination) -> int:
    data = text.encode("utf-8")
    if destination is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "wb") as fh:
            fh.write(data)
    return len(data)


class _CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(EXIT_ARGS, "argument", message)


def _diag(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


# -- material / numerics helpers ------------------------------------------------


def _record(args) -> MaterialRecord:
    try:
        return get_material(args.material, load_material_db(args.db))
    except MaterialDBError as exc:
        raise _CliError(EXIT_DB, "material-db", str(exc)) from None


def _material(args, model: str | None = None) -> MaterialRecord:
    rec = _record(args)
    model = model or getattr(args, "model", None)
    if model and model != rec.model:
        if model in ("plasma", "drude") and rec.plasma_frequency is None:
            raise _CliError(EXIT_ARGS, "argument", f"{rec.name} has no plasma frequency for the {model} model")
        if model == "tabulated":
            raise _CliError(EXIT_ARGS, "argument", f"{rec.name} has no tabulated data")
        rec = rec.with_model(model)
    if rec.model == "tabulated" and args.m0 is None:
        raise _CliError(EXIT_ARGS, "argument", f"{rec.name} is tabulated: --m0 plasma-like|drude-like is required")
    return rec


def _numerics(args) -> NumericsConfig:
    return NumericsConfig(
        y_cut_offset=args.y_cut,
        zeta_max=args.zeta_max,
        quad_rel_tol=args.rel_tol,
        phi_max=args.phi_max,
        area_convention=args.convention,
    )


# -- evaluation of one (geometry, model, d) point -----------------------------


@dataclass(frozen=True)
class _Point:
    geometry: str
    model: str
    d: float
    T: float
    area: float | None
    L: float | None
    a: float | None
    material: MaterialRecord | None
    cfg: NumericsConfig
    m0: str | None


def _evaluate(pt: _Point) -> tuple[Row, tuple[str, ...]]:
    kwargs = {"m0_policy": pt.m0} if pt.material is not None and pt.material.model == "tabulated" else {}
    if pt.model in ("plasma", "drude", "tabulated"):
        if pt.geometry == "pp":
            if pt.area is None:
                res = pressure_pp(pt.material, pt.d, pt.T, pt.cfg, **kwargs)
            else:
                res = force_pp(pt.material, ParallelPlates(pt.area, pt.d), pt.T, pt.cfg, **kwargs)
        else:
            res = force_cp(pt.material, CylinderPlaneGeometry(pt.L, pt.a, pt.d), pt.T, pt.cfg, **kwargs)
        row = Row(pt.d, pt.T, pt.model, pt.geometry, res.magnitude, res.unit, res.m_terms_used, res.rel_error_estimate)
        return row, res.warnings

    notes: tuple[str, ...] = ()
    if pt.geometry == "pp":
        scale = 1.0 if pt.area is None else pt.area
        unit = "Pa" if pt.area is None else "N"
        ideal = scale * asym.ideal_pp_pressure(pt.d)
        if pt.model == "ideal":
            value = ideal
        elif pt.model == "thermal":
            value = scale * asym.thermal_pp_pressure(pt.d, pt.T)
        else:
            series = asym.low_temperature_ratio_pp(asym.ExpansionInputs.for_point(pt.material, pt.d, pt.T))
            value, notes = series.value * ideal, series.advisories
    else:
        unit = "N"
        ideal = asym.ideal_cp_force(pt.L, pt.a, pt.d)
        if pt.model == "ideal":
            value = ideal
        elif pt.model == "thermal":
            value = asym.thermal_cp_force(pt.L, pt.a, pt.d, pt.T)
        else:
            series = asym.low_temperature_ratio_cp(asym.ExpansionInputs.for_point(pt.material, pt.d, pt.T))
            value, notes = series.value * ideal, series.advisories
    return Row(pt.d, pt.T, pt.model, pt.geometry, value, unit), notes


def _run_points(points: list[_Point], jobs: int) -> list[Row]:
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate, points))
    else:
        results = [_evaluate(p) for p in points]
    seen = set()
    for _, notes in results:
        for note in notes:
            if note not in seen:
                seen.add(note)
                _diag(note)
    return [row for row, _ in results]


def _check_cp_dims(args):
    if args.L is None or args.a is None:
        raise _CliError(EXIT_ARGS, "argument", "cylinder-plane geometry needs --L and --a")


# -- subcommands ----------------------------------------------------------------


def _cmd_pp(args) -> int:
    mat = _material(args)
    pt = _Point("pp", mat.model, args.d, args.T, args.area, None, None, mat, _numerics(args), args.m0)
    rows = _run_points([pt], 1)
    emit_table(rows, args.format, args.out)
    return EXIT_OK


def _cmd_cp(args) -> int:
    mat = _material(args)
    pt = _Point("cp", mat.model, args.d, args.T, None, args.L, args.a, mat, _numerics(args), args.m0)
    rows = _run_points([pt], 1)
    emit_table(rows, args.format, args.out)
    return EXIT_OK


def _parse_models(text: str) -> list[str]:
    models = [m.strip() for m in text.split(",") if m.strip()]
    if not models:
        raise _CliError(EXIT_ARGS, "argument", "--models must list at least one model")
    bad = [m for m in models if m not in SWEEP_MODELS]
    if bad:
        raise _CliError(EXIT_ARGS, "argument", f"unknown model(s) {','.join(bad)}; choose from {','.join(SWEEP_MODELS)}")
    return models


def _distances(args) -> np.ndarray:
    if not 0 < args.d_min < args.d_max:
        raise _CliError(EXIT_ARGS, "argument", "need 0 < --d-min < --d-max")
    if args.points < 2:
        raise _CliError(EXIT_ARGS, "argument", "--points must be >= 2")
    if args.spacing == "log":
        return np.geomspace(args.d_min, args.d_max, args.points)
    return np.linspace(args.d_min, args.d_max, args.points)


def _cmd_sweep(args) -> int:
    models = _parse_models(args.models)
    if args.geometry == "cp":
        _check_cp_dims(args)
    cfg = _numerics(args)
    mats = {}
    for model in models:
        if model in ("plasma", "drude", "tabulated"):
            mats[model] = _material(args, model)
        elif model == "lowT":
            mats[model] = _record(args)
        else:
            mats[model] = None
    points = [
        _Point(args.geometry, model, float(d), args.T, args.area, args.L, args.a, mats[model], cfg, args.m0)
        for d in _distances(args)
        for model in models
    ]
    emit_table(_run_points(points, args.jobs), args.format, args.out)
    return EXIT_OK


def _cmd_asymptote(args) -> int:
    if args.geometry == "cp":
        _check_cp_dims(args)
    mat = _record(args)
    rows = []
    for model in ("ideal", "thermal", "lowT"):
        pt = _Point(args.geometry, model, args.d, args.T, args.area, args.L, args.a, mat, _numerics(args), args.m0)
        rows.append(pt)
    print(f"# T_eff = {asym.t_eff(args.d):.8e} K", file=sys.stderr)
    if mat.plasma_frequency is not None:
        print(f"# delta = {asym.plasma_delta(mat):.8e} m", file=sys.stderr)
    emit_table(_run_points(rows, 1), args.format, args.out)
    return EXIT_OK


def _cmd_dce(args) -> int:
    params = dce.DceParams.from_hz(args.Q, args.eps, args.freq_hz, args.lambda_ratio)
    tau = dce.saturation_time(params)
    n_sat = dce.photon_number(params, saturated=True)
    out = [
        ("photons_saturated", n_sat, "1"),
        ("tau_sat", tau, "s"),
        ("power", dce.photon_power(n_sat, params.omega, tau), "W"),
    ]
    if args.t is not None:
        out.append(("photons_at_t", dce.photon_number(params, args.t), "1"))
    if args.dipole is not None:
        trans = dce.TransitionSpec(
            2 * math.pi * (args.transition_hz or args.freq_hz), args.dipole, args.kind, args.v_over_c
        )
        ref = trans
        if args.ref_hz is not None or args.ref_dipole is not None:
            ref = dce.TransitionSpec(
                2 * math.pi * (args.ref_hz or args.transition_hz or args.freq_hz),
                args.ref_dipole or dce.ATOMIC_DIPOLE,
            )
        budget = dce.detection_budget(params, trans, ref)
        out += [
            ("rate_spont", budget.rate_spont, "1/s"),
            ("reference_rate", budget.reference_rate, "1/s"),
            ("comparison_ratio", budget.comparison_ratio, "1"),
        ]
    buf = io.StringIO()
    if args.format == "csv":
        buf.write("quantity,value,unit\n")
        for name, val, unit in out:
            buf.write(f"{name},{_num(val)},{unit}\n")
    else:
        for name, val, unit in out:
            buf.write(json.dumps({"quantity": name, "value": float(_num(val)), "unit": unit}, separators=(",", ":")) + "\n")
    _write(buf.getvalue(), args.out)
    return EXIT_OK


def _cmd_materials(args) -> int:
    try:
        records = load_material_db(args.db)
    except MaterialDBError as exc:
        raise _CliError(EXIT_DB, "material-db", str(exc)) from None
    buf = io.StringIO()
    buf.write("name,model,plasma_frequency_rad_s,relaxation_frequency_rad_s,table_rows\n")
    for r in records:
        wp = "" if r.plasma_frequency is None else _num(r.plasma_frequency)
        rows = len(r.table) if r.table else 0
        buf.write(f"{r.name},{r.model},{wp},{_num(r.relaxation_frequency)},{rows}\n")
    _write(buf.getvalue(), args.out)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------


def _add_output(p):
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv", help="output format (default csv)")
    p.add_argument("--out", default=None, help="output file path (default stdout)")


def _add_material(p, model_choices=("plasma", "drude", "tabulated")):
    p.add_argument("--material", default="Au", help="material name in the database (default Au)")
    p.add_argument("--model", choices=model_choices, default=None,
                   help="permittivity model; defaults to the record's own model")
    p.add_argument("--m0", choices=("plasma-like", "drude-like"), default=None,
                   help="zero-frequency TE treatment, required for tabulated materials")


def _add_numerics(p):
    g = p.add_argument_group("numerics")
    g.add_argument("--y-cut", type=float, default=50.0, help="integration window beyond m*gamma (dimensionless, default 50)")
    g.add_argument("--zeta-max", type=float, default=1e17, help="largest Matsubara frequency summed, rad/s (default 1e17)")
    g.add_argument("--rel-tol", type=float, default=1e-9, help="relative quadrature tolerance (dimensionless, default 1e-9)")
    g.add_argument("--phi-max", type=float, default=math.pi / 20, help="PFA angular cutoff, radians (default pi/20)")
    g.add_argument("--convention", choices=("cylinder", "plane", "geometric_mean"), default="cylinder",
                   help="PFA strip-area convention (default cylinder)")


def _add_point(p, geometry):
    p.add_argument("--d", type=float, required=True, help="gap, m")
    p.add_argument("--T", type=float, default=300.0, help="temperature, K (default 300)")
    if geometry == "pp":
        p.add_argument("--area", type=float, default=None, help="plate area, m^2 (omit to report pressure in Pa)")
    else:
        p.add_argument("--L", type=float, required=True, help="cylinder length, m")
        p.add_argument("--a", type=float, required=True, help="cylinder radius, m")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="casimir", description="Finite-temperature Casimir forces between real metals.")
    parser.add_argument("--db", default=None,
                        help="material database file (default: $CASIMIR_MATERIAL_DB, else built-in)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pp", help="parallel plates: pressure (Pa) or force (N)")
    _add_point(p, "pp")
    _add_material(p)
    _add_numerics(p)
    _add_output(p)
    p.set_defaults(func=_cmd_pp)

    p = sub.add_parser("cp", help="cylinder-plane force (N) in the proximity force approximation")
    _add_point(p, "cp")
    _add_material(p)
    _add_numerics(p)
    _add_output(p)
    p.set_defaults(func=_cmd_cp)

    p = sub.add_parser("sweep", help="force versus distance table for several models")
    p.add_argument("--geometry", choices=("pp", "cp"), default="pp", help="pp (plates) or cp (cylinder-plane)")
    p.add_argument("--area", type=float, default=None, help="plate area, m^2 (pp; omit for pressure in Pa)")
    p.add_argument("--L", type=float, default=None, help="cylinder length, m (cp)")
    p.add_argument("--a", type=float, default=None, help="cylinder radius, m (cp)")
    p.add_argument("--d-min", type=float, required=True, help="smallest gap, m")
    p.add_argument("--d-max", type=float, required=True, help="largest gap, m")
    p.add_argument("--points", type=int, default=20, help="number of gaps (count, default 20)")
    p.add_argument("--spacing", choices=("log", "linear"), default="log", help="gap spacing (default log)")
    p.add_argument("--models", default="plasma,drude",
                   help=f"comma-separated subset of {','.join(SWEEP_MODELS)} (default plasma,drude)")
    p.add_argument("--T", type=float, default=300.0, help="temperature, K (default 300)")
    p.add_argument("--material", default="Au", help="material name in the database (default Au)")
    p.add_argument("--m0", choices=("plasma-like", "drude-like"), default=None,
                   help="zero-frequency TE treatment, required for tabulated materials")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (count, default 1)")
    _add_numerics(p)
    _add_output(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("asymptote", help="closed-form limits: ideal T=0, high-T thermal, low-T series")
    p.add_argument("--geometry", choices=("pp", "cp"), default="pp", help="pp (plates) or cp (cylinder-plane)")
    p.add_argument("--d", type=float, required=True, help="gap, m")
    p.add_argument("--T", type=float, default=300.0, help="temperature, K (default 300)")
    p.add_argument("--area", type=float, default=None, help="plate area, m^2 (pp; omit for pressure in Pa)")
    p.add_argument("--L", type=float, default=None, help="cylinder length, m (cp)")
    p.add_argument("--a", type=float, default=None, help="cylinder radius, m (cp)")
    p.add_argument("--material", default="Au", help="material supplying the plasma frequency (default Au)")
    p.add_argument("--m0", default=None, help=argparse.SUPPRESS)
    _add_numerics(p)
    _add_output(p)
    p.set_defaults(func=_cmd_asymptote)

    p = sub.add_parser("dce", help="dynamical Casimir photon number, saturation time, power and rates")
    p.add_argument("--Q", type=float, required=True, help="cavity quality factor (dimensionless)")
    p.add_argument("--eps", type=float, required=True, help="modulation amplitude dL/L (dimensionless)")
    p.add_argument("--freq-hz", type=float, default=dce.LI6_HYPERFINE_HZ,
                   help="cavity mode frequency, Hz (default 228e6, 6Li hyperfine)")
    p.add_argument("--lambda-ratio", type=float, default=1.0, help="geometry factor lambda/omega (dimensionless, default 1)")
    p.add_argument("--t", type=float, default=None, help="also report the photon number after this time, s")
    p.add_argument("--dipole", type=float, default=None, help="transition dipole matrix element, C m")
    p.add_argument("--kind", choices=dce.TRANSITION_KINDS, default="electric_dipole", help="transition type")
    p.add_argument("--v-over-c", type=float, default=None, help="v/c suppression for magnetic dipoles (dimensionless)")
    p.add_argument("--transition-hz", type=float, default=None, help="transition frequency, Hz (default --freq-hz)")
    p.add_argument("--ref-hz", type=float, default=None, help="reference electric-dipole transition frequency, Hz")
    p.add_argument("--ref-dipole", type=float, default=None, help="reference dipole matrix element, C m (default e*a0)")
    _add_output(p)
    p.set_defaults(func=_cmd_dce)

    p = sub.add_parser("materials", help="list the material database")
    p.add_argument("--out", default=None, help="output file path (default stdout)")
    p.set_defaults(func=_cmd_materials)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command != "materials" and getattr(args, "jobs", 1) < 1:
            raise _CliError(EXIT_ARGS, "argument", "--jobs must be >= 1")
        return args.func(args)
    except _CliError as exc:
        code, kind, msg = exc.code, exc.kind, str(exc)
    except MaterialDBError as exc:
        code, kind, msg = EXIT_DB, "material-db", str(exc)
    except ConvergenceError as exc:
        code, kind, msg = EXIT_CONVERGENCE, "convergence", str(exc)
    except OSError as exc:
        code, kind, msg = EXIT_ARGS, "io", f"{exc.strerror or exc}: {exc.filename or ''}".rstrip(": ")
    except ValueError as exc:
        code, kind, msg = EXIT_ARGS, "input", str(exc)
    print(f"error: {kind}: {' '.join(msg.split())}", file=sys.stderr)
    return code


run = main


if __name__ == "__main__":
    sys.exit(main())
