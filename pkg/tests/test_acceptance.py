"""Exit criteria. Each test appends one PASS/FAIL line, shown in the pytest summary."""

import math

import numpy as np
import pytest

from casimir_thermal.asymptotics import (
    ExpansionInputs,
    ideal_pp_pressure,
    low_temperature_ratio_pp,
    thermal_pp_pressure,
)
from casimir_thermal.cli import main
from casimir_thermal.constants import C
from casimir_thermal.dce import LI6_HYPERFINE_HZ, DceParams, photon_number, photon_power, saturation_time
from casimir_thermal.lifshitz import (
    NumericsConfig,
    ThermalContext,
    m0_te_factor,
    matsubara_integrand,
    pressure_pp,
    reflection_factors,
)
from casimir_thermal.materials import permittivity_iw
from casimir_thermal.pfa import CylinderPlaneGeometry, force_cp, pfa_spread, phi_limit_robustness

L, A, T_ROOM = 0.02, 0.01, 300.0


def report(log, number, title, ok, detail):
    log.append(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}")
    return ok


def test_01_ideal_limit(ideal_proxy, acceptance_log):
    d = 1e-6
    p = pressure_pp(ideal_proxy, d, 1.0).magnitude
    dev = abs(p / ideal_pp_pressure(d) - 1)
    assert report(acceptance_log, 1, "ideal-limit recovery", dev <= 5e-3,
                  f"P={p:.6e} Pa, |P/P_Casimir - 1| = {dev:.2e} (tol 5e-3)")


def test_02_high_temperature_limit(gold, gold_plasma, acceptance_log):
    d = 10e-6
    ref = thermal_pp_pressure(d, T_ROOM)
    plasma = pressure_pp(gold_plasma, d, T_ROOM).magnitude
    drude = pressure_pp(gold, d, T_ROOM).magnitude
    dev = abs(plasma / ref - 1)
    ratio = drude / ref
    ok = dev <= 0.03 and 0.48 <= ratio <= 0.52
    assert report(acceptance_log, 2, "high-temperature limit", ok,
                  f"plasma/thermal - 1 = {dev:.2e} (tol 3e-2), drude/thermal = {ratio:.4f} (in [0.48, 0.52])")


def test_03_model_ordering(gold, gold_plasma, acceptance_log):
    grid = np.geomspace(0.5e-6, 30e-6, 20)
    worst = 0.0
    ok = True
    for d in grid:
        pp = (pressure_pp(gold, d, T_ROOM).magnitude, pressure_pp(gold_plasma, d, T_ROOM).magnitude)
        g = CylinderPlaneGeometry(L, A, d)
        cp = (force_cp(gold, g, T_ROOM).magnitude, force_cp(gold_plasma, g, T_ROOM).magnitude)
        for drude, plasma in (pp, cp):
            ok &= drude < plasma
            worst = max(worst, drude / plasma)
    assert report(acceptance_log, 3, "drude < plasma on 20-point grid (pp, cp)", ok,
                  f"max drude/plasma = {worst:.4f}")


def test_04_pfa_convention_spread(gold, gold_plasma, acceptance_log):
    spreads = {}
    for mat in (gold_plasma, gold):
        for d in (1e-6, 3e-6, 10e-6):
            spreads[(mat.model, d)] = pfa_spread(mat, CylinderPlaneGeometry(L, A, d), T_ROOM)
    worst = max(spreads.values())
    assert report(acceptance_log, 4, "PFA area-convention spread", worst <= 0.012,
                  f"max spread = {worst:.2e} (tol 1.2e-2)")


def test_05_cutoff_robustness(gold, gold_plasma, acceptance_log):
    base = NumericsConfig()
    variants = [NumericsConfig(y_cut_offset=100.0), NumericsConfig(zeta_max=2e17),
                NumericsConfig(y_cut_offset=100.0, zeta_max=2e17)]
    worst = 0.0
    for mat in (gold_plasma, gold):
        for d in (1e-6, 3e-6, 10e-6):
            p0 = pressure_pp(mat, d, T_ROOM, base).magnitude
            for cfg in variants:
                worst = max(worst, abs(pressure_pp(mat, d, T_ROOM, cfg).magnitude / p0 - 1))
    assert report(acceptance_log, 5, "cutoff robustness", worst < 1e-3,
                  f"max relative shift = {worst:.2e} (tol 1e-3)")


def test_06_cylinder_plane_scaling(ideal_proxy, acceptance_log):
    ds = np.geomspace(1e-6, 5e-6, 5)
    f = [force_cp(ideal_proxy, CylinderPlaneGeometry(L, A, d), 1.0).magnitude for d in ds]
    slope = np.polyfit(np.log(ds), np.log(f), 1)[0]
    assert report(acceptance_log, 6, "cylinder-plane log-log slope", abs(slope + 3.5) <= 0.05,
                  f"slope = {slope:.4f} (target -3.5 +- 0.05)")


def test_07_low_temperature_series(gold_plasma, acceptance_log):
    d = 0.5e-6
    full = pressure_pp(gold_plasma, d, T_ROOM).magnitude / ideal_pp_pressure(d)
    series = low_temperature_ratio_pp(ExpansionInputs.for_point(gold_plasma, d, T_ROOM)).value
    dev = abs(full / series - 1)
    assert report(acceptance_log, 7, "low-T series vs full Lifshitz at 0.5 um", dev <= 0.02,
                  f"full = {full:.4f}, series = {series:.4f}, deviation = {dev:.2%} (tol 2%)")


def test_08_phi_limit(ideal_proxy, acceptance_log):
    change = phi_limit_robustness(ideal_proxy, CylinderPlaneGeometry(L, A, 3e-6), 1.0)
    assert report(acceptance_log, 8, "phi_max pi/20 -> pi/2", change < 1e-6,
                  f"relative change = {change:.2e} (tol 1e-6)")


def test_09_dce_numbers(acceptance_log):
    n1 = photon_number(DceParams(1e8, 1e-8, 1.0), saturated=True)
    n4 = photon_number(DceParams(1e8, 4e-8, 1.0), saturated=True)
    p = DceParams.from_hz(1e8, 1e-8, LI6_HYPERFINE_HZ)
    power = photon_power(photon_number(p, saturated=True), p.omega, saturation_time(p))
    ok = abs(n1 - 1.38110) <= 1e-5 and abs(n4 - 744.74) <= 0.01 and 1e-27 <= power <= 1e-23
    assert report(acceptance_log, 9, "DCE photon numbers and power", ok,
                  f"N(Qe=1) = {n1:.5f}, N(Qe=4) = {n4:.2f}, P = {power:.3e} W (window 1e-27..1e-23)")


def test_10_m0_limit(gold, gold_plasma, acceptance_log):
    d = 3e-6
    worst = 0.0
    for y in (0.1, 1.0, 10.0):
        limit = m0_te_factor(gold_plasma, y, d)
        for xi in (1e6, 1e5, 1e4):
            _, te = reflection_factors(permittivity_iw(gold_plasma, xi), y * C / (d * xi))
            worst = max(worst, abs(te / limit - 1))
    ctx = ThermalContext(T_ROOM, d)
    y = np.linspace(1e-3, 50, 400)
    tm_only = y * y * (np.exp(-2 * y) / -np.expm1(-2 * y))
    drude_zero = m0_te_factor(gold, 1.0, d) == math.inf and np.array_equal(
        matsubara_integrand(gold, ctx, 0, y), tm_only)
    ok = worst <= 1e-4 and drude_zero
    assert report(acceptance_log, 10, "m=0 TE limit", ok,
                  f"plasma max rel diff = {worst:.1e} (tol 1e-4), drude TE m=0 exactly zero: {drude_zero}")


def test_11_determinism(tmp_path, acceptance_log):
    args = ["sweep", "--geometry", "cp", "--L", "0.02", "--a", "0.01", "--d-min", "1e-6", "--d-max", "1e-5",
            "--points", "8", "--models", "plasma,drude", "--T", "300"]
    blobs = []
    for jobs in (1, 2, 4):
        out = tmp_path / f"sweep_{jobs}.csv"
        assert main(args + ["--jobs", str(jobs), "--out", str(out)]) == 0
        blobs.append(out.read_bytes())
    same = all(b == blobs[0] for b in blobs)
    assert report(acceptance_log, 11, "byte-identical sweeps for jobs 1, 2, 4", same,
                  f"{len(blobs[0])} bytes each")
