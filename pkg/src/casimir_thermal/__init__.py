"""Finite-temperature Casimir forces between real metals.

Lifshitz pressure between parallel plates, cylinder-plane forces through the
proximity force approximation, closed-form asymptotic limits and dynamical
Casimir effect estimators.
"""

from .constants import HBAR, C, K_B, EPS_0, E_CHARGE, ZETA_3, ZETA_7_2
from .materials import (
    MaterialRecord,
    MaterialDBError,
    default_materials,
    ev_to_angular_frequency,
    get_material,
    load_material_db,
    parse_material_db,
    permittivity_iw,
)
from .lifshitz import (
    ConvergenceError,
    ForceResult,
    NumericsConfig,
    ParallelPlates,
    ThermalContext,
    force_pp,
    m0_te_factor,
    matsubara_frequency,
    matsubara_integrand,
    pressure_pp,
    reflection_factors,
)
from .pfa import CylinderPlaneGeometry, force_cp, pfa_spread, phi_limit_robustness
from .asymptotics import (
    ExpansionInputs,
    SeriesValue,
    ideal_cp_force,
    ideal_pp_pressure,
    low_temperature_ratio_cp,
    low_temperature_ratio_pp,
    plasma_delta,
    t_eff,
    thermal_cp_force,
    thermal_pp_pressure,
)
from .dce import (
    DceParams,
    OutOfModelError,
    TransitionSpec,
    detection_budget,
    photon_number,
    photon_power,
    saturation_time,
    spontaneous_rate,
)

__version__ = "0.1.0"
