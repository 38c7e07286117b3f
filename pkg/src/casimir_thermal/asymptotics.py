"""Closed-form limits of the Casimir force.

* perfect mirrors at zero temperature (``d^-4`` plates, ``d^-7/2`` cylinder),
* plasma-model low-temperature series, first order in ``delta/d``,
* the classical high-temperature limit (``d^-3`` plates, ``d^-5/2`` cylinder).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import C, HBAR, K_B, ZETA_3, ZETA_7_2
from .materials import MaterialRecord

PI = math.pi
SQRT2 = math.sqrt(2.0)

# Coefficient of the (T/T_eff)^{7/2} term of the cylinder-plane series, used as published.
CP_THERMAL_COEFF = 132.096


def _positive(**kw):
    for name, val in kw.items():
        if not val > 0:
            raise ValueError(f"{name} must be > 0")


def ideal_pp_pressure(d: float) -> float:
    """``pi^2 hbar c / (240 d^4)`` in Pa."""
    _positive(d=d)
    return PI ** 2 * HBAR * C / (240.0 * d ** 4)


def ideal_cp_force(L: float, a: float, d: float) -> float:
    """``pi^3 hbar c L sqrt(a) / (384 sqrt(2) d^{7/2})`` in N."""
    _positive(L=L, a=a, d=d)
    return PI ** 3 * HBAR * C * L * math.sqrt(a) / (384.0 * SQRT2 * d ** 3.5)


def thermal_pp_pressure(d: float, T: float) -> float:
    """``zeta(3) k_B T / (4 pi d^3)`` in Pa."""
    _positive(d=d, T=T)
    return ZETA_3 * K_B * T / (4.0 * PI * d ** 3)


def thermal_cp_force(L: float, a: float, d: float, T: float) -> float:
    """``3 zeta(3) k_B T L sqrt(a) / (16 sqrt(2) d^{5/2})`` in N."""
    _positive(L=L, a=a, d=d, T=T)
    return 3.0 * ZETA_3 * K_B * T * L * math.sqrt(a) / (16.0 * SQRT2 * d ** 2.5)


def t_eff(d: float) -> float:
    """Temperature ``hbar c / (2 k_B d)`` above which thermal photons dominate."""
    _positive(d=d)
    return HBAR * C / (2.0 * K_B * d)


def plasma_delta(material: MaterialRecord) -> float:
    """Plasma penetration length ``c / wp`` (metres)."""
    if material.plasma_frequency is None:
        raise ValueError(f"{material.name}: no plasma frequency; delta is undefined")
    return C / material.plasma_frequency


@dataclass(frozen=True)
class ExpansionInputs:
    t_ratio: float
    delta_over_d: float

    def __post_init__(self):
        if not (math.isfinite(self.t_ratio) and self.t_ratio >= 0):
            raise ValueError("t_ratio must be finite and >= 0")
        if not (math.isfinite(self.delta_over_d) and self.delta_over_d >= 0):
            raise ValueError("delta_over_d must be finite and >= 0")

    @classmethod
    def for_point(cls, material: MaterialRecord, d: float, T: float) -> "ExpansionInputs":
        return cls(t_ratio=T / t_eff(d), delta_over_d=plasma_delta(material) / d)

    @property
    def advisories(self) -> tuple[str, ...]:
        out = []
        if self.t_ratio >= 1:
            out.append(f"T/T_eff = {self.t_ratio:.3g} >= 1: low-temperature series outside its range")
        if self.delta_over_d >= 0.2:
            out.append(f"delta/d = {self.delta_over_d:.3g} >= 0.2: first-order series unreliable")
        return tuple(out)


@dataclass(frozen=True)
class SeriesValue:
    value: float
    advisories: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.advisories

    def __float__(self) -> float:
        return self.value


def low_temperature_ratio_pp(x: ExpansionInputs) -> SeriesValue:
    """``F_pp / F_pp(T=0, ideal)`` for the plasma model at ``T << T_eff``."""
    t = x.t_ratio
    value = 1.0 + t ** 4 / 3.0 - (16.0 * x.delta_over_d / 3.0) * (1.0 - 45.0 * ZETA_3 / (8.0 * PI ** 3) * t ** 3)
    return SeriesValue(value, x.advisories)


def low_temperature_ratio_cp(x: ExpansionInputs) -> SeriesValue:
    """``F_cp / F_cp(T=0, ideal)`` for the plasma model at ``T << T_eff``."""
    t = x.t_ratio
    value = (
        1.0
        + CP_THERMAL_COEFF * ZETA_7_2 / PI ** 4.5 * t ** 3.5
        - x.delta_over_d * (14.0 / 3.0 - 48.0 * ZETA_3 / PI ** 3 * t ** 3)
    )
    return SeriesValue(value, x.advisories)
