"""Order-of-magnitude estimators for the dynamical Casimir effect in a cavity.

A cavity mode whose length is modulated with relative amplitude ``eps`` at
twice its frequency is parametrically amplified from vacuum. The photon number
grows as ``sinh^2(lambda eps t)`` until losses stop it at ``tau_sat = Q/omega``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import BOHR_RADIUS, C, E_CHARGE, EPS_0, HBAR

# Ground-state hyperfine splitting of 6Li and the mechanical drive at twice it.
LI6_HYPERFINE_HZ = 228e6
LI6_DRIVE_HZ = 456e6
ATOMIC_DIPOLE = E_CHARGE * BOHR_RADIUS  # C m

# sinh^2 overflows a double just above 355.
MAX_EXPONENT = 350.0

TRANSITION_KINDS = ("electric_dipole", "magnetic_dipole")


class OutOfModelError(ValueError):
    """Exponential growth beyond where the estimate means anything."""


@dataclass(frozen=True)
class DceParams:
    """Cavity parameters. ``lambda_geom`` defaults to ``omega``."""

    q_factor: float
    epsilon_mod: float
    omega: float
    lambda_geom: float | None = None

    def __post_init__(self):
        if not self.q_factor > 0:
            raise ValueError("q_factor must be > 0")
        if not 0 < self.epsilon_mod < 1:
            raise ValueError("epsilon_mod must be in (0, 1)")
        if not self.omega > 0:
            raise ValueError("omega must be > 0")
        if self.lambda_geom is None:
            object.__setattr__(self, "lambda_geom", self.omega)
        elif not self.lambda_geom > 0:
            raise ValueError("lambda_geom must be > 0")

    @classmethod
    def from_hz(cls, q_factor, epsilon_mod, freq_hz, lambda_ratio=1.0) -> "DceParams":
        omega = 2.0 * math.pi * freq_hz
        return cls(q_factor, epsilon_mod, omega, lambda_ratio * omega)


@dataclass(frozen=True)
class TransitionSpec:
    omega_t: float
    dipole_moment: float
    kind: str = "electric_dipole"
    v_over_c: float | None = None

    def __post_init__(self):
        if not self.omega_t > 0:
            raise ValueError("omega_t must be > 0")
        if not self.dipole_moment > 0:
            raise ValueError("dipole_moment must be > 0")
        if self.kind not in TRANSITION_KINDS:
            raise ValueError(f"kind must be one of {TRANSITION_KINDS}")
        if self.kind == "magnetic_dipole" and not (self.v_over_c is not None and 0 < self.v_over_c < 1):
            raise ValueError("magnetic_dipole transitions need 0 < v_over_c < 1")


def _sinh2(x: float) -> float:
    if x > MAX_EXPONENT:
        raise OutOfModelError(f"growth exponent {x:g} exceeds {MAX_EXPONENT:g}; estimate is meaningless")
    return math.sinh(x) ** 2


def saturation_time(p: DceParams) -> float:
    """``Q / omega`` in seconds."""
    return p.q_factor / p.omega


def photon_number(p: DceParams, t: float | None = None, *, saturated: bool = False) -> float:
    """Photons in the amplified mode after time ``t`` or at saturation.

    Saturation evaluates ``sinh^2(lambda eps tau_sat)``, i.e. ``sinh^2(Q eps)``
    for the default ``lambda = omega``.
    """
    if saturated:
        return _sinh2(p.lambda_geom * p.epsilon_mod * saturation_time(p))
    if t is None or not t >= 0:
        raise ValueError("t must be >= 0 (or pass saturated=True)")
    return _sinh2(p.lambda_geom * p.epsilon_mod * t)


def photon_power(n: float, omega: float, tau: float) -> float:
    """Emitted power ``n hbar omega / tau`` in watts."""
    if not n >= 0:
        raise ValueError("n must be >= 0")
    if not (omega > 0 and tau > 0):
        raise ValueError("omega and tau must be > 0")
    return n * HBAR * omega / tau


def spontaneous_rate(t: TransitionSpec) -> float:
    """Spontaneous emission rate ``omega^3 D^2 / (pi eps0 hbar c^3)`` in 1/s.

    Magnetic-dipole transitions pick up an extra ``(v/c)^2``.
    """
    rate = t.omega_t ** 3 * t.dipole_moment ** 2 / (math.pi * EPS_0 * HBAR * C ** 3)
    if t.kind == "magnetic_dipole":
        rate *= t.v_over_c ** 2
    return rate


@dataclass(frozen=True)
class DetectionBudget:
    photons_saturated: float
    tau_sat: float
    power_W: float
    rate_spont: float
    reference_rate: float
    comparison_ratio: float


def detection_budget(p: DceParams, t: TransitionSpec, reference: TransitionSpec) -> DetectionBudget:
    """Bundle the saturated photon number, power and emission rates.

    ``comparison_ratio`` is the transition's spontaneous rate divided by the
    rate of ``reference`` (typically an optical electric-dipole line).
    """
    n = photon_number(p, saturated=True)
    tau = saturation_time(p)
    rate = spontaneous_rate(t)
    ref = spontaneous_rate(reference)
    return DetectionBudget(
        photons_saturated=n,
        tau_sat=tau,
        power_W=photon_power(n, p.omega, tau),
        rate_spont=rate,
        reference_rate=ref,
        comparison_ratio=rate / ref,
    )
