"""Lifshitz pressure between two identical parallel metal plates at temperature T.

The pressure is a Matsubara sum of integrals over the dimensionless normal
wavevector ``y = kappa * d``::

    P = 1/(pi beta d^3) sum'_m int_{m gamma}^{m gamma + y_cut} y^2
        [ 1/(R_TM e^{2y} - 1) + 1/(R_TE e^{2y} - 1) ] dy

with ``R = r^{-2}`` the inverse squared reflection coefficients, ``gamma =
2 pi d k_B T / (hbar c)``, and the ``m = 0`` term at half weight. Each bracket
term is evaluated as ``e^{-2y} / ((R - 1) - expm1(-2y))`` where ``R - 1`` is
computed without cancellation, so the integrand stays accurate both for nearly
perfect reflectors and at grazing ``y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import C, HBAR, K_B
from .materials import MaterialRecord, permittivity_iw
from .quadrature import ConvergenceError, integrate

__all__ = [
    "ConvergenceError",
    "ForceResult",
    "NumericsConfig",
    "ParallelPlates",
    "ThermalContext",
    "force_pp",
    "m0_te_factor",
    "matsubara_frequency",
    "matsubara_integrand",
    "pressure_pp",
    "reflection_factors",
]

M0_POLICIES = ("plasma-like", "drude-like")
AREA_CONVENTIONS = ("cylinder", "plane", "geometric_mean")

# Initial partition of [m gamma, m gamma + y_cut], as offsets from m gamma.
_Y_OFFSETS = (0.0, 0.5, 1.5, 3.5, 7.5, 15.5, 31.5)
_BLOCK = 4096
# Lower bound on the dimensionless sum: the half-weighted TM m=0 term is
# zeta(3)/8 = 0.1503 for every model.
_SUM_LOWER_BOUND = 0.15


@dataclass(frozen=True)
class ThermalContext:
    """Temperature ``T`` (K) and gap ``d`` (m) with the derived Matsubara scales."""

    temperature: float
    gap: float

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError("temperature must be > 0")
        if not self.gap > 0:
            raise ValueError("gap must be > 0")

    @property
    def beta(self) -> float:
        return 1.0 / (K_B * self.temperature)

    @property
    def gamma(self) -> float:
        return 2.0 * math.pi * self.gap * K_B * self.temperature / (HBAR * C)

    @property
    def xi1(self) -> float:
        """First Matsubara frequency, rad/s."""
        return 2.0 * math.pi * K_B * self.temperature / HBAR


@dataclass(frozen=True)
class NumericsConfig:
    y_cut_offset: float = 50.0
    zeta_max: float = 1e17
    quad_rel_tol: float = 1e-9
    phi_max: float = math.pi / 20
    area_convention: str = "cylinder"

    def __post_init__(self):
        if not self.y_cut_offset >= 10:
            raise ValueError("y_cut_offset must be >= 10")
        if not self.zeta_max > 0:
            raise ValueError("zeta_max must be > 0")
        if not 0 < self.quad_rel_tol < 1:
            raise ValueError("quad_rel_tol must be in (0, 1)")
        if not 0 < self.phi_max <= math.pi / 2:
            raise ValueError("phi_max must be in (0, pi/2]")
        if self.area_convention not in AREA_CONVENTIONS:
            raise ValueError(f"area_convention must be one of {AREA_CONVENTIONS}")


@dataclass(frozen=True)
class ParallelPlates:
    area: float
    gap: float

    def __post_init__(self):
        if not self.area > 0:
            raise ValueError("area must be > 0")
        if not self.gap > 0:
            raise ValueError("gap must be > 0")


@dataclass(frozen=True)
class ForceResult:
    """Magnitude of an attractive force (N) or pressure (Pa) with diagnostics."""

    magnitude: float
    m_terms_used: int
    rel_error_estimate: float
    unit: str = "Pa"
    per_term_breakdown: tuple[tuple[int, float], ...] | None = None
    warnings: tuple[str, ...] = field(default=())

    def __float__(self) -> float:
        return self.magnitude


def matsubara_frequency(ctx: ThermalContext, m: int) -> float:
    """``xi_m = 2 pi m k_B T / hbar`` in rad/s."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return m * ctx.xi1


def _excess(eps, p):
    """``(R_TM - 1, R_TE - 1)`` evaluated without subtractive cancellation."""
    em1 = eps - 1.0
    s = np.sqrt(em1 + p * p)
    te_den = em1 / (s + p)  # s - p
    tm_den = em1 * ((eps + 1.0) * p * p - 1.0) / (eps * p + s)  # eps p - s
    return 4.0 * eps * p * s / (tm_den * tm_den), 4.0 * s * p / (te_den * te_den)


def reflection_factors(eps, p):
    """Inverse squared reflection coefficients ``(r_TM^-2, r_TE^-2)``.

    ``r_TM^-2 = ((eps p + s)/(eps p - s))^2`` and ``r_TE^-2 = ((s + p)/(s - p))^2``
    with ``s = sqrt(eps - 1 + p^2)``. Both are >= 1.
    """
    eps = np.asarray(eps, dtype=float)
    p = np.asarray(p, dtype=float)
    if np.any(~(eps > 1)):
        raise ValueError("eps must be > 1")
    if np.any(~(p >= 1)):
        raise ValueError("p must be >= 1")
    tm, te = _excess(eps, p)
    tm, te = 1.0 + tm, 1.0 + te
    if tm.ndim == 0:
        return float(tm), float(te)
    return tm, te


def _m0_policy(material: MaterialRecord, m0_policy: str | None) -> str:
    if m0_policy is not None and m0_policy not in M0_POLICIES:
        raise ValueError(f"m0_policy must be one of {M0_POLICIES}")
    if material.model == "plasma":
        return "plasma-like"
    if material.model == "drude":
        return "drude-like"
    if m0_policy is None:
        raise ValueError(
            f"{material.name}: tabulated data cannot be extrapolated to xi = 0; "
            "choose m0_policy 'plasma-like' or 'drude-like'"
        )
    if m0_policy == "plasma-like" and material.plasma_frequency is None:
        raise ValueError(f"{material.name}: plasma-like m=0 policy needs a plasma frequency")
    return m0_policy


def _m0_te_excess(material, y, d, policy):
    """``R_TE - 1`` in the xi -> 0 limit (``inf`` when the mode drops out)."""
    if policy == "drude-like":
        return np.full_like(y, np.inf)
    alpha = material.plasma_frequency * d / C
    root = np.sqrt(alpha * alpha + y * y)
    den = alpha * alpha / (root + y)  # root - y
    return 4.0 * y * root / (den * den)


def m0_te_factor(material: MaterialRecord, y, d: float, m0_policy: str | None = None):
    """TE inverse squared reflection coefficient in the zero-frequency limit.

    For the plasma model ``s/p -> sqrt(alpha^2 + y^2)/y`` with ``alpha = wp d / c``,
    which gives a finite factor (the mode contributes). For Drude ``eps`` diverges
    slower than ``1/xi^2`` and the factor is ``inf``: the mode does not contribute.
    Tabulated materials need an explicit ``m0_policy``.
    """
    y = np.asarray(y, dtype=float)
    if np.any(~(y > 0)):
        raise ValueError("y must be > 0")
    if not d > 0:
        raise ValueError("d must be > 0")
    out = 1.0 + _m0_te_excess(material, y, d, _m0_policy(material, m0_policy))
    return float(out) if out.ndim == 0 else out


def _bracket(y, tm_excess, te_excess):
    e = np.exp(-2.0 * y)
    d1 = -np.expm1(-2.0 * y)
    return y * y * (e / (tm_excess + d1) + e / (te_excess + d1))


def _m_integrand(y, m, gamma, eps, perfect):
    if perfect:
        return _bracket(y, 0.0, 0.0)
    p = y / (m * gamma)
    tm, te = _excess(eps, p)
    return _bracket(y, tm, te)


def _m0_integrand(y, material, d, policy, perfect):
    if perfect:
        return _bracket(y, 0.0, 0.0)
    # TM: eps(i xi) diverges as xi -> 0 for both models, so R_TM -> 1.
    return _bracket(y, 0.0, _m0_te_excess(material, y, d, policy))


def matsubara_integrand(
    material: MaterialRecord,
    ctx: ThermalContext,
    m: int,
    y,
    *,
    m0_policy: str | None = None,
    perfect_reflector: bool = False,
):
    """Integrand of the m-th Matsubara term (without the half weight at m=0)."""
    y = np.asarray(y, dtype=float)
    if m == 0:
        policy = "plasma-like" if perfect_reflector else _m0_policy(material, m0_policy)
        return _m0_integrand(y, material, ctx.gap, policy, perfect_reflector)
    eps = None if perfect_reflector else permittivity_iw(material, matsubara_frequency(ctx, m))
    return _m_integrand(y, m, ctx.gamma, eps, perfect_reflector)


def _tail_bound(x: float, gamma: float) -> float:
    """Upper bound on sum_{m >= M} of the dimensionless terms, with ``x = M gamma``.

    Each term is below ``int_x^inf 2 y^2 e^{-2y} / (1 - e^{-2y}) dy`` because
    ``R >= 1``; summing the monotone bound over m gives the expression below.
    """
    if x > 700:
        return 0.0
    poly = x * x + x + 0.5 + (0.5 * x * x + x + 0.75) / gamma
    return poly * math.exp(-2.0 * x) / -math.expm1(-2.0 * gamma)


def _truncation(gamma: float, m_max: int, threshold: float) -> tuple[int, float]:
    """Last index to sum and the bound on everything after it."""
    if _tail_bound((m_max + 1) * gamma, gamma) > threshold:
        return m_max, 0.0
    lo, hi = 1, m_max + 1  # smallest M with bound(M) <= threshold lies in [lo, hi]
    while lo < hi:
        mid = (lo + hi) // 2
        if _tail_bound(mid * gamma, gamma) <= threshold:
            hi = mid
        else:
            lo = mid + 1
    return lo - 1, _tail_bound(lo * gamma, gamma)


def _y_breakpoints(start, y_cut):
    offs = [o for o in _Y_OFFSETS if o < y_cut] + [y_cut]
    return np.asarray(start, dtype=float)[:, None] + np.asarray(offs)[None, :]


def pressure_pp(
    material: MaterialRecord,
    d: float,
    T: float,
    cfg: NumericsConfig | None = None,
    *,
    m0_policy: str | None = None,
    perfect_reflector: bool = False,
    breakdown: bool = False,
) -> ForceResult:
    """Casimir pressure magnitude (Pa) between two identical plates.

    Parameters
    ----------
    material : MaterialRecord
        Permittivity model of both plates.
    d : float
        Gap in metres.
    T : float
        Temperature in kelvin.
    cfg : NumericsConfig, optional
        Cutoffs and tolerances.
    m0_policy : {'plasma-like', 'drude-like'}, optional
        Zero-frequency TE treatment; required for tabulated materials.
    perfect_reflector : bool
        Force every reflection factor to 1 (ideal mirrors at temperature T).
    breakdown : bool
        Attach per-term contributions ``(m, Pa)``.

    Raises
    ------
    ConvergenceError
        If any Matsubara integral misses ``cfg.quad_rel_tol``.
    """
    cfg = cfg or NumericsConfig()
    ctx = ThermalContext(T, d)
    xi1 = ctx.xi1
    if not cfg.zeta_max > xi1:
        raise ValueError(f"zeta_max={cfg.zeta_max:g} must exceed the first Matsubara frequency {xi1:g}")
    policy = "plasma-like" if perfect_reflector else _m0_policy(material, m0_policy)
    gamma = ctx.gamma
    y_cut = cfg.y_cut_offset
    tol = cfg.quad_rel_tol

    m_max = int(math.floor(cfg.zeta_max / xi1))
    m_last, tail = _truncation(gamma, m_max, 1e-3 * tol * _SUM_LOWER_BOUND)

    try:
        r0 = integrate(
            lambda y, own: _m0_integrand(y, material, d, policy, perfect_reflector),
            _y_breakpoints([0.0], y_cut),
            rel_tol=tol,
        )
        terms = [0.5 * float(r0.value[0])]
        errors = [0.5 * float(r0.error[0])]
        for start in range(1, m_last + 1, _BLOCK):
            ms = np.arange(start, min(start + _BLOCK, m_last + 1))
            eps = None if perfect_reflector else permittivity_iw(material, ms * xi1)
            if eps is not None:
                eps = np.atleast_1d(eps)

            def f(y, own, ms=ms, eps=eps):
                e = None if eps is None else eps[own][:, None]
                return _m_integrand(y, ms[own][:, None], gamma, e, perfect_reflector)

            res = integrate(f, _y_breakpoints(ms * gamma, y_cut), rel_tol=tol)
            terms.extend(res.value.tolist())
            errors.extend(res.error.tolist())
    except ConvergenceError as exc:
        raise ConvergenceError(f"pressure at d={d:g} m, T={T:g} K: {exc}") from None

    total = math.fsum(terms)
    prefactor = K_B * T / (math.pi * d ** 3)
    rel_err = (math.fsum(errors) + tail) / total if total > 0 else 0.0
    per_term = None
    if breakdown:
        per_term = tuple((m, prefactor * v) for m, v in enumerate(terms))
    return ForceResult(
        magnitude=prefactor * total,
        m_terms_used=len(terms),
        rel_error_estimate=rel_err,
        unit="Pa",
        per_term_breakdown=per_term,
    )


def force_pp(
    material: MaterialRecord,
    geometry: ParallelPlates,
    T: float,
    cfg: NumericsConfig | None = None,
    **kwargs,
) -> ForceResult:
    """Force magnitude (N) on plates of area ``geometry.area``: ``S * P``."""
    res = pressure_pp(material, geometry.gap, T, cfg, **kwargs)
    S = geometry.area
    per_term = None
    if res.per_term_breakdown is not None:
        per_term = tuple((m, S * v) for m, v in res.per_term_breakdown)
    return ForceResult(
        magnitude=S * res.magnitude,
        m_terms_used=res.m_terms_used,
        rel_error_estimate=res.rel_error_estimate,
        unit="N",
        per_term_breakdown=per_term,
        warnings=res.warnings,
    )
