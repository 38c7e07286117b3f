"""Cylinder-plane force in the proximity force approximation.

The cylinder (radius ``a``, length ``L``, axis parallel to the plate) is cut
into strips at angle ``phi`` from the point of closest approach; each strip
sees the parallel-plate pressure at the local gap ``d + a (1 - cos phi)``::

    F = 2 int_0^{phi_max} P(d + a(1 - cos phi)) w(phi) dphi

The strip area is ambiguous: ``w = L a`` (cylinder side), ``L a cos phi``
(plate side) or their geometric mean ``L a sqrt(cos phi)``. All three are
integrated together on the same nodes so each pressure is computed once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .lifshitz import AREA_CONVENTIONS, ConvergenceError, ForceResult, NumericsConfig, pressure_pp
from .materials import MaterialRecord
from .quadrature import integrate

PFA_VALIDITY_RATIO = 0.01


@dataclass(frozen=True)
class CylinderPlaneGeometry:
    length: float
    radius: float
    gap: float

    def __post_init__(self):
        for name in ("length", "radius", "gap"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")

    @property
    def pfa_valid(self) -> bool:
        return self.gap / self.radius < PFA_VALIDITY_RATIO


def _phi_breakpoints(geom: CylinderPlaneGeometry, phi_max: float) -> list[float]:
    # Angular width of the region that dominates the integral.
    width = math.sqrt(2.0 * geom.gap / geom.radius)
    pts = [0.0]
    k = 0.5
    while k * width < phi_max:
        pts.append(k * width)
        k *= 2.0
    pts.append(phi_max)
    return pts


def _cp_integrals(material, geom, T, cfg, pressure_kwargs):
    L, a, d = geom.length, geom.radius, geom.gap
    cache: dict[float, ForceResult] = {}

    def pressure(gap: float) -> float:
        res = cache.get(gap)
        if res is None:
            res = pressure_pp(material, gap, T, cfg, **pressure_kwargs)
            cache[gap] = res
        return res.magnitude

    def f(phi, owner):
        half = np.sin(0.5 * phi)
        gaps = d + 2.0 * a * half * half
        P = np.array([pressure(g) for g in gaps.ravel()]).reshape(phi.shape)
        cos = np.clip(np.cos(phi), 0.0, 1.0)
        weights = np.stack([np.ones_like(cos), cos, np.sqrt(cos)], axis=-1)
        return (L * a) * P[..., None] * weights

    try:
        res = integrate(f, [_phi_breakpoints(geom, cfg.phi_max)], rel_tol=cfg.quad_rel_tol)
    except ConvergenceError as exc:
        raise ConvergenceError(f"cylinder-plane angular integral at d={d:g} m: {exc}") from None
    values = 2.0 * res.value[0]
    quad_rel = np.max(res.error[0] / np.where(res.value[0] > 0, res.value[0], 1.0))
    p_rel = max(r.rel_error_estimate for r in cache.values())
    m_terms = max(r.m_terms_used for r in cache.values())
    return dict(zip(AREA_CONVENTIONS, values.tolist())), float(quad_rel + p_rel), m_terms


def _warnings(geom):
    if geom.pfa_valid:
        return ()
    return (f"PFA validity: d/a = {geom.gap / geom.radius:.3g} >= {PFA_VALIDITY_RATIO}",)


def force_cp(
    material: MaterialRecord,
    geom: CylinderPlaneGeometry,
    T: float,
    cfg: NumericsConfig | None = None,
    **pressure_kwargs,
) -> ForceResult:
    """Cylinder-plane force magnitude (N) for ``cfg.area_convention``.

    Extra keyword arguments go to :func:`pressure_pp` (``m0_policy``,
    ``perfect_reflector``). A warning string is attached when ``d/a >= 0.01``.
    """
    cfg = cfg or NumericsConfig()
    forces, rel_err, m_terms = _cp_integrals(material, geom, T, cfg, pressure_kwargs)
    return ForceResult(
        magnitude=forces[cfg.area_convention],
        m_terms_used=m_terms,
        rel_error_estimate=rel_err,
        unit="N",
        warnings=_warnings(geom),
    )


def force_cp_all(material, geom, T, cfg=None, **pressure_kwargs) -> dict[str, float]:
    """Forces under every area convention, keyed by convention name."""
    cfg = cfg or NumericsConfig()
    forces, _, _ = _cp_integrals(material, geom, T, cfg, pressure_kwargs)
    return forces


def pfa_spread(material, geom, T, cfg=None, **pressure_kwargs) -> float:
    """Relative spread ``(max - min) / min`` of the force over the area conventions."""
    forces = force_cp_all(material, geom, T, cfg, **pressure_kwargs)
    lo, hi = min(forces.values()), max(forces.values())
    return (hi - lo) / lo


def phi_limit_robustness(
    material, geom, T, cfg=None, phi_max_alt: float = math.pi / 2, **pressure_kwargs
) -> float:
    """Relative change of :func:`force_cp` when the angular cutoff becomes ``phi_max_alt``."""
    cfg = cfg or NumericsConfig()
    base = force_cp(material, geom, T, cfg, **pressure_kwargs).magnitude
    if phi_max_alt == cfg.phi_max:
        return 0.0
    alt = force_cp(material, geom, T, replace(cfg, phi_max=phi_max_alt), **pressure_kwargs).magnitude
    return abs(alt - base) / base
