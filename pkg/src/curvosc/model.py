"""Model parameters, effective potential and regime classification.

The oscillator lives on the sphere for ``lam < 0`` and on the hyperbolic
plane for ``lam > 0``.  Everything here is unit-agnostic: read ``lam`` as
1/length**2, ``alpha`` as 1/time, ``J`` as length**2/time and ``E`` as
length**2/time**2 (unit mass).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DomainError

#: Relative half-width of the band around alpha**2/(2 lam) read as Limiting.
LIMITING_RTOL = 1e-12


class Regime(enum.Enum):
    BOUNDED = "Bounded"
    LIMITING = "Limiting"
    UNBOUNDED = "Unbounded"
    FORBIDDEN = "Forbidden"


@dataclass(frozen=True)
class ModelParams:
    """Curvature parameter ``lam`` (nonzero) and oscillator strength ``alpha`` (> 0)."""

    lam: float
    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.lam) or self.lam == 0.0:
            raise ValueError(f"lam must be finite and nonzero, got {self.lam!r}")
        if not math.isfinite(self.alpha) or self.alpha <= 0.0:
            raise ValueError(f"alpha must be finite and positive, got {self.alpha!r}")

    @property
    def r_max(self) -> float:
        """Upper end of the radial domain (``inf`` on the hyperbolic plane)."""
        return math.inf if self.lam > 0 else 1.0 / math.sqrt(-self.lam)

    @property
    def threshold_energy(self) -> float:
        """alpha**2/(2 lam): asymptote of the potential for lam > 0."""
        return self.alpha**2 / (2.0 * self.lam)


@dataclass(frozen=True)
class ClassicalState:
    """Polar phase-space point; ``J`` is the conserved angular momentum r**2 phi_dot."""

    r: float
    r_dot: float
    phi: float
    J: float

    @property
    def phi_dot(self) -> float:
        return self.J / self.r**2


@dataclass(frozen=True)
class MotionConstants:
    """Invariants of a classical orbit with given (J, E).

    ``qa, qb, qc`` are the coefficients of the quadratic a + b u + c u**2 in
    u = r**2 under the radial quadrature, ``delta = 4 qa qc - qb**2``.
    """

    J: float
    E: float
    C: float
    qa: float
    qb: float
    qc: float
    delta: float
    omega: float
    regime: Regime


def radial_domain(params: ModelParams) -> Tuple[float, float]:
    """Open interval of admissible radii."""
    return (0.0, params.r_max)


def _check_radius(params: ModelParams, r) -> None:
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0.0)) or np.any(~(r < params.r_max)):
        raise DomainError(f"radius outside (0, {params.r_max}) for lam={params.lam}")


def v_eff(params: ModelParams, J: float, r):
    """Effective radial potential alpha**2 r**2 / (2(1 + lam r**2)) + J**2/(2 r**2).

    Accepts scalars or arrays.
    """
    _check_radius(params, r)
    r = np.asarray(r, dtype=float)
    r2 = r * r
    out = 0.5 * params.alpha**2 * r2 / (1.0 + params.lam * r2) + 0.5 * J * J / r2
    return float(out) if out.ndim == 0 else out


def v_eff_extremum(params: ModelParams, J: float) -> Optional[Tuple[Optional[float], float]]:
    """Location and value of the minimum of :func:`v_eff`.

    Returns ``(r_min, V_min)``; ``(None, 0.0)`` for J = 0 (the infimum at the
    origin), and ``None`` on the hyperbolic plane when |J| >= alpha/lam.
    """
    lam, alpha = params.lam, params.alpha
    aj = abs(J)
    if aj == 0.0:
        return (None, 0.0)
    denom = alpha - lam * aj
    if denom <= 0.0:
        return None
    return (math.sqrt(aj / denom), 0.5 * aj * (2.0 * alpha - lam * aj))


def energy(params: ModelParams, r, r_dot, J: float):
    """Vectorised energy 1/(2(1 + lam r**2)) [r_dot**2 + alpha**2 r**2 + J**2 (1 + lam r**2)/r**2]."""
    _check_radius(params, r)
    r = np.asarray(r, dtype=float)
    r_dot = np.asarray(r_dot, dtype=float)
    r2 = r * r
    g = 1.0 + params.lam * r2
    out = 0.5 / g * (r_dot * r_dot + params.alpha**2 * r2 + J * J / r2 * g)
    return float(out) if out.ndim == 0 else out


def energy_of_state(params: ModelParams, state: ClassicalState) -> float:
    return energy(params, state.r, state.r_dot, state.J)


def classify(params: ModelParams, J: float, E: float) -> Regime:
    lam, alpha = params.lam, params.alpha
    tol = LIMITING_RTOL * max(1.0, abs(E))
    if lam > 0:
        threshold = params.threshold_energy
        if E > threshold + tol:
            return Regime.UNBOUNDED
        if abs(J) >= alpha / lam:
            # potential exceeds the threshold everywhere
            return Regime.FORBIDDEN
        if E >= threshold - tol:
            return Regime.LIMITING
    if J == 0.0:
        return Regime.BOUNDED if E > 0.0 else Regime.FORBIDDEN
    v_min = v_eff_extremum(params, J)[1]
    # E == V_min is the circular orbit
    return Regime.BOUNDED if E >= v_min - tol else Regime.FORBIDDEN


def motion_constants(params: ModelParams, J: float, E: float) -> MotionConstants:
    """Integration constant, quadratic coefficients, discriminant, frequency and regime."""
    lam, alpha = params.lam, params.alpha
    C = 2.0 * E - alpha**2 / lam
    qa = -J * J
    qb = C + alpha**2 / lam - lam * J * J
    qc = C * lam
    delta = 4.0 * qa * qc - qb * qb
    regime = classify(params, J, E)
    omega = 0.0 if regime is Regime.LIMITING else math.sqrt(abs(qc))
    return MotionConstants(J=J, E=E, C=C, qa=qa, qb=qb, qc=qc, delta=delta,
                           omega=omega, regime=regime)
