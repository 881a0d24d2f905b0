"""Cartesian solution families and their map onto polar trajectory parameters.

Trig:   x = A1 sin(w t + phi1),   y = A2 sin(w t + phi2)
Hyper:  x = A1 sinh(w t + phi1),  y = A2 sinh(w t + phi2)
Linear: x = A1 t + B1,            y = A2 t + B2

The amplitudes determine (w, J, E) through the constraint relations of the
model; :func:`bridge` then expresses the polar constants (A, B, phi, K) of
:mod:`curvosc.closed_form` in terms of them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .closed_form import (ClosedFormTrajectory, Variant, sample_polar, trajectory)
from .errors import InconsistentParametersError
from .model import ModelParams, motion_constants

# |J| below this fraction of w (A1**2 + A2**2) is treated as J = 0.
_J_ZERO_RTOL = 1e-14


class CartesianVariant(enum.Enum):
    TRIG = "Trig"
    HYPER = "Hyper"
    LINEAR = "Linear"


@dataclass(frozen=True)
class CartesianAmplitudes:
    variant: CartesianVariant
    A1: float
    A2: float
    lam: float
    phi1: float = 0.0
    phi2: float = 0.0
    B1: float = 0.0
    B2: float = 0.0

    @classmethod
    def trig(cls, A1, A2, phi1, phi2, lam):
        return cls(CartesianVariant.TRIG, A1, A2, lam, phi1=phi1, phi2=phi2)

    @classmethod
    def hyper(cls, A1, A2, phi1, phi2, lam):
        return cls(CartesianVariant.HYPER, A1, A2, lam, phi1=phi1, phi2=phi2)

    @classmethod
    def linear(cls, A1, A2, B1, B2, lam):
        return cls(CartesianVariant.LINEAR, A1, A2, lam, B1=B1, B2=B2)


@dataclass(frozen=True)
class CartesianInvariants:
    """Quantities fixed by the amplitudes.  ``M`` and ``phi12`` are None for Linear,
    where ``omega_bar`` is 0."""

    alpha: float
    omega_bar: float
    M: Optional[float]
    P: float
    J: float
    E: float
    phi12: Optional[float]


def cartesian_invariants(amps: CartesianAmplitudes, alpha: Optional[float] = None) -> CartesianInvariants:
    """Frequency, angular momentum and energy implied by ``amps``.

    For Linear motion alpha is fixed by the amplitudes (alpha**2 = lam P_L):
    pass ``None`` to derive it, or a value to have it checked.
    """
    A1, A2, lam = amps.A1, amps.A2, amps.lam
    if A1 == 0.0 and A2 == 0.0:
        raise InconsistentParametersError("A1 = A2 = 0: no motion")
    v = amps.variant
    if v is CartesianVariant.LINEAR:
        J = A2 * amps.B1 - A1 * amps.B2
        P = A1 * A1 + A2 * A2 + lam * J * J
        if lam <= 0 or P <= 0:
            raise InconsistentParametersError("linear motion needs lam > 0 and lam P_L > 0")
        a2 = lam * P
        if alpha is None:
            alpha = math.sqrt(a2)
        elif abs(alpha * alpha - a2) > 1e-12 * a2:
            raise InconsistentParametersError(f"alpha**2={alpha * alpha} but lam P_L={a2}")
        return CartesianInvariants(alpha, 0.0, None, P, J, 0.5 * P, None)

    if alpha is None or alpha <= 0:
        raise InconsistentParametersError("alpha must be positive")
    phi12 = amps.phi1 - amps.phi2
    if v is CartesianVariant.TRIG:
        sn = math.sin(phi12)
        P = A1 * A1 + A2 * A2 + lam * (A1 * A2 * sn) ** 2
        M = 1.0 + lam * P
        if P <= 0 or M <= 0:
            raise InconsistentParametersError(f"trig motion needs P_e > 0 and M > 0 (P_e={P}, M={M})")
    else:
        if lam <= 0:
            raise InconsistentParametersError("hyperbolic motion needs lam > 0")
        sn = math.sinh(phi12)
        P = A1 * A1 + A2 * A2 + lam * (A1 * A2 * sn) ** 2
        M = -1.0 + lam * P
        if M <= 0:
            raise InconsistentParametersError(f"hyperbolic motion needs lam P_h > 1 (M={M})")
    w = alpha / math.sqrt(M)
    J = w * A1 * A2 * sn
    E = 0.5 * w * w * P
    return CartesianInvariants(alpha, w, M, P, J, E, phi12)


def cartesian_motion(amps: CartesianAmplitudes, omega_bar: float, t):
    """Positions and velocities ``(x, y, vx, vy)`` of the cartesian solution."""
    t = np.asarray(t, dtype=float)
    A1, A2 = amps.A1, amps.A2
    if amps.variant is CartesianVariant.LINEAR:
        one = np.ones_like(t)
        return A1 * t + amps.B1, A2 * t + amps.B2, A1 * one, A2 * one
    a1 = omega_bar * t + amps.phi1
    a2 = omega_bar * t + amps.phi2
    if amps.variant is CartesianVariant.TRIG:
        return (A1 * np.sin(a1), A2 * np.sin(a2),
                A1 * omega_bar * np.cos(a1), A2 * omega_bar * np.cos(a2))
    return (A1 * np.sinh(a1), A2 * np.sinh(a2),
            A1 * omega_bar * np.cosh(a1), A2 * omega_bar * np.cosh(a2))


def _wrap(angle):
    return (np.asarray(angle) + math.pi) % (2 * math.pi) - math.pi


def _initial_direction(amps, inv):
    x0, y0, vx0, vy0 = (float(c) for c in cartesian_motion(amps, inv.omega_bar, 0.0))
    if math.hypot(x0, y0) > 1e-12 * math.sqrt(inv.P):
        return math.atan2(y0, x0)
    # starts at the origin (J = 0 only): follow the velocity
    return math.atan2(vy0, vx0)


def _with_branch(traj: ClosedFormTrajectory, K0: float, target: float) -> ClosedFormTrajectory:
    """Shift K0 by pi if needed so that phi(0) lands on ``target`` (mod 2 pi)."""
    probe = _replace_K(traj, K0)
    phi0 = float(sample_polar(probe, 0.0)[2])
    if abs(_wrap(target - phi0)) > 0.5 * math.pi:
        K0 += math.pi
    return _replace_K(traj, float(_wrap(K0)))


def _replace_K(traj, K):
    return replace(traj, K=K)


def _require(amps, variant):
    if amps.variant is not variant:
        raise InconsistentParametersError(f"expected {variant.value} amplitudes, got {amps.variant.value}")


def bridge_bounded(amps: CartesianAmplitudes, alpha: float) -> ClosedFormTrajectory:
    _require(amps, CartesianVariant.TRIG)
    inv = cartesian_invariants(amps, alpha)
    A1s, A2s = amps.A1**2, amps.A2**2
    p1, p2 = amps.phi1, amps.phi2
    B = 0.5 * (A1s + A2s)
    acos_ = 0.5 * (A1s * math.sin(2 * p1) + A2s * math.sin(2 * p2))
    asin_ = -0.5 * (A1s * math.cos(2 * p1) + A2s * math.cos(2 * p2))
    A = math.hypot(acos_, asin_)
    phase = math.atan2(asin_, acos_) % (2 * math.pi)
    J, w = inv.J, inv.omega_bar
    if abs(J) <= _J_ZERO_RTOL * w * (A1s + A2s):
        J = 0.0
    elif A <= 1e-14 * B:
        A, phase = 0.0, 0.0
    lam = amps.lam
    if lam < 0 and B + A >= 1.0 / -lam:
        raise InconsistentParametersError("trajectory leaves the sphere's radial domain")
    params = ModelParams(lam, alpha)
    traj = ClosedFormTrajectory(Variant.BOUNDED, A, B, w, phase, 0.0, J, inv.E, params)
    target = _initial_direction(amps, inv)
    if J == 0.0:
        return _replace_K(traj, target)
    # tan K from the t = 0 condition, multiplied through by J cos(phase/2)
    ch, sh = math.cos(0.5 * phase), math.sin(0.5 * phase)
    s1, s2 = amps.A1 * math.sin(p1), amps.A2 * math.sin(p2)
    g = w * (B * sh + A * ch)
    num = J * ch * s2 - g * s1
    den = J * ch * s1 + g * s2
    K0 = math.atan2(num, den) if (num or den) else target
    return _with_branch(traj, K0, target)


def bridge_unbounded(amps: CartesianAmplitudes, alpha: float) -> ClosedFormTrajectory:
    _require(amps, CartesianVariant.HYPER)
    inv = cartesian_invariants(amps, alpha)
    A1s, A2s = amps.A1**2, amps.A2**2
    p1, p2 = amps.phi1, amps.phi2
    B = -0.5 * (A1s + A2s)
    acosh_ = 0.5 * (A1s * math.cosh(2 * p1) + A2s * math.cosh(2 * p2))
    asinh_ = 0.5 * (A1s * math.sinh(2 * p1) + A2s * math.sinh(2 * p2))
    A = math.sqrt((acosh_ - asinh_) * (acosh_ + asinh_))
    phase = math.atanh(asinh_ / acosh_)
    J, w = inv.J, inv.omega_bar
    if abs(J) <= _J_ZERO_RTOL * w * (A1s + A2s):
        J = 0.0
    params = ModelParams(amps.lam, alpha)
    traj = ClosedFormTrajectory(Variant.UNBOUNDED, A, B, w, phase, 0.0, J, inv.E, params)
    target = _initial_direction(amps, inv)
    if J == 0.0:
        return _replace_K(traj, target)
    ch, sh = math.cosh(0.5 * phase), math.sinh(0.5 * phase)
    s1, s2 = amps.A1 * math.sinh(p1), amps.A2 * math.sinh(p2)
    g = w * (A - B) * sh
    num = J * ch * s2 - g * s1
    den = J * ch * s1 + g * s2
    K0 = math.atan2(num, den) if (num or den) else target
    return _with_branch(traj, K0, target)


def bridge_limiting(amps: CartesianAmplitudes, alpha: Optional[float] = None) -> ClosedFormTrajectory:
    _require(amps, CartesianVariant.LINEAR)
    inv = cartesian_invariants(amps, alpha)
    A1, A2, B1, B2 = amps.A1, amps.A2, amps.B1, amps.B2
    A = math.hypot(A1, A2)
    B = (A1 * B2 - A2 * B1) ** 2 / (A * A)
    phase = (A1 * B1 + A2 * B2) / A
    J = inv.J
    if abs(J) <= _J_ZERO_RTOL * A * math.hypot(B1, B2):
        J = 0.0
    params = ModelParams(amps.lam, inv.alpha)
    traj = ClosedFormTrajectory(Variant.LIMITING, A, B, 0.0, phase, 0.0, J, inv.E, params)
    target = _initial_direction(amps, inv)
    if J == 0.0:
        return _replace_K(traj, target)
    return _with_branch(traj, math.atan2(-A1, A2), target)


def bridge(amps: CartesianAmplitudes, alpha: Optional[float] = None) -> ClosedFormTrajectory:
    if amps.variant is CartesianVariant.TRIG:
        return bridge_bounded(amps, alpha)
    if amps.variant is CartesianVariant.HYPER:
        return bridge_unbounded(amps, alpha)
    return bridge_limiting(amps, alpha)


def tan_coefficient_residuals(amps: CartesianAmplitudes, alpha: float, traj: Optional[ClosedFormTrajectory] = None):
    """Relative residuals of the coefficients of 1, T, T**2 in the azimuth identity.

    T is tan(w t) (Trig) or tanh(w t) (Hyper).  Substituting the bridged K
    must make all three vanish.
    """
    if traj is None:
        traj = bridge(amps, alpha)
    if amps.variant is CartesianVariant.LINEAR:
        raise InconsistentParametersError("no tangent identity for linear motion")
    if traj.J == 0.0:
        raise InconsistentParametersError("the tangent identity divides by J; J = 0 here")
    J, w, A, B, K = traj.J, traj.omega, traj.A, traj.B, traj.K
    cK, sK = math.cos(K), math.sin(K)
    A1, A2, p1, p2 = amps.A1, amps.A2, amps.phi1, amps.phi2
    if amps.variant is CartesianVariant.TRIG:
        s1, c1, s2, c2 = math.sin(p1), math.cos(p1), math.sin(p2), math.cos(p2)
        ch, sh = math.cos(0.5 * traj.phi), math.sin(0.5 * traj.phi)
    else:
        s1, c1, s2, c2 = math.sinh(p1), math.cosh(p1), math.sinh(p2), math.cosh(p2)
        ch, sh = math.cosh(0.5 * traj.phi), math.sinh(0.5 * traj.phi)
    a0 = A2 * s2 * cK - A1 * s1 * sK
    a1 = A2 * c2 * cK - A1 * c1 * sK
    b0 = A1 * s1 * cK + A2 * s2 * sK
    b1 = A1 * c1 * cK + A2 * c2 * sK
    if amps.variant is CartesianVariant.TRIG:
        P0, P1 = B * sh + A * ch, B * ch - A * sh
        pairs = [
            (J * a0 * ch, w * b0 * P0),
            (J * (a1 * ch - a0 * sh), w * (b0 * P1 + b1 * P0)),
            (-J * a1 * sh, w * b1 * P1),
        ]
    else:
        g = w * (A - B)
        pairs = [
            (J * a0 * ch, g * b0 * sh),
            (J * (a1 * ch + a0 * sh), g * (b0 * ch + b1 * sh)),
            (J * a1 * sh, g * b1 * ch),
        ]
    scale = max(max(abs(l), abs(r)) for l, r in pairs) or 1.0
    return tuple(abs(l - r) / scale for l, r in pairs)


@dataclass(frozen=True)
class BridgeReport:
    """Agreement between a cartesian solution and its bridged polar trajectory.

    ``max_r2_dev`` is |x**2 + y**2 - r**2| / max(1, r**2); ``max_angle_dev`` the
    wrapped difference between atan2(y, x) and the polar azimuth;
    ``omega_rel_dev`` compares w_bar with sqrt|c| of the induced (J, E);
    ``param_dev`` compares (A, B) with the trajectory built from (J, E) alone.
    """

    max_r2_dev: float
    max_angle_dev: float
    omega_rel_dev: float
    param_dev: float
    n_samples: int

    def ok(self, tol: float = 1e-8, omega_tol: float = 1e-12) -> bool:
        return (self.max_r2_dev <= tol and self.max_angle_dev <= tol
                and self.param_dev <= tol and self.omega_rel_dev <= omega_tol)


def default_t_span(amps: CartesianAmplitudes, inv: CartesianInvariants):
    if amps.variant is CartesianVariant.TRIG:
        return (0.0, 2 * math.pi / inv.omega_bar)
    if amps.variant is CartesianVariant.HYPER:
        return (-3.0 / inv.omega_bar, 3.0 / inv.omega_bar)
    scale = math.hypot(amps.B1, amps.B2) / math.hypot(amps.A1, amps.A2)
    return (-5.0 * max(scale, 1.0), 5.0 * max(scale, 1.0))


def verify_bridge(amps: CartesianAmplitudes, alpha: Optional[float] = None,
                  n_samples: int = 1000, t_span=None) -> BridgeReport:
    inv = cartesian_invariants(amps, alpha)
    traj = bridge(amps, inv.alpha)
    if t_span is None:
        t_span = default_t_span(amps, inv)
    t = np.linspace(t_span[0], t_span[1], n_samples)
    x, y, _, _ = cartesian_motion(amps, inv.omega_bar, t)
    r2_cart = x * x + y * y
    r, _, phi = sample_polar(traj, t)
    r2_dev = float(np.max(np.abs(r2_cart - r * r) / np.maximum(1.0, r2_cart)))
    keep = np.sqrt(r2_cart) > 1e-6 * math.sqrt(inv.P)
    ang = np.abs(_wrap(np.arctan2(y, x) - phi))[keep]
    angle_dev = float(np.max(ang)) if ang.size else 0.0

    params = ModelParams(amps.lam, inv.alpha)
    mc = motion_constants(params, traj.J, inv.E)
    if amps.variant is CartesianVariant.LINEAR:
        omega_dev = mc.omega
    else:
        omega_dev = abs(mc.omega - inv.omega_bar) / inv.omega_bar
    direct = trajectory(params, traj.J, inv.E)
    param_dev = max(abs(direct.A - traj.A), abs(direct.B - traj.B)) / max(1.0, abs(traj.B))
    return BridgeReport(r2_dev, angle_dev, omega_dev, param_dev, n_samples)
