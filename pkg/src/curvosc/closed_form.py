"""Exact polar trajectories r**2(t), phi(t) for the three motion families.

Bounded:    r**2 = A sin(2 w t + phase) + B
Unbounded:  r**2 = A cosh(2 w t + phase) + B      (lam > 0 only)
Limiting:   r**2 = (A t + phase)**2 + B           (lam > 0, E = alpha**2/(2 lam))

For J != 0 the azimuth obeys tan(phi - K) = F(t) with a family-specific F;
we return the continuous branch with phi(0) - K in [-pi/2, pi/2].

For J = 0 the particle moves on a straight line through the origin.  We
track the signed line coordinate s(t) (r = |s|), oriented so that s(0) > 0
(or s(0) = 0 and s'(0) > 0); phi is K on the s > 0 half-line and K + pi on
the other one.  Hence phi(0) = K for every J = 0 trajectory.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import OutOfRangeError, PreconditionError
from .model import ClassicalState, ModelParams, Regime, energy_of_state, motion_constants

# Relative slack for radicands and sine/cosh arguments that should be exact.
_RADICAND_RTOL = 1e-10


class Variant(enum.Enum):
    BOUNDED = "Bounded"
    UNBOUNDED = "Unbounded"
    LIMITING = "Limiting"


@dataclass(frozen=True)
class ClosedFormTrajectory:
    """Parameters of an exact trajectory.

    In the Limiting family ``omega`` is 0, ``A`` has units of length**2/time
    and ``phi`` of length**2: the quadratic (A t + phi)**2 + B keeps the
    symbols of the other two families but not their dimensions.
    """

    variant: Variant
    A: float
    B: float
    omega: float
    phi: float
    K: float
    J: float
    E: float
    params: ModelParams

    @property
    def is_circular(self) -> bool:
        return self.variant is Variant.BOUNDED and self.A == 0.0

    def r2_range(self):
        if self.variant is Variant.BOUNDED:
            return (self.B - self.A, self.B + self.A)
        if self.variant is Variant.UNBOUNDED:
            return (self.A + self.B, math.inf)
        return (self.B, math.inf)


def _clamped_sqrt(x: float, scale: float, what: str) -> float:
    if x < 0.0:
        if x < -_RADICAND_RTOL * scale:
            raise PreconditionError(f"negative radicand in {what}: {x!r}")
        return 0.0
    return math.sqrt(x)


def bounded_trajectory(params: ModelParams, J: float, E: float,
                       phi: float = 0.0, K: float = 0.0) -> ClosedFormTrajectory:
    mc = motion_constants(params, J, E)
    if mc.regime is not Regime.BOUNDED:
        raise PreconditionError(f"(J={J}, E={E}) is {mc.regime.value}, not Bounded")
    lam, alpha = params.lam, params.alpha
    w = mc.omega
    w2 = w * w
    f1 = (alpha - lam * J) ** 2 - w2
    f2 = (alpha + lam * J) ** 2 - w2
    scale = max(abs(f1), abs(f2), w2) ** 2
    A = _clamped_sqrt(f1 * f2, scale, "bounded amplitude") / (2.0 * abs(lam) * w2)
    B = (alpha**2 - lam**2 * J * J - w2) / (2.0 * lam * w2)
    if A <= 1e-14 * B and J != 0.0:
        A, phi = 0.0, 0.0
    return ClosedFormTrajectory(Variant.BOUNDED, A, B, w, float(phi) % (2 * math.pi),
                                float(K), J, E, params)


def unbounded_trajectory(params: ModelParams, J: float, E: float,
                         phi: float = 0.0, K: float = 0.0) -> ClosedFormTrajectory:
    if params.lam <= 0:
        raise PreconditionError("unbounded motion exists only for lam > 0")
    mc = motion_constants(params, J, E)
    if mc.regime is not Regime.UNBOUNDED:
        raise PreconditionError(f"(J={J}, E={E}) is {mc.regime.value}, not Unbounded")
    lam, alpha = params.lam, params.alpha
    w = mc.omega
    w2 = w * w
    A = math.sqrt(((alpha - lam * J) ** 2 + w2) * ((alpha + lam * J) ** 2 + w2)) / (2.0 * lam * w2)
    B = -(alpha**2 - lam**2 * J * J + w2) / (2.0 * lam * w2)
    return ClosedFormTrajectory(Variant.UNBOUNDED, A, B, w, float(phi), float(K), J, E, params)


def limiting_trajectory(params: ModelParams, J: float,
                        phi: float = 0.0, K: float = 0.0) -> ClosedFormTrajectory:
    lam, alpha = params.lam, params.alpha
    if lam <= 0:
        raise PreconditionError("limiting motion exists only for lam > 0")
    rad = alpha**2 - lam**2 * J * J
    if rad <= 0.0:
        raise PreconditionError(f"|J|={abs(J)} >= alpha/lam: threshold energy unreachable")
    A = math.sqrt(rad / lam)
    B = lam * J * J / rad
    return ClosedFormTrajectory(Variant.LIMITING, A, B, 0.0, float(phi), float(K), J,
                                params.threshold_energy, params)


def trajectory(params: ModelParams, J: float, E: float,
               phi: float = 0.0, K: float = 0.0) -> ClosedFormTrajectory:
    """Dispatch on the regime of (J, E)."""
    regime = motion_constants(params, J, E).regime
    if regime is Regime.BOUNDED:
        return bounded_trajectory(params, J, E, phi, K)
    if regime is Regime.UNBOUNDED:
        return unbounded_trajectory(params, J, E, phi, K)
    if regime is Regime.LIMITING:
        return limiting_trajectory(params, J, phi, K)
    raise PreconditionError(f"(J={J}, E={E}) is a forbidden energy")


def _r2_and_rate(traj: ClosedFormTrajectory, t):
    """r**2 and d(r**2)/dt."""
    A, B, w, ph = traj.A, traj.B, traj.omega, traj.phi
    if traj.variant is Variant.BOUNDED:
        arg = 2.0 * w * t + ph
        # pericentre B - A = J**2 / (w**2 (A + B)) without cancellation
        peri = traj.J**2 / (w * w * (A + B)) if traj.J != 0.0 else 0.0
        return peri + A * (1.0 + np.sin(arg)), 2.0 * w * A * np.cos(arg)
    if traj.variant is Variant.UNBOUNDED:
        arg = 2.0 * w * t + ph
        return A * np.cosh(arg) + B, 2.0 * w * A * np.sinh(arg)
    s = A * t + ph
    return s * s + B, 2.0 * A * s


def eval_r2(traj: ClosedFormTrajectory, t):
    t = np.asarray(t, dtype=float)
    out = _r2_and_rate(traj, t)[0]
    return float(out) if out.ndim == 0 else out


def _line_coordinate_raw(traj: ClosedFormTrajectory, t):
    """Signed line coordinate s (with s**2 = r**2) for J = 0, before orientation."""
    A, w, ph = traj.A, traj.omega, traj.phi
    if traj.variant is Variant.BOUNDED:
        # r**2 = A (1 + sin(2x)) = 2A sin(x + pi/4)**2, x = w t + phase/2
        arg = w * t + 0.5 * ph + 0.25 * math.pi
        c = math.sqrt(2.0 * A)
        return c * np.sin(arg), c * w * np.cos(arg)
    if traj.variant is Variant.UNBOUNDED:
        # r**2 = A (cosh(2x) - 1) = 2A sinh(x)**2
        arg = w * t + 0.5 * ph
        c = math.sqrt(2.0 * A)
        return c * np.sinh(arg), c * w * np.cosh(arg)
    return traj.A * t + ph, traj.A * np.ones_like(t)


def _line_orientation(traj: ClosedFormTrajectory) -> float:
    s0, v0 = _line_coordinate_raw(traj, np.float64(0.0))
    scale = math.sqrt(2.0 * traj.A) if traj.variant is not Variant.LIMITING else abs(traj.A)
    # a start within round-off of the origin counts as the origin
    if abs(s0) > 1e-12 * max(scale, abs(traj.phi)):
        return math.copysign(1.0, s0)
    return math.copysign(1.0, v0)


def _bounded_angle(traj: ClosedFormTrajectory, t):
    """Continuous angle psi with tan(psi) = (w/|J|)(B tan x + A), x = w t + phase/2.

    psi is the polar angle of M (cos x, sin x) with M = [[|J|, 0], [w A, w B]];
    both eigenvalues of M are positive, so the angle between (cos x, sin x)
    and its image stays inside (-pi, pi) and needs no unwrapping.
    """
    x = traj.omega * t + 0.5 * traj.phi
    c, s = np.cos(x), np.sin(x)
    vx = abs(traj.J) * c
    vy = traj.omega * (traj.B * s + traj.A * c)
    return x + np.arctan2(c * vy - s * vx, c * vx + s * vy)


def _azimuth_offset(traj: ClosedFormTrajectory, t):
    """phi(t) - K for J != 0."""
    J = traj.J
    if traj.variant is Variant.BOUNDED:
        if traj.is_circular:
            return (J / traj.B) * t
        n0 = round(float(_bounded_angle(traj, np.float64(0.0))) / math.pi)
        return math.copysign(1.0, J) * (_bounded_angle(traj, t) - n0 * math.pi)
    if traj.variant is Variant.UNBOUNDED:
        x = traj.omega * t + 0.5 * traj.phi
        return np.arctan(traj.omega / J * (traj.A - traj.B) * np.tanh(x))
    return np.arctan(traj.A / J * (traj.A * t + traj.phi))


def sample_polar(traj: ClosedFormTrajectory, t):
    """Arrays ``(r, r_dot, phi)`` at times ``t``; phi is continuous for J != 0."""
    t = np.asarray(t, dtype=float)
    if traj.J == 0.0:
        sigma = _line_orientation(traj)
        s, v = _line_coordinate_raw(traj, t)
        s, v = sigma * s, sigma * v
        r = np.abs(s)
        r_dot = np.where(s >= 0.0, v, -v)
        phi = np.where(s >= 0.0, traj.K, traj.K + math.pi)
        return r, r_dot, phi * np.ones_like(t)
    u, du = _r2_and_rate(traj, t)
    r = np.sqrt(u)
    return r, du / (2.0 * r), traj.K + _azimuth_offset(traj, t)


def sample_cartesian(traj: ClosedFormTrajectory, t):
    r, _, phi = sample_polar(traj, t)
    return r * np.cos(phi), r * np.sin(phi)


def eval_state(traj: ClosedFormTrajectory, t: float) -> ClassicalState:
    r, r_dot, phi = sample_polar(traj, np.float64(t))
    return ClassicalState(float(r), float(r_dot), float(phi), traj.J)


def phase_from_initial(params: ModelParams, J: float, E: float, r0: float,
                       sign_of_r_dot0: float, phi0: float):
    """Phase constants ``(phi, K)`` placing the trajectory at (r0, phi0) at t = 0.

    ``sign_of_r_dot0`` selects the outgoing (> 0) or incoming (< 0) branch;
    0 is accepted at turning points.  A circular orbit reports phi = 0.
    """
    traj = trajectory(params, J, E)
    u0 = r0 * r0
    sgn = float(np.sign(sign_of_r_dot0))
    A, B = traj.A, traj.B
    if traj.variant is Variant.BOUNDED:
        if traj.is_circular:
            if abs(u0 - B) > _RADICAND_RTOL * B:
                raise OutOfRangeError(f"r0**2={u0} differs from circular r**2={B}")
            phase = 0.0
        else:
            sn = (u0 - B) / A
            if abs(sn) > 1.0 + _RADICAND_RTOL * max(1.0, B / A):
                raise OutOfRangeError(f"r0**2={u0} outside [{B - A}, {B + A}]")
            sn = min(1.0, max(-1.0, sn))
            phase = math.atan2(sn, sgn * math.sqrt(1.0 - sn * sn)) % (2 * math.pi)
    elif traj.variant is Variant.UNBOUNDED:
        ch = (u0 - B) / A
        if ch < 1.0 - _RADICAND_RTOL * max(1.0, abs(B) / A):
            raise OutOfRangeError(f"r0**2={u0} below pericentre {A + B}")
        phase = sgn * math.acosh(max(1.0, ch))
    else:
        d = u0 - B
        if d < -_RADICAND_RTOL * max(1.0, B):
            raise OutOfRangeError(f"r0**2={u0} below pericentre {B}")
        phase = sgn * math.sqrt(max(0.0, d))
    traj = replace(traj, phi=phase, K=0.0)
    K = phi0 - float(sample_polar(traj, np.float64(0.0))[2])
    return phase, K


def trajectory_from_state(params: ModelParams, state: ClassicalState) -> ClosedFormTrajectory:
    """Closed form passing through ``state`` at t = 0."""
    E = energy_of_state(params, state)
    phase, K = phase_from_initial(params, state.J, E, state.r, state.r_dot, state.phi)
    return trajectory(params, state.J, E, phase, K)
