"""Direct numerical integration of the polar equation of motion.

This is the independent oracle for :mod:`curvosc.closed_form`: it only uses
the second-order radial equation and phi_dot = J / r**2, integrated with an
adaptive explicit Runge-Kutta pair with dense output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .closed_form import ClosedFormTrajectory, Variant, sample_polar
from .errors import ContractError, DomainError, IntegrationError, PeriodDetectionError
from .model import ClassicalState, ModelParams, energy

METHOD = "DOP853"  # explicit Runge-Kutta 8(5,3) with 7th-order dense output


@dataclass(frozen=True)
class IntegrationConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    t_span: Tuple[float, float] = (0.0, 10.0)
    n_samples: int = 1001

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            tol = getattr(self, name)
            if not 0.0 < tol <= 1e-2:
                raise ValueError(f"{name} must lie in (0, 1e-2], got {tol}")
        if not self.t_span[1] > self.t_span[0]:
            raise ValueError("t_span must be increasing")
        if self.n_samples < 2:
            raise ValueError("need at least two samples")


@dataclass(frozen=True)
class SampledTrajectory:
    params: ModelParams
    J: float
    times: np.ndarray
    r: np.ndarray
    r_dot: np.ndarray
    phi: np.ndarray
    energy_drift: float
    dense: Optional[Callable] = field(default=None, repr=False, compare=False)

    @property
    def states(self):
        return [ClassicalState(float(a), float(b), float(c), self.J)
                for a, b, c in zip(self.r, self.r_dot, self.phi)]

    @property
    def x(self):
        return self.r * np.cos(self.phi)

    @property
    def y(self):
        return self.r * np.sin(self.phi)

    def r2_dense(self, t):
        """Interpolated r**2 from the integrator's continuous extension."""
        if self.dense is None:
            raise PeriodDetectionError("trajectory carries no dense output")
        return self.dense(t)


def polar_rhs(params: ModelParams, J: float, y) -> Tuple[float, float]:
    """(r_dot, r_ddot) from the radial Euler-Lagrange equation."""
    r, r_dot = y
    if not 0.0 < r < params.r_max:
        raise DomainError(f"r={r} outside the radial domain")
    lam, alpha = params.lam, params.alpha
    g = 1.0 + lam * r * r
    r_ddot = lam * r * r_dot * r_dot / g - alpha**2 * r / g + J * J * g / r**3
    return r_dot, r_ddot


def _line_rhs(params: ModelParams, y):
    """J = 0 motion along a line through the origin, in the signed coordinate s."""
    s, s_dot = y
    g = 1.0 + params.lam * s * s
    return s_dot, params.lam * s * s_dot * s_dot / g - params.alpha**2 * s / g


def integrate(params: ModelParams, J: float, state0: ClassicalState,
              config: IntegrationConfig = IntegrationConfig(),
              t_eval: Optional[Sequence[float]] = None) -> SampledTrajectory:
    """Integrate from ``state0`` at ``config.t_span[0]``.

    For J = 0 the motion is integrated along its line in a signed coordinate,
    which passes smoothly through the origin, and mapped back to (r, phi).
    Trial stages that leave the radial domain make the right-hand side NaN,
    which the step-size controller treats as a failed step and retries with
    a smaller step; ``polar_rhs`` itself is never called outside the domain.
    """
    if state0.J != J:
        raise ContractError("state0.J differs from J")
    E0 = energy(params, state0.r, state0.r_dot, J)
    if not math.isfinite(E0):
        raise IntegrationError("initial energy is not finite")
    r_max = params.r_max
    line = J == 0.0

    if line:
        def rhs(t, y):
            if abs(y[0]) >= r_max:
                return [math.nan, math.nan]
            return _line_rhs(params, y)
        y0 = [state0.r, state0.r_dot]
    else:
        def rhs(t, y):
            r = y[0]
            if not 0.0 < r < r_max:
                return [math.nan, math.nan, math.nan]
            r_dot, r_ddot = polar_rhs(params, J, (r, y[1]))
            return [r_dot, r_ddot, J / (r * r)]
        y0 = [state0.r, state0.r_dot, state0.phi]

    t0, t1 = config.t_span
    if t_eval is None:
        t_eval = np.linspace(t0, t1, config.n_samples)
    t_eval = np.asarray(t_eval, dtype=float)
    sol = solve_ivp(rhs, (t0, t1), y0, method=METHOD, t_eval=t_eval, dense_output=True,
                    rtol=config.rel_tol, atol=config.abs_tol, max_step=config.max_step)
    if sol.status != 0:
        raise IntegrationError(f"integration stopped at t={sol.t[-1] if sol.t.size else t0}: {sol.message}")

    if line:
        s, s_dot = sol.y
        r = np.abs(s)
        r_dot = np.where(s >= 0.0, s_dot, -s_dot)
        phi = np.where(s >= 0.0, state0.phi, state0.phi + math.pi)
    else:
        r, r_dot, phi = sol.y

    def r2(t, _sol=sol.sol):
        return _sol(t)[0] ** 2

    if np.any(r >= r_max):
        raise IntegrationError("trajectory left the radial domain")
    ok = r > 0.0
    E = energy(params, r[ok], r_dot[ok], J)
    drift = float(np.max(np.abs(E - E0)) / abs(E0)) if np.any(ok) else 0.0
    return SampledTrajectory(params, J, sol.t, r, r_dot, phi, drift, r2)


def integrate_backward(params: ModelParams, J: float, state0: ClassicalState,
                       config: IntegrationConfig = IntegrationConfig()) -> SampledTrajectory:
    """Integrate into the past by reflecting time: (r_dot, J) -> (-r_dot, -J).

    The returned samples are reflected back, so ``times`` run from 0 to
    -(t1 - t0) in decreasing order of physical time.
    """
    mirrored = ClassicalState(state0.r, -state0.r_dot, state0.phi, -J)
    fwd = integrate(params, -J, mirrored, config)
    return SampledTrajectory(params, J, config.t_span[0] - (fwd.times - config.t_span[0]),
                             fwd.r, -fwd.r_dot, fwd.phi, fwd.energy_drift)


@dataclass(frozen=True)
class Comparison:
    max_r2_err: float
    max_phi_err: float
    relative: bool


def compare_with_closed_form(traj: ClosedFormTrajectory, sampled: SampledTrajectory) -> Comparison:
    """Maximum deviations between a closed form and an integration of the same motion.

    Errors in r**2 are absolute for Bounded motion and relative to
    max(1, r**2) otherwise.  Azimuth errors are wrapped to (-pi, pi].
    """
    if traj.params != sampled.params or traj.J != sampled.J:
        raise ContractError("trajectory and samples describe different models or J")
    E0 = energy(sampled.params, sampled.r[0], sampled.r_dot[0], sampled.J) if sampled.r[0] > 0 else traj.E
    if abs(E0 - traj.E) > 1e-8 * max(1.0, abs(traj.E)):
        raise ContractError(f"energies differ: closed form {traj.E}, samples {E0}")
    r_c, _, phi_c = sample_polar(traj, sampled.times)
    r2_c = r_c * r_c
    diff = np.abs(sampled.r**2 - r2_c)
    relative = traj.variant is not Variant.BOUNDED
    if relative:
        diff = diff / np.maximum(1.0, r2_c)
    keep = sampled.r > 1e-6 * float(np.max(r_c))
    dphi = np.abs((sampled.phi - phi_c + math.pi) % (2 * math.pi) - math.pi)[keep]
    return Comparison(float(np.max(diff)), float(np.max(dphi)) if dphi.size else 0.0, relative)


def measure_period(sampled: SampledTrajectory) -> float:
    """Radial period from successive upward crossings of the mid-level of r**2.

    Crossings are bracketed on the samples and refined on the dense output.
    """
    u = sampled.r**2
    hi, lo = float(np.max(u)), float(np.min(u))
    if hi - lo <= 1e-9 * max(1.0, hi):
        raise PeriodDetectionError("r**2 is flat: no radial oscillation")
    level = 0.5 * (hi + lo)
    f = u - level
    idx = np.nonzero((f[:-1] < 0.0) & (f[1:] >= 0.0))[0]
    if idx.size < 2:
        raise PeriodDetectionError("fewer than two upward crossings sampled")
    t = sampled.times
    if sampled.dense is not None:
        crossings = [brentq(lambda s: sampled.dense(s) - level, t[i], t[i + 1], xtol=1e-14)
                     for i in idx]
    else:
        crossings = [t[i] - f[i] * (t[i + 1] - t[i]) / (f[i + 1] - f[i]) for i in idx]
    crossings = np.asarray(crossings)
    k = np.arange(crossings.size)
    return float(np.polyfit(k, crossings, 1)[0])
