"""Bound states of the quantum oscillator on the sphere and the hyperbolic plane.

With hbar = 1 and potential coupling alpha**2 = beta (beta + lam), the
separated states are

    Psi(r, phi) = R(r) exp(i m phi) / sqrt(2 pi),
    R(r) = (1 + lam r**2)**(-beta/(2 lam)) r**|m| P_{n_r}^(|m|, -beta/lam - 1/2)(1 + 2 lam r**2),
    E_n  = (n + 1)(beta - lam n / 2),   n = 2 n_r + |m|.

Radial functions are normalised under the measure (1 + lam r**2)**(-1/2) r dr.
For lam > 0 only n < beta/lam - 1/2 is normalisable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import quad

from .errors import QuadratureError, TruncationError
from .jacobi import jacobi_derivative, jacobi_eval, jacobi_scaled

QUAD_EPSREL = 1e-12
QUAD_EPSABS = 1e-14


@dataclass(frozen=True)
class QuantumParams:
    lam: float
    beta: float

    def __post_init__(self):
        if not math.isfinite(self.lam) or self.lam == 0.0:
            raise ValueError("lam must be finite and nonzero")
        if not math.isfinite(self.beta) or self.beta <= 0.0:
            raise ValueError("beta must be finite and positive")

    @property
    def alpha2(self) -> float:
        """Coupling alpha**2 = beta (beta + lam) of the potential."""
        return self.beta * (self.beta + self.lam)

    @property
    def r_max(self) -> float:
        return math.inf if self.lam > 0 else 1.0 / math.sqrt(-self.lam)


@dataclass(frozen=True)
class RadialEigenstate:
    n_r: int
    m: int
    a: float
    b: float
    n: int
    E: float
    norm: float


@dataclass(frozen=True)
class Level:
    n: int
    E: float
    degeneracy: int
    states: Tuple[Tuple[int, int], ...]


def jacobi_parameters(qp: QuantumParams, m: int) -> Tuple[float, float]:
    return float(abs(m)), -qp.beta / qp.lam - 0.5


def energy_level(qp: QuantumParams, n: int) -> float:
    return (n + 1) * (-0.5 * qp.lam * n + qp.beta)


def energy_from_quantum_numbers(qp: QuantumParams, n_r: int, m: int) -> float:
    """Eigenvalue written in (n_r, |m|); algebraically equal to energy_level(2 n_r + |m|)."""
    lam, beta, am = qp.lam, qp.beta, abs(m)
    return -n_r * (2 * lam * (n_r + 1) + (2 * am - 1) * lam - 2 * beta) + (am + 1) * (beta - 0.5 * lam * am)


def n_max(qp: QuantumParams) -> Optional[int]:
    """Largest admissible n for lam > 0 (-1 if there are no bound states); None for lam < 0.

    The admissible n satisfy n < beta/lam - 1/2 strictly.
    """
    if qp.lam < 0:
        return None
    x = qp.beta / qp.lam
    return max(-1, math.ceil(x - 1.5))


def is_admissible(qp: QuantumParams, n_r: int, m: int) -> bool:
    if n_r < 0:
        return False
    nm = n_max(qp)
    return nm is None or 2 * n_r + abs(m) <= nm


def level_states(n: int) -> Tuple[Tuple[int, int], ...]:
    """All (n_r, m) with 2 n_r + |m| = n."""
    out = []
    for n_r in range(n // 2, -1, -1):
        am = n - 2 * n_r
        out.append((n_r, am))
        if am:
            out.append((n_r, -am))
    return tuple(out)


def energy_levels(qp: QuantumParams, count: Optional[int] = None) -> List[Level]:
    """Ordered bound levels.  ``count`` is required for lam < 0 (infinite ladder)
    and optionally caps the finite lam > 0 spectrum."""
    nm = n_max(qp)
    if nm is None:
        if count is None:
            raise ValueError("lam < 0 has infinitely many levels: pass count")
        top = count - 1
    else:
        top = nm if count is None else min(nm, count - 1)
    levels = []
    for n in range(top + 1):
        states = level_states(n)
        levels.append(Level(n, energy_level(qp, n), len(states), states))
    return levels


def _radial_parts(qp: QuantumParams, n_r: int, m: int, r, derivatives: bool = False):
    """Unnormalised R (and R', R'') at radii ``r``; no admissibility check."""
    lam, beta = qp.lam, qp.beta
    a, b = jacobi_parameters(qp, m)
    am = abs(m)
    r = np.asarray(r, dtype=float)
    r2 = r * r
    g = 1.0 + lam * r2
    w = np.exp(-beta / (2.0 * lam) * np.log1p(lam * r2))
    q = r**am
    t = 1.0 + 2.0 * lam * r2
    P = jacobi_eval(n_r, a, b, t)
    R = w * q * P
    if not derivatives:
        return R
    Pt = jacobi_derivative(n_r, a, b, t, 1)
    Ptt = jacobi_derivative(n_r, a, b, t, 2)
    dt = 4.0 * lam * r
    P1 = Pt * dt
    P2 = Ptt * dt * dt + Pt * 4.0 * lam
    lw1 = -beta * r / g                                  # w'/w
    lw2 = (-beta * (1.0 - lam * r2) + beta**2 * r2) / g**2  # w''/w
    lq1 = am / r
    lq2 = am * (am - 1) / r2
    R1 = w * q * ((lw1 + lq1) * P + P1)
    R2 = w * q * ((lw2 + 2.0 * lw1 * lq1 + lq2) * P + 2.0 * (lw1 + lq1) * P1 + P2)
    return R, R1, R2


def _overlap(qp: QuantumParams, n_r1: int, n_r2: int, m: int) -> float:
    """Integral of R1 R2 (1 + lam r**2)**(-1/2) r dr for unnormalised radial functions.

    lam < 0 uses t = 1 + 2 lam r**2 on [-1, 1]; lam > 0 uses u = lam r**2/(1 + lam r**2)
    on [0, 1].  In both cases the endpoint powers are handed to the
    algebraic-weight rule so the integrand left over is a polynomial.
    """
    lam, beta = qp.lam, qp.beta
    a, b = jacobi_parameters(qp, m)
    am = abs(m)
    if lam < 0:
        L = -lam
        coef = 2.0 ** (-b) * (2.0 * L) ** (-am) / (4.0 * L)

        def f(t):
            return coef * jacobi_eval(n_r1, a, b, t) * jacobi_eval(n_r2, a, b, t)
        lo, hi, wvar = -1.0, 1.0, (b, float(am))
    else:
        expo = beta / lam - am - 1.5 - n_r1 - n_r2
        if expo <= -1.0:
            raise QuadratureError(f"overlap integral diverges (endpoint power {expo})")
        coef = lam ** (-am) / (2.0 * lam)

        def f(u):
            return coef * (jacobi_scaled(n_r1, a, b, 1.0 + u, 1.0 - u)
                           * jacobi_scaled(n_r2, a, b, 1.0 + u, 1.0 - u))
        lo, hi, wvar = 0.0, 1.0, (float(am), expo)
    val, err, info = quad(f, lo, hi, weight="alg", wvar=wvar, epsabs=QUAD_EPSABS,
                          epsrel=QUAD_EPSREL, limit=200, full_output=True)[:3]
    if err > 1e-10 * max(1.0, abs(val)):
        raise QuadratureError(f"overlap quadrature missed its target (error {err})", val, err)
    return float(val)


def eigenstate(qp: QuantumParams, n_r: int, m: int) -> RadialEigenstate:
    if not is_admissible(qp, n_r, m):
        raise TruncationError(f"(n_r={n_r}, m={m}) is not a bound state for beta/lam={qp.beta / qp.lam}")
    a, b = jacobi_parameters(qp, m)
    n = 2 * n_r + abs(m)
    norm = 1.0 / math.sqrt(_overlap(qp, n_r, n_r, m))
    return RadialEigenstate(n_r, m, a, b, n, energy_level(qp, n), norm)


def radial_wavefunction(qp: QuantumParams, n_r: int, m: int):
    """Unnormalised evaluator r -> R_{n_r,|m|}(r), positive as r -> 0."""
    if not is_admissible(qp, n_r, m):
        raise TruncationError(f"(n_r={n_r}, m={m}) is not a bound state for beta/lam={qp.beta / qp.lam}")

    def R(r):
        out = _radial_parts(qp, n_r, m, r)
        return float(out) if np.ndim(out) == 0 else out
    return R


def normalized_radial(qp: QuantumParams, state: RadialEigenstate, r):
    out = state.norm * _radial_parts(qp, state.n_r, state.m, r)
    return float(out) if np.ndim(out) == 0 else out


def ode_residual(qp: QuantumParams, state: RadialEigenstate, r, E: Optional[float] = None):
    """Scaled residual of the radial equation

        r**2 (1 + lam r**2) R'' + r (1 + 2 lam r**2) R' + (-alpha**2 r**4/(1 + lam r**2) + 2 E r**2 - m**2) R

    for the normalised radial function, divided by max(1, |R| r**2).  ``E``
    defaults to the state's eigenvalue.
    """
    if E is None:
        E = state.E
    lam = qp.lam
    r = np.asarray(r, dtype=float)
    R, R1, R2 = (state.norm * x for x in _radial_parts(qp, state.n_r, state.m, r, derivatives=True))
    r2 = r * r
    g = 1.0 + lam * r2
    res = (r2 * g * R2 + r * (1.0 + 2.0 * lam * r2) * R1
           + (-qp.alpha2 * r2 * r2 / g + 2.0 * E * r2 - state.m**2) * R)
    out = res / np.maximum(1.0, np.abs(R) * r2)
    return float(out) if out.ndim == 0 else out


def inner_product(qp: QuantumParams, s1: RadialEigenstate, s2: RadialEigenstate) -> float:
    if abs(s1.m) != abs(s2.m):
        raise ValueError("radial inner products are taken at fixed |m|")
    return s1.norm * s2.norm * _overlap(qp, s1.n_r, s2.n_r, s1.m)


def full_wavefunction(qp: QuantumParams, state: RadialEigenstate):
    """Evaluator (r, phi) -> R(r) exp(i m phi) / sqrt(2 pi)."""
    def psi(r, phi):
        R = state.norm * _radial_parts(qp, state.n_r, state.m, r)
        out = R * np.exp(1j * state.m * np.asarray(phi, dtype=float)) / math.sqrt(2 * math.pi)
        return complex(out) if np.ndim(out) == 0 else out
    return psi


def node_count(qp: QuantumParams, n_r: int, m: int, n_grid: int = 10_000) -> int:
    """Sign changes of the radial function on an interior grid covering the whole domain."""
    a, b = jacobi_parameters(qp, m)
    u = (np.arange(1, n_grid + 1) - 0.5) / n_grid
    if qp.lam < 0:
        # r uniform on (0, r_max); only the Jacobi factor can change sign
        t = 1.0 + 2.0 * qp.lam * (u * qp.r_max) ** 2
        vals = jacobi_eval(n_r, a, b, t)
    else:
        # u = lam r**2 / (1 + lam r**2) uniform on (0, 1)
        vals = jacobi_scaled(n_r, a, b, 1.0 + u, 1.0 - u)
    s = np.sign(vals)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def norm_tail(qp: QuantumParams, n_r: int, m: int, r_lo: float, r_hi: float) -> float:
    """Integral of R**2 (1 + lam r**2)**(-1/2) r dr over [r_lo, r_hi], ignoring the cutoff.

    Used to exhibit divergence of the norm above n_max on the hyperbolic plane.
    """
    def f(x):
        r = math.exp(x)
        R = _radial_parts(qp, n_r, m, r)
        return float(R * R / math.sqrt(1.0 + qp.lam * r * r) * r * r)
    val = quad(f, math.log(r_lo), math.log(r_hi), epsrel=1e-10, limit=400)[0]
    return float(val)
