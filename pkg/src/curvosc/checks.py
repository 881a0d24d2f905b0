"""End-to-end verification checks.

Each check returns a :class:`CheckResult`; ``curvosc verify`` and the test
suite run the same functions.  Tolerances are fixed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np
from scipy.optimize import brentq

from .cartesian import (CartesianAmplitudes, bridge, cartesian_invariants, tan_coefficient_residuals,
                        verify_bridge)
from .closed_form import eval_r2, eval_state, sample_polar, trajectory
from .errors import InconsistentParametersError
from .integrator import (IntegrationConfig, compare_with_closed_form, integrate, integrate_backward,
                         measure_period)
from .model import ClassicalState, ModelParams, Regime, classify, energy, v_eff, v_eff_extremum
from .quantum import (QuantumParams, eigenstate, energy_from_quantum_numbers, energy_level,
                      energy_levels, inner_product, level_states, n_max, node_count, norm_tail,
                      ode_residual)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


# -- oracles ---------------------------------------------------------------

def numerical_veff_minimum(params: ModelParams, J: float, n_grid: int = 4001):
    """Minimum of the effective potential without using its closed form.

    A log grid brackets the minimum; the stationary point is then solved
    from dV/dr = alpha**2 r/(1 + lam r**2)**2 - J**2/r**3 with Brent's method,
    which locates it to round-off (value-only minimisers stall near 1e-8).
    """
    lo = 1e-4
    hi = min(1e3, params.r_max * (1 - 1e-9))
    r = np.geomspace(lo, hi, n_grid)
    v = v_eff(params, J, r)
    i = int(np.argmin(v))
    if i == 0 or i == n_grid - 1:
        return None

    def dv(x):
        return params.alpha**2 * x / (1 + params.lam * x * x) ** 2 - J * J / x**3
    r_star = brentq(dv, r[i - 1], r[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return r_star, v_eff(params, J, r_star)


def random_trig(rng: np.random.Generator):
    while True:
        lam = rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 2.0)
        A1, A2 = rng.uniform(0.2, 1.2, size=2)
        p1, p2 = rng.uniform(0, 2 * math.pi, size=2)
        alpha = rng.uniform(0.5, 3.0)
        amps = CartesianAmplitudes.trig(A1, A2, p1, p2, lam)
        try:
            cartesian_invariants(amps, alpha)
            if lam < 0:
                bridge(amps, alpha)
        except InconsistentParametersError:
            continue
        return amps, alpha


def random_hyper(rng: np.random.Generator):
    while True:
        lam = rng.uniform(0.2, 2.0)
        A1, A2 = rng.uniform(0.2, 1.5, size=2)
        p1, p2 = rng.uniform(-1.0, 1.0, size=2)
        alpha = rng.uniform(0.5, 3.0)
        amps = CartesianAmplitudes.hyper(A1, A2, p1, p2, lam)
        try:
            if cartesian_invariants(amps, alpha).M < 0.05:
                continue
        except InconsistentParametersError:
            continue
        return amps, alpha


def random_linear(rng: np.random.Generator):
    while True:
        lam = rng.uniform(0.2, 2.0)
        A1, A2, B1, B2 = rng.uniform(-1.0, 1.0, size=4)
        if math.hypot(A1, A2) < 0.2:
            continue
        return CartesianAmplitudes.linear(A1, A2, B1, B2, lam), None


# -- acceptance criteria ---------------------------------------------------

def check_veff_minima(seed: int = 0) -> CheckResult:
    worst = 0.0
    for lam, alpha, J, expect in [(1.0, 3.0, 1.0, (math.sqrt(0.5), 2.5)),
                                  (-1.0, 2.0, 1.0, (1 / math.sqrt(3), 2.5))]:
        p = ModelParams(lam, alpha)
        closed = v_eff_extremum(p, J)
        num = numerical_veff_minimum(p, J)
        worst = max(worst, abs(closed[0] - num[0]), abs(closed[1] - num[1]),
                    abs(closed[0] - expect[0]), abs(closed[1] - expect[1]))
    return CheckResult("1 effective-potential minima", worst <= 1e-9, f"max deviation {worst:.3e} (tol 1e-9)")


def check_bounded_cutoff(seed: int = 0) -> CheckResult:
    p = ModelParams(1.0, 3.0)
    energies = np.linspace(-2.0, 12.0, 14001)
    leaks = [J for J in (3.0, -3.0, 3.5, 5.0, 10.0)
             if any(classify(p, J, E) is Regime.BOUNDED for E in energies)]
    band = [E for E in energies if classify(p, 1.0, E) is Regime.BOUNDED]
    inside = [E for E in energies if 2.5 < E < 4.5]
    band_ok = (bool(band) and min(band) >= 2.5 - 1e-12 and max(band) < 4.5
               and all(classify(p, 1.0, E) is Regime.BOUNDED for E in inside))
    ok = not leaks and band_ok
    detail = f"|J|>=3 bounded leaks: {leaks}; J=1 band [{min(band):.4f}, {max(band):.4f}]"
    return CheckResult("2 bounded-motion cutoff", ok, detail)


CLOSED_VS_ODE_CASES = [((1.0, 3.0, 1.0, 3.0), 10.0), ((-1.0, 2.0, 1.0, 3.0), 10.0), ((1.0, 3.0, 1.0, 6.0), 3.0)]


def check_closed_vs_integrator(seed: int = 0) -> CheckResult:
    parts, ok = [], True
    for (lam, alpha, J, E), t1 in CLOSED_VS_ODE_CASES:
        p = ModelParams(lam, alpha)
        traj = trajectory(p, J, E)
        s = integrate(p, J, eval_state(traj, 0.0), IntegrationConfig(1e-10, 1e-12, t_span=(0.0, t1)))
        cmp = compare_with_closed_form(traj, s)
        ok &= cmp.max_r2_err <= 1e-6 and s.energy_drift <= 1e-8
        parts.append(f"({lam:g},{alpha:g},{J:g},{E:g}): r2 err {cmp.max_r2_err:.2e}, drift {s.energy_drift:.2e}")
    return CheckResult("3 closed form vs integrator", ok, "; ".join(parts) + " (tol 1e-6 / 1e-8)")


def check_period_law(seed: int = 0) -> CheckResult:
    worst = 0.0
    for lam, alpha, J, E in [(1.0, 3.0, 1.0, 3.0), (-1.0, 2.0, 1.0, 3.0)]:
        p = ModelParams(lam, alpha)
        traj = trajectory(p, J, E)
        s = integrate(p, J, eval_state(traj, 0.0), IntegrationConfig(t_span=(0.0, 10.0), n_samples=4001))
        T = measure_period(s)
        worst = max(worst, abs(T - math.pi / traj.omega) / (math.pi / traj.omega))
    return CheckResult("4 period law", worst <= 1e-4, f"max relative deviation {worst:.3e} (tol 1e-4)")


def check_circular_orbit(seed: int = 0) -> CheckResult:
    tr = bridge(CartesianAmplitudes.trig(1.0, 1.0, math.pi / 2, 0.0, 1.0), 3.0)
    p = ModelParams(1.0, 3.0)
    s = integrate(p, 1.5, ClassicalState(1.0, 0.0, 0.0, 1.5), IntegrationConfig(t_span=(0.0, 20.0)))
    drift = float(np.max(np.abs(s.r - 1.0)))
    ok = abs(tr.A) <= 1e-12 and abs(tr.B - 1.0) <= 1e-12 and drift <= 1e-10
    return CheckResult("5 circular orbit", ok, f"A={tr.A:.3e}, B-1={tr.B - 1:.3e}, max|r-1|={drift:.3e}")


def check_bridge_equivalence(seed: int = 0, n_random: int = 100) -> CheckResult:
    rng = np.random.default_rng(seed)
    cases = [(CartesianAmplitudes.trig(2.0, 1.0, math.pi / 2, 0.0, 1.0), math.sqrt(10.0))]
    makers = [random_trig, random_hyper, random_linear]
    cases += [makers[i % 3](rng) for i in range(n_random)]
    worst_geo = worst_omega = 0.0
    failures = 0
    for amps, alpha in cases:
        rep = verify_bridge(amps, alpha, n_samples=1000)
        worst_geo = max(worst_geo, rep.max_r2_dev, rep.max_angle_dev, rep.param_dev)
        worst_omega = max(worst_omega, rep.omega_rel_dev)
        failures += not rep.ok(1e-8, 1e-12)
    return CheckResult("6 bridge equivalence", failures == 0,
                       f"{len(cases)} cases, {failures} failing; max geometric dev {worst_geo:.2e}, "
                       f"max |w - w_bar|/w_bar {worst_omega:.2e}")


def _admissible_states(qp: QuantumParams, n_top: int = 6):
    nm = n_max(qp)
    top = n_top if nm is None else min(n_top, nm)
    return [(nr, m) for n in range(top + 1) for nr, m in level_states(n)]


def residual_grid(qp: QuantumParams, n_points: int = 200):
    if qp.lam < 0:
        return np.geomspace(1e-3, 1 - 1e-3, n_points) * qp.r_max
    return np.geomspace(1e-3, 1e2, n_points) / math.sqrt(qp.lam)


def check_quantum_residuals(seed: int = 0) -> CheckResult:
    worst, count = 0.0, 0
    for qp in (QuantumParams(-1.0, 1.0), QuantumParams(1.0, 5.2)):
        r = residual_grid(qp)
        for nr, m in _admissible_states(qp):
            worst = max(worst, float(np.max(np.abs(ode_residual(qp, eigenstate(qp, nr, m), r)))))
            count += 1
    return CheckResult("7 quantum residuals", worst <= 1e-8, f"{count} states, max scaled residual {worst:.2e} (tol 1e-8)")


def check_spectrum_structure(seed: int = 0) -> CheckResult:
    problems = []
    for qp in (QuantumParams(-1.0, 1.0), QuantumParams(1.0, 5.2)):
        for lev in energy_levels(qp, count=7):
            if lev.degeneracy != lev.n + 1 or lev.E != energy_level(qp, lev.n):
                problems.append(f"level {lev.n}")
            # the alternate (n_r, |m|) form agrees to round-off only
            alt = [energy_from_quantum_numbers(qp, nr, m) for nr, m in lev.states]
            if any(abs(e - lev.E) > 1e-12 * max(1.0, abs(lev.E)) for e in alt):
                problems.append(f"partition {lev.n}")
        for nr, m in _admissible_states(qp):
            if eigenstate(qp, nr, m).E != energy_level(qp, 2 * nr + abs(m)):
                problems.append(f"energy ({nr},{m})")
            if node_count(qp, nr, m) != nr:
                problems.append(f"nodes ({nr},{m})")
    nm = n_max(QuantumParams(1.0, 5.2))
    if nm != 4:
        problems.append(f"n_max={nm}")
    return CheckResult("8 spectrum structure", not problems,
                       f"n_max(lam=1, beta=5.2)={nm}; problems: {problems or 'none'}")


GRAM_CASES = [QuantumParams(-1.0, 1.0), QuantumParams(1.0, 9.9)]


def gram_matrix(qp: QuantumParams, m: int, size: int = 5) -> np.ndarray:
    states = [eigenstate(qp, nr, m) for nr in range(size)]
    return np.array([[inner_product(qp, a, b) for b in states] for a in states])


def check_orthonormality(seed: int = 0) -> CheckResult:
    worst = 0.0
    for qp in GRAM_CASES:
        for m in (0, 1):
            worst = max(worst, float(np.max(np.abs(gram_matrix(qp, m) - np.eye(5)))))
    return CheckResult("9 orthonormality", worst <= 1e-8, f"max |G - I| {worst:.2e} (tol 1e-8)")


def check_flat_limit(seed: int = 0) -> CheckResult:
    worst = 0.0
    for lam in (1e-6, -1e-6):
        qp = QuantumParams(lam, 2.0)
        for n in range(7):
            worst = max(worst, abs(energy_level(qp, n) - (n + 1) * 2.0))
    return CheckResult("10 flat limit", worst <= 1e-4, f"max |E_n - 2(n+1)| {worst:.2e} (tol 1e-4)")


ALL_CHECKS: List[Callable[[int], CheckResult]] = [
    check_veff_minima, check_bounded_cutoff, check_closed_vs_integrator, check_period_law,
    check_circular_orbit, check_bridge_equivalence, check_quantum_residuals,
    check_spectrum_structure, check_orthonormality, check_flat_limit,
]


# -- module property suite (seeded) ---------------------------------------

def property_energy_identity(seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        lam = float(rng.choice([-1, 1]) * rng.uniform(0.05, 3.0))
        p = ModelParams(lam, float(rng.uniform(0.1, 5.0)))
        J = float(rng.uniform(-3, 3))
        r = rng.uniform(0.01, 0.999, 500) * (p.r_max if lam < 0 else 10.0)
        r_dot = rng.uniform(-5, 5, 500)
        E1 = energy(p, r, r_dot, J)
        E2 = 0.5 * r_dot**2 / (1 + lam * r**2) + v_eff(p, J, r)
        worst = max(worst, float(np.max(np.abs(E1 - E2) / np.spacing(E1))))
    return CheckResult("energy identity", worst <= 4, f"max {worst:.1f} ulp (tol 4)")


def property_extremum(seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(200):
        lam = float(rng.choice([-1, 1]) * rng.uniform(0.1, 2.0))
        alpha = float(rng.uniform(0.5, 5.0))
        cap = 0.9 * alpha / lam if lam > 0 else 5.0
        J = float(rng.uniform(0.05, min(cap, 5.0)))
        p = ModelParams(lam, alpha)
        r_c, v_c = v_eff_extremum(p, J)
        r_n, v_n = numerical_veff_minimum(p, J)
        worst = max(worst, abs(r_c - r_n), abs(v_c - v_n))
    return CheckResult("extremum vs minimisation", worst <= 1e-9, f"max deviation {worst:.2e} (tol 1e-9)")


def property_closed_form(seed: int = 0) -> CheckResult:
    """Turning points, period and azimuth law of random bounded trajectories."""
    rng = np.random.default_rng(seed)
    worst_turn = worst_period = worst_az = 0.0
    for _ in range(50):
        lam = float(rng.choice([-1, 1]) * rng.uniform(0.2, 2.0))
        alpha = float(rng.uniform(0.5, 4.0))
        p = ModelParams(lam, alpha)
        J = float(rng.uniform(0.1, 0.9 * alpha / lam if lam > 0 else 3.0))
        v_min = v_eff_extremum(p, J)[1]
        top = p.threshold_energy if lam > 0 else v_min + 15.0
        E = v_min + float(rng.uniform(0.05, 0.95)) * (top - v_min)
        tr = trajectory(p, J, E, float(rng.uniform(0, 2 * math.pi)))
        for u in (tr.B - tr.A, tr.B + tr.A):
            worst_turn = max(worst_turn, abs(v_eff(p, J, math.sqrt(u)) - E) / E)
        t = rng.uniform(-20, 20, 100)
        worst_period = max(worst_period, float(np.max(np.abs(
            eval_r2(tr, t + math.pi / tr.omega) - eval_r2(tr, t)))) / (tr.A + tr.B))
        h = 1e-5
        tt = np.linspace(-2, 2, 41)
        dphi = (sample_polar(tr, tt + h)[2] - sample_polar(tr, tt - h)[2]) / (2 * h)
        worst_az = max(worst_az, float(np.max(np.abs(dphi - J / eval_r2(tr, tt)))) / max(1.0, J / (tr.B - tr.A)))
    ok = worst_turn <= 1e-10 and worst_period <= 1e-12 and worst_az <= 1e-6
    return CheckResult("closed-form invariants", ok,
                       f"turning {worst_turn:.1e}, period {worst_period:.1e}, azimuth law {worst_az:.1e}")


def property_time_reversal(seed: int = 0) -> CheckResult:
    worst = 0.0
    for p, J, E in [(ModelParams(1.0, 3.0), 1.0, 3.0), (ModelParams(-1.0, 2.0), 1.0, 3.0),
                    (ModelParams(1.0, 3.0), 1.0, 6.0), (ModelParams(1.0, 3.0), 0.0, 2.0)]:
        s0 = eval_state(trajectory(p, J, E, 1.3), 0.0)
        fwd = integrate(p, J, s0, IntegrationConfig(t_span=(0.0, 3.0)))
        back = integrate_backward(p, J, fwd.states[-1], IntegrationConfig(t_span=(0.0, 3.0)))
        worst = max(worst, abs(back.r[-1] - s0.r), abs(back.r_dot[-1] - s0.r_dot))
    return CheckResult("time reversal", worst <= 1e-8, f"max state error {worst:.2e} (tol 1e-8)")


def property_tan_coefficients(seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(50):
        amps, alpha = (random_trig if i % 2 else random_hyper)(rng)
        worst = max(worst, *tan_coefficient_residuals(amps, alpha))
    return CheckResult("tan-coefficient collapse", worst <= 1e-10, f"max residual {worst:.2e} (tol 1e-10)")


def property_truncation(seed: int = 0) -> CheckResult:
    bad = []
    for ratio in (2.6, 5.2, 9.9):
        qp = QuantumParams(1.0, ratio)
        nm = n_max(qp)
        if not ratio - 1.5 <= nm < ratio - 0.5:
            bad.append(f"n_max({ratio})={nm}")
        tails = [norm_tail(qp, 0, nm + 1, 10.0**k, 10.0 ** (k + 2)) for k in (2, 4)]
        if not tails[1] > tails[0]:
            bad.append(f"tail converges above cutoff at {ratio}")
    return CheckResult("hyperbolic truncation", not bad, f"problems: {bad or 'none'}")


PROPERTY_CHECKS: List[Callable[[int], CheckResult]] = [
    property_energy_identity, property_extremum, property_closed_form, property_time_reversal,
    property_tan_coefficients, property_truncation,
]


def run_all(seed: int = 0, properties: bool = False) -> List[CheckResult]:
    """Acceptance criteria, optionally followed by the module property suite."""
    checks = ALL_CHECKS + (PROPERTY_CHECKS if properties else [])
    return [check(seed) for check in checks]
