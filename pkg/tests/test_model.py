import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from curvosc import (DomainError, ModelParams, Regime, ClassicalState, classify, energy,
                     energy_of_state, motion_constants, radial_domain, v_eff, v_eff_extremum)
from curvosc.checks import numerical_veff_minimum

from conftest import SQRT3, SQRT10


lam_st = st.floats(0.1, 2.0).flatmap(lambda m: st.sampled_from([m, -m]))
alpha_st = st.floats(0.5, 5.0)


class TestParams:
    def test_domain_of_sphere(self, spherical):
        assert radial_domain(spherical) == (0.0, 1.0)
        assert spherical.r_max == 1.0

    def test_domain_of_hyperbolic_plane(self, hyperbolic):
        assert radial_domain(hyperbolic) == (0.0, math.inf)
        assert hyperbolic.threshold_energy == 4.5

    @pytest.mark.parametrize("lam,alpha", [(0.0, 1.0), (1.0, 0.0), (1.0, -2.0), (math.nan, 1.0), (1.0, math.inf)])
    def test_rejects_invalid(self, lam, alpha):
        with pytest.raises(ValueError):
            ModelParams(lam, alpha)


class TestEffectivePotential:
    def test_values(self, hyperbolic, spherical):
        assert v_eff(hyperbolic, 1.0, math.sqrt(0.5)) == pytest.approx(2.5, rel=1e-15)
        assert v_eff(spherical, 1.0, 1 / SQRT3) == pytest.approx(2.5, rel=1e-15)
        assert v_eff(hyperbolic, 0.0, 1e-8) == pytest.approx(0.0, abs=1e-15)

    def test_vectorised(self, hyperbolic):
        r = np.linspace(0.1, 3.0, 7)
        np.testing.assert_allclose(v_eff(hyperbolic, 1.0, r), [v_eff(hyperbolic, 1.0, x) for x in r], rtol=0)

    @pytest.mark.parametrize("r", [0.0, -0.5, 1.0, 1.5])
    def test_outside_sphere_domain(self, spherical, r):
        with pytest.raises(DomainError):
            v_eff(spherical, 1.0, r)

    def test_array_with_bad_entry(self, spherical):
        with pytest.raises(DomainError):
            v_eff(spherical, 1.0, np.array([0.5, 1.2]))

    @given(lam=st.floats(0.1, 2.0), alpha=st.floats(1.0, 5.0), J=st.floats(-1, 1))
    def test_hyperbolic_asymptote(self, lam, alpha, J):
        p = ModelParams(lam, alpha)
        r = 1e3 / math.sqrt(lam)
        assert v_eff(p, J, r) == pytest.approx(alpha**2 / (2 * lam), rel=1e-5)

    @given(lam=st.floats(0.1, 3.0), alpha=alpha_st, J=st.floats(0.05, 3))
    def test_sphere_wall_divergence(self, lam, alpha, J):
        p = ModelParams(-lam, alpha)
        r_min, _ = v_eff_extremum(p, J)
        r = np.linspace(r_min, p.r_max, 2002)[1:-1]
        v = v_eff(p, J, r)
        assert np.all(np.diff(v) > 0)
        assert v_eff(p, J, p.r_max * (1 - 1e-9)) > 1e6 * max(1.0, v[0])


class TestExtremum:
    def test_hyperbolic_example(self, hyperbolic):
        r_min, v_min = v_eff_extremum(hyperbolic, 1.0)
        assert r_min == pytest.approx(math.sqrt(0.5), abs=1e-15)
        assert v_min == 2.5

    def test_sphere_example(self, spherical):
        r_min, v_min = v_eff_extremum(spherical, 1.0)
        assert r_min == pytest.approx(1 / SQRT3, abs=1e-15)
        assert v_min == 2.5

    def test_zero_J(self, hyperbolic):
        assert v_eff_extremum(hyperbolic, 0.0) == (None, 0.0)

    @pytest.mark.parametrize("J", [3.0, -3.0, 4.0])
    def test_no_minimum_at_large_J(self, hyperbolic, J):
        assert v_eff_extremum(hyperbolic, J) is None

    def test_signed_J(self, hyperbolic):
        assert v_eff_extremum(hyperbolic, -1.3) == v_eff_extremum(hyperbolic, 1.3)

    def test_against_minimisation_thousand_draws(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(1000):
            lam = rng.choice([-1, 1]) * rng.uniform(0.1, 2.0)
            alpha = rng.uniform(0.5, 5.0)
            J_cap = 0.9 * alpha / lam if lam > 0 else 5.0
            J = rng.choice([-1, 1]) * rng.uniform(0.05, min(J_cap, 5.0))
            p = ModelParams(lam, alpha)
            r_c, v_c = v_eff_extremum(p, J)
            r_n, v_n = numerical_veff_minimum(p, J)
            worst = max(worst, abs(r_c - r_n), abs(v_c - v_n))
        assert worst <= 1e-9


class TestEnergy:
    def test_identity_with_effective_potential(self):
        # bracket form of E vs kinetic part + v_eff: 100 models x 1000 states
        rng = np.random.default_rng(11)
        worst = 0.0
        for _ in range(100):
            lam = float(rng.choice([-1, 1]) * rng.uniform(0.05, 3.0))
            p = ModelParams(lam, float(rng.uniform(0.1, 5.0)))
            J = float(rng.uniform(-3, 3))
            r_top = p.r_max if lam < 0 else 10.0
            r = rng.uniform(0.01, 0.999, 1000) * r_top
            r_dot = rng.uniform(-5, 5, 1000)
            E1 = energy(p, r, r_dot, J)
            E2 = 0.5 * r_dot**2 / (1 + lam * r**2) + v_eff(p, J, r)
            worst = max(worst, float(np.max(np.abs(E1 - E2) / np.spacing(E1))))
        assert worst <= 4

    def test_state_energy(self, hyperbolic):
        s = ClassicalState(1.0, 0.5, 0.3, 1.5)
        assert energy_of_state(hyperbolic, s) == energy(hyperbolic, 1.0, 0.5, 1.5)
        assert s.phi_dot == 1.5

    def test_domain(self, spherical):
        with pytest.raises(DomainError):
            energy(spherical, 1.0, 0.0, 1.0)


class TestClassification:
    @pytest.mark.parametrize("lam,alpha,J,E,regime,omega", [
        (1.0, 3.0, 1.0, 3.0, Regime.BOUNDED, SQRT3),
        (-1.0, 2.0, 1.0, 3.0, Regime.BOUNDED, SQRT10),
        (1.0, 3.0, 1.0, 6.0, Regime.UNBOUNDED, SQRT3),
        (1.0, 3.0, 1.0, 4.5, Regime.LIMITING, 0.0),
        (1.0, 3.0, 1.0, 2.0, Regime.FORBIDDEN, math.sqrt(5.0)),
        (1.0, 3.0, 5.0, 1.0, Regime.FORBIDDEN, math.sqrt(7.0)),
        (1.0, 3.0, 3.0, 10.0, Regime.UNBOUNDED, math.sqrt(11.0)),
    ])
    def test_examples(self, lam, alpha, J, E, regime, omega):
        mc = motion_constants(ModelParams(lam, alpha), J, E)
        assert mc.regime is regime
        assert mc.omega == pytest.approx(omega, rel=1e-15)

    def test_constants_worked_example(self, hyperbolic):
        mc = motion_constants(hyperbolic, 1.0, 3.0)
        assert (mc.C, mc.qa, mc.qb, mc.qc, mc.delta) == (-3.0, -1.0, 5.0, -3.0, -13.0)
        assert mc.delta == pytest.approx(-(2 * 3.0 + 1.0) ** 2 + 4 * 9.0 * 1.0)

    def test_circular_orbit_is_bounded(self, hyperbolic):
        assert classify(hyperbolic, 1.0, 2.5) is Regime.BOUNDED

    def test_zero_J(self, hyperbolic, spherical):
        assert classify(spherical, 0.0, 1.0) is Regime.BOUNDED
        assert classify(hyperbolic, 0.0, 0.0) is Regime.FORBIDDEN
        assert classify(hyperbolic, 0.0, 4.5) is Regime.LIMITING

    def test_limiting_band_width(self, hyperbolic):
        assert classify(hyperbolic, 1.0, 4.5 * (1 + 5e-13)) is Regime.LIMITING
        assert classify(hyperbolic, 1.0, 4.5 * (1 + 1e-11)) is Regime.UNBOUNDED
        assert classify(hyperbolic, 1.0, 4.5 * (1 - 1e-11)) is Regime.BOUNDED

    def test_no_bounded_above_cutoff(self, hyperbolic):
        for J in (3.0, 3.5, -4.0):
            for E in np.linspace(-1, 20, 2101):
                assert classify(hyperbolic, J, E) is not Regime.BOUNDED
            assert classify(hyperbolic, J, 4.5) is Regime.FORBIDDEN
            assert classify(hyperbolic, J, 4.6) is Regime.UNBOUNDED

    @given(lam=st.floats(0.1, 2.0), alpha=alpha_st, frac=st.floats(0.0, 0.95),
           eps=st.floats(-1e-10, 1e-10))
    def test_regimes_ordered_in_energy(self, lam, alpha, frac, eps):
        p = ModelParams(lam, alpha)
        J = frac * alpha / lam
        order = {Regime.FORBIDDEN: 0, Regime.BOUNDED: 1, Regime.LIMITING: 2, Regime.UNBOUNDED: 3}
        E = p.threshold_energy * (1 + eps)
        seq = [order[classify(p, J, E * (1 + d))] for d in (-1e-12, 0.0, 1e-12)]
        assert seq == sorted(seq)
        # a jump from Bounded to Unbounded must cross the Limiting band
        if seq[0] == 1 and seq[-1] == 3:
            assert classify(p, J, p.threshold_energy) is Regime.LIMITING

    @given(lam=lam_st, alpha=alpha_st, data=st.data())
    def test_bounded_constants(self, lam, alpha, data):
        p = ModelParams(lam, alpha)
        J_cap = 0.95 * alpha / lam if lam > 0 else 4.0
        J = data.draw(st.floats(0.05, min(J_cap, 4.0)))
        v_min = v_eff_extremum(p, J)[1]
        top = p.threshold_energy if lam > 0 else v_min + 20.0
        E = data.draw(st.floats(v_min, top).filter(lambda e: v_min < e < top))
        mc = motion_constants(p, J, E)
        if mc.regime is not Regime.BOUNDED:
            return
        assert mc.qc < 0
        assert mc.delta < 0 or math.isclose(mc.delta, 0.0, abs_tol=1e-9 * mc.qb**2)
        if lam > 0:
            assert -(alpha - lam * J) ** 2 / lam < mc.C < 0
        else:
            assert mc.C > 0
