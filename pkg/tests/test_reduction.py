import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import approx, ulps
from vacuum_rc.cosmology import CosmoParams, eps_vac_rate, evolve_background
from vacuum_rc.errors import DimensionError, DomainError, NoDecayError
from vacuum_rc.reduction import (
    budget_terms,
    characteristic_length_now,
    characteristic_volume,
    closed_form_length,
    decoherence_time,
    energy_gain_rate,
    rc_history,
    vacuum_budget_check,
)
from vacuum_rc.units import CONSTANTS, Quantity

# Hand-calculator oracle with the published constants (plain floats).
H0, M_PL, M_P, DELTA, CM = 0.769e-42, 1.22e19, 0.938, 0.06, 1.973e-14
G = 1 / M_PL**2
EPS_CRIT0 = 3 * H0**2 / (8 * math.pi * G)
RATE0 = -DELTA * H0 * 0.27 * EPS_CRIT0
VC0 = math.sqrt(-M_P * G / (2 * RATE0))
RC0 = VC0 ** (1 / 3)
TDEC0 = RC0 / (G * M_P**2)
RATE_GAIN0 = M_P * G / (2 * VC0)
FILL0 = (0.03 + 0.27) * EPS_CRIT0 / M_P * VC0


def test_oracle_against_rounded_figures():
    assert VC0 == approx(1.55e26, rel=5e-3)
    assert RC0 == approx(5.373e8, rel=1e-4)
    assert RC0 * CM == approx(1.06e-5, rel=5e-3)
    assert RATE_GAIN0 == approx(2.03e-65, rel=5e-3)
    assert TDEC0 == approx(9.09e46, rel=1e-3)
    assert FILL0 == approx(5.214e-22, rel=1e-3)


class TestCharacteristicVolume:
    def test_paper_numbers(self, proton):
        vc = characteristic_volume(proton, Quantity(RATE0, 5))
        assert vc.dim == -3
        assert vc.value == approx(VC0, rel=1e-14)
        assert characteristic_volume(proton, Quantity(-1.31e-91, 5)).value == approx(1.55e26, rel=5e-3)

    def test_rejects_no_decay(self, proton):
        with pytest.raises(NoDecayError, match="does not decay"):
            characteristic_volume(proton, Quantity(0.0, 5))
        with pytest.raises(NoDecayError):
            characteristic_volume(proton, Quantity(1e-91, 5))

    def test_dimension_checked(self, proton):
        with pytest.raises(DimensionError):
            characteristic_volume(proton, Quantity(-1e-91, 4))
        with pytest.raises(DimensionError):
            characteristic_volume(Quantity(1.0, -1), Quantity(-1e-91, 5))

    def test_square_root_scaling(self, proton):
        rate = Quantity(RATE0, 5)
        ratio = characteristic_volume(4 * proton, rate).value / characteristic_volume(proton, rate).value
        assert ratio == approx(2.0, rel=1e-15)


class TestNow:
    def test_golden_endpoint(self, params, proton):
        res = characteristic_length_now(params, proton)
        assert res.rc_cm == approx(1.06e-5, rel=5e-3)
        assert res.rc_cm == approx(RC0 * CM, rel=1e-13)
        assert res.closed_form_rel_diff < 1e-12

    def test_electron(self, params):
        res = characteristic_length_now(params, CONSTANTS.electron_mass)
        assert res.rc_cm == approx(3.03e-6, rel=2e-3)
        assert res.rc_cm == approx(RC0 * CM * (0.511e-3 / M_P) ** (1 / 6), rel=1e-13)

    def test_delta_scaling(self, params, proton):
        r1 = characteristic_length_now(params, proton).R_c.value
        r4 = characteristic_length_now(params.replace(delta=0.24), proton).R_c.value
        assert r1 / r4 == approx(4 ** (1 / 6), rel=1e-14)

    def test_result_invariants(self, params, proton):
        res = characteristic_length_now(params, proton)
        assert ulps(res.R_c.value**3, res.V_c.value) <= 2
        assert ulps(res.dE_dt.value, (proton * CONSTANTS.G / (2 * res.V_c)).value) <= 2
        assert res.to_dict()["order_of_magnitude"] is True

    def test_no_decay_rejected(self, proton):
        with pytest.raises(NoDecayError):
            characteristic_length_now(CosmoParams(delta=0.0), proton)

    @settings(max_examples=1000, deadline=None)
    @given(
        st.floats(1e-3, 2.9),
        st.floats(1e-4, 1e3),
        st.floats(0.3e-42, 3e-42),
    )
    def test_closed_form_matches_pipeline(self, delta, m, h0):
        p = CosmoParams(delta=delta, H0=Quantity(h0, 1))
        mass = Quantity(m, 1)
        pipeline = characteristic_length_now(p, mass).R_c.value
        assert pipeline == approx(closed_form_length(p, mass).value, rel=1e-12)


class TestEnergyAndDecoherence:
    def test_energy_gain_rate(self, proton):
        rate = energy_gain_rate(proton, Quantity(1.55e26, -3))
        assert rate.dim == 2
        assert rate.value == approx(2.03e-65, rel=5e-3)
        half = energy_gain_rate(proton, Quantity(3.1e26, -3))
        assert half.value == approx(rate.value / 2, rel=1e-15)
        with pytest.raises(DomainError):
            energy_gain_rate(proton, Quantity(0.0, -3))

    @pytest.mark.parametrize("rate", [RATE0, -1e-80, -3.7e-95])
    def test_energy_balance(self, proton, rate):
        vac_rate = Quantity(rate, 5)
        vc = characteristic_volume(proton, vac_rate)
        gain = energy_gain_rate(proton, vc).value
        loss = -(vc * vac_rate).value
        assert ulps(gain, loss) <= 2

    def test_decoherence_time(self, proton):
        t = decoherence_time(proton, Quantity(5.373e8, -1))
        assert t.dim == -1
        assert t.value == approx(9.09e46, rel=1e-3)
        fixed = decoherence_time(2 * proton, Quantity(5.373e8, -1))
        assert fixed.value == approx(t.value / 4, rel=1e-15)

    @pytest.mark.parametrize("lam", [2, 10, 1836])
    def test_exact_scaling_laws(self, params, proton, lam):
        base = characteristic_length_now(params, proton)
        scaled = characteristic_length_now(params, lam * proton)
        assert ulps(scaled.R_c.value / base.R_c.value, lam ** (1 / 6)) <= 4
        assert ulps(scaled.t_dec.value / base.t_dec.value, lam ** (-11 / 6)) <= 4


class TestHistory:
    def test_matches_now_at_anchor(self, params, proton):
        traj = evolve_background(params, 0.5, 2.0, 61)
        hist = rc_history(traj, params, proton)
        t, res = hist[30]
        assert t.value == 0.0
        assert res.R_c.value == approx(characteristic_length_now(params, proton).R_c.value, rel=1e-12)

    @pytest.mark.parametrize("delta", [0.01, 0.06, 0.16])
    def test_strictly_increasing(self, delta, proton):
        p = CosmoParams(delta=delta)
        hist = rc_history(evolve_background(p, 0.5, 5.0, 400), p, proton)
        vc = np.array([r.V_c.value for _, r in hist])
        t = np.array([t.value for t, _ in hist])
        assert np.all(np.diff(t) > 0)
        assert np.all(np.diff(vc) > 0)

    def test_late_time_growth_exponent(self, params, proton):
        hist = rc_history(evolve_background(params, 1e4, 1e6, 3), params, proton)
        vc = [r.V_c.value for _, r in hist]
        slope = math.log(vc[-1] / vc[0]) / math.log(100)
        assert slope == approx((3 - params.delta) / 2, rel=1e-6)

    def test_rejects_empty_and_no_decay(self, params, proton):
        with pytest.raises(DomainError):
            rc_history([], params, proton)
        p0 = CosmoParams(delta=0.0)
        with pytest.raises(NoDecayError):
            rc_history(evolve_background(p0, 0.5, 2.0, 3), p0, proton)

    def test_rate_used_is_pointwise(self, params, proton):
        traj = evolve_background(params, 0.5, 2.0, 5)
        for s, (_, res) in zip(traj, rc_history(traj, params, proton)):
            expected = characteristic_volume(proton, eps_vac_rate(s.a, s.H, params))
            assert res.V_c == expected


class TestBudget:
    def test_default_fraction(self, params):
        fraction = vacuum_budget_check(params)
        assert fraction == approx(FILL0, rel=1e-12)
        baryon, dark = budget_terms(params)
        assert baryon == approx(5.2e-23, rel=5e-3)
        assert fraction < 1e-6

    def test_linear_in_inverse_dark_mass(self, params, proton):
        _, d1 = budget_terms(params, proton, proton)
        _, d2 = budget_terms(params, proton, proton / 3)
        assert d2 == approx(3 * d1, rel=1e-14)

    def test_shrinks_as_decay_speeds_up(self):
        # Densities are tied to H0, so only delta shrinks V_c at fixed densities.
        deltas = [0.06, 0.5, 1.0, 2.0, 2.9]
        fractions = [vacuum_budget_check(CosmoParams(delta=d)) for d in deltas]
        assert all(b < a for a, b in zip(fractions, fractions[1:]))
        assert fractions[-1] / fractions[0] == approx((0.06 / 2.9) ** 0.5, rel=1e-13)

    def test_delta_scaling(self, params):
        ratio = vacuum_budget_check(params.replace(delta=0.16)) / vacuum_budget_check(params)
        assert ratio == approx((0.06 / 0.16) ** 0.5, rel=1e-14)

    def test_absurd_dark_mass(self, params, proton):
        assert vacuum_budget_check(params, proton, Quantity(1e-50, 1)) > 1
