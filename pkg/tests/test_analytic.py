import math
import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import reference
from coopnoma import analytic as A
from coopnoma.geometry import DistanceLaw, Region, Scheme
from coopnoma.model import InfeasibleSICError, NetworkConfig, derive_thresholds
from coopnoma.numerics import QuadratureSpec

DISC = Region.disc(2.0, 1.0)
RING = Region.ring(8.0, 10.0, 1.0)
NEAR30 = NetworkConfig(alpha=2.0, r1=1.0, r2=0.5, rho=1000.0)
FAR_BASE = NetworkConfig(alpha=3.0, r1=0.3)

# reference.far_outage (independent Gauss-Legendre + scipy K1), frozen
FAR_REFERENCE = {
    ("rnrf", 30): 0.2763432560756423,
    ("rnrf", 40): 0.01194666429943241,
    ("nnnf", 40): 0.002951671949680964,
    ("nnff", 40): 0.008937615520413066,
}


class TestChannelCdf:
    def test_hand_evaluated_alpha2(self):
        hand = 1.0 - math.exp(-0.1) / 0.4 + math.exp(-0.5) / 0.4
        value = A.channel_cdf(0.1, DistanceLaw.RANDOM, DISC, 2.0, variant="closed_form")
        assert value == pytest.approx(hand, rel=1e-12)
        assert round(value, 5) == 0.25423

    @pytest.mark.parametrize("law,region", [(DistanceLaw.RANDOM, DISC), (DistanceLaw.NEAREST, DISC),
                                            (DistanceLaw.RANDOM, RING), (DistanceLaw.NEAREST, RING),
                                            (DistanceLaw.FARTHEST, RING)])
    @pytest.mark.parametrize("eps", [1e-4, 0.01, 0.3])
    def test_closed_form_matches_reference(self, law, region, eps):
        name = {DistanceLaw.RANDOM: "random", DistanceLaw.NEAREST: "nearest", DistanceLaw.FARTHEST: "farthest"}[law]
        expected = reference.gain_cdf(eps, 2.0, name, region.inner, region.outer, region.density)
        assert A.channel_cdf(eps, law, region, 2.0, variant="closed_form") == pytest.approx(expected, rel=1e-10)
        assert A.channel_cdf(eps, law, region, 2.0, variant="oracle") == pytest.approx(expected, rel=1e-8)

    def test_quadrature_converges_at_second_order(self):
        exact = A.channel_cdf(0.1, DistanceLaw.RANDOM, DISC, 2.0, variant="closed_form")
        e30 = abs(A.channel_cdf(0.1, DistanceLaw.RANDOM, DISC, 2.0, order=30, variant="quadrature") - exact)
        e60 = abs(A.channel_cdf(0.1, DistanceLaw.RANDOM, DISC, 2.0, order=60, variant="quadrature") - exact)
        assert e30 < 5e-4
        assert 3.5 < e30 / e60 < 4.5

    def test_zero_and_negative(self):
        assert A.channel_cdf(0.0, DistanceLaw.RANDOM, DISC, 3.0) == 0.0
        with pytest.raises(ValueError):
            A.channel_cdf(-1.0, DistanceLaw.RANDOM, DISC, 3.0)

    def test_closed_form_requires_alpha2(self):
        with pytest.raises(ValueError):
            A.channel_cdf(0.1, DistanceLaw.RANDOM, DISC, 3.0, variant="closed_form")
        with pytest.raises(ValueError):
            A.outage_near(FAR_BASE, variant="closed_form")

    @given(st.floats(1e-6, 5.0), st.floats(1e-6, 5.0))
    @settings(max_examples=100, deadline=None)
    def test_monotone_in_threshold(self, e1, e2):
        lo, hi = sorted((e1, e2))
        for variant in ("closed_form", "quadrature"):
            assert A.channel_cdf(lo, DistanceLaw.NEAREST, DISC, 2.0, variant=variant) <= A.channel_cdf(
                hi, DistanceLaw.NEAREST, DISC, 2.0, variant=variant
            ) + 1e-15


class TestNearOutage:
    def test_reference_values(self):
        eps = derive_thresholds(NEAR30).eps_a
        assert A.outage_near_rnrf(NEAR30) == pytest.approx(reference.gain_cdf(eps, 2.0, "random", 0, 2, 1), rel=1e-10)
        assert A.outage_near_nnnf(NEAR30) == pytest.approx(reference.gain_cdf(eps, 2.0, "nearest", 0, 2, 1), rel=1e-10)

    def test_frozen_values(self):
        assert A.outage_near_rnrf(NEAR30) == pytest.approx(0.043859112091503234, rel=1e-12)
        assert A.outage_near_nnnf(NEAR30) == pytest.approx(0.019569073183692588, rel=1e-12)

    @pytest.mark.parametrize("r1,r2,flag", [(0.5, 1.0, "infeasible_near"), (1.5, 0.5, "infeasible_sic")])
    def test_infeasible_is_exactly_one(self, r1, r2, flag):
        cfg = NetworkConfig(r1=r1, r2=r2)
        for variant in (None, "quadrature", "high_snr", "oracle"):
            value = A.outage_near(cfg, variant=variant)
            assert float(value) == 1.0 and value.flag == flag

    def test_vanishes_at_high_snr(self):
        assert A.outage_near_rnrf(NEAR30.replace(alpha=3.0).with_snr_db(120)) < 1e-10

    @pytest.mark.parametrize("alpha", [2.0, 3.0, 4.0])
    @pytest.mark.parametrize("snr_db", [0.0, 20.0, 40.0])
    def test_nearest_below_random(self, alpha, snr_db):
        cfg = NEAR30.replace(alpha=alpha).with_snr_db(snr_db)
        assert A.outage_near_nnnf(cfg) <= A.outage_near_rnrf(cfg)

    def test_high_snr_is_inverse_linear_and_tight(self):
        a = A.outage_near_high_snr(NEAR30.with_snr_db(40))
        b = A.outage_near_high_snr(NEAR30.with_snr_db(50))
        assert a / b == pytest.approx(10.0, rel=1e-12)
        exact = A.outage_near_rnrf(NEAR30.with_snr_db(60), variant="quadrature")
        assert A.outage_near_high_snr(NEAR30.with_snr_db(60)) == pytest.approx(exact, rel=1e-3)


class TestFarOutage:
    @pytest.mark.parametrize("key", sorted(FAR_REFERENCE))
    def test_oracle_matches_reference(self, key):
        scheme, snr = key
        value = A.outage_far_oracle(FAR_BASE.with_snr_db(snr), scheme)
        assert value == pytest.approx(FAR_REFERENCE[key], rel=1e-9)

    def test_theta2_is_product(self):
        cfg = FAR_BASE.with_snr_db(40)
        eps = derive_thresholds(cfg).eps_a
        parts = A.far_outage_parts(cfg)
        fx = A.cdf_far_channel(eps, cfg)
        fy = A.cdf_near_channel(eps, cfg)
        assert parts.theta2 == pytest.approx(fx * fy, rel=1e-14)
        assert parts.total == pytest.approx(parts.theta1 + parts.theta2)

    @pytest.mark.parametrize("scheme", list(Scheme))
    def test_expansion_approaches_oracle(self, scheme):
        # the small-argument error shrinks as the SNR grows; a high order keeps the
        # distance quadrature error out of the comparison
        quad = QuadratureSpec.uniform(200)
        errs = []
        for snr in (40, 45, 50):
            cfg = FAR_BASE.with_snr_db(snr)
            errs.append(abs(A.outage_far(cfg, quad, scheme).raw / A.outage_far_oracle(cfg, scheme).raw - 1.0))
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 0.015

    def test_closed_form_alpha2_matches_quadrature(self):
        cfg = NetworkConfig(alpha=2.0, r1=1.0, r2=0.5).with_snr_db(35)
        # only the near-distance moments differ between the two variants
        spec = QuadratureSpec(400, 30, 30)
        closed = A.outage_far_rnrf(cfg, spec, variant="closed_form").raw
        quad = A.outage_far_rnrf(cfg, spec, variant="quadrature").raw
        assert closed == pytest.approx(quad, rel=1e-4)

    def test_vanishes_at_high_snr(self):
        cfg = FAR_BASE.with_snr_db(90)
        for scheme in Scheme:
            assert A.outage_far(cfg, scheme=scheme) < 1e-6
            assert A.outage_far_oracle(cfg, scheme) < 1e-6

    def test_no_harvesting(self):
        cfg = FAR_BASE.replace(eta=0.0).with_snr_db(30)
        eps = derive_thresholds(cfg).eps_a
        fx = A.cdf_far_channel(eps, cfg)
        fy = A.cdf_near_channel(eps, cfg)
        parts = A.far_outage_parts(cfg)
        assert parts.theta1 == pytest.approx(fx * (1.0 - fy), rel=1e-14)
        assert A.outage_far(cfg) == pytest.approx(A.outage_far_noncooperative(cfg), rel=1e-12)
        assert A.outage_far_oracle(cfg) == pytest.approx(A.outage_far_noncooperative(cfg, variant="oracle"), rel=1e-9)

    def test_cooperation_helps(self):
        for snr in (10, 20, 30):
            cfg = FAR_BASE.with_snr_db(snr)
            assert A.outage_far_oracle(cfg) < A.outage_far_noncooperative(cfg, variant="oracle")

    def test_clamping_is_flagged(self):
        value = A.outage_far_rnrf(FAR_BASE.with_snr_db(30))
        assert value.raw < 0.0
        assert float(value) == 0.0 and value.flag == "clamped_low" and value.clamped

    def test_sic_infeasible_raises(self):
        with pytest.raises(InfeasibleSICError):
            A.outage_far(NetworkConfig(r1=1.5))
        with pytest.raises(InfeasibleSICError):
            A.outage_far_oracle(NetworkConfig(r1=1.5))

    def test_high_snr_variant_scales(self):
        a = A.outage_far_noncooperative(FAR_BASE.with_snr_db(40), variant="high_snr")
        b = A.outage_far_noncooperative(FAR_BASE.with_snr_db(50), variant="high_snr")
        assert a / b == pytest.approx(10.0, rel=1e-12)

    def test_evaluate_dispatch(self):
        cfg = FAR_BASE.with_snr_db(40)
        assert A.evaluate(cfg, "nnff", "far") == A.outage_far_nnff(cfg)
        assert A.evaluate(cfg, "nnnf", "near") == A.outage_near_nnnf(cfg)
        assert A.evaluate(cfg, "rnrf", "far", cooperative=False) == A.outage_far_noncooperative(cfg)


class TestAuxiliaryConstants:
    def test_fields(self):
        aux = A.auxiliary_constants(FAR_BASE, scheme="nnff")
        assert aux.omega_near == pytest.approx(math.pi / 30)
        assert np.all(aux.residual_sinr > 0)
        assert np.all((aux.threshold_nodes > 0) & (aux.threshold_nodes < aux.eps_a))
        assert aux.xi_near == pytest.approx(2 * math.pi / -math.expm1(-4 * math.pi))
        assert aux.xi_far > 0
        assert aux.c0 == pytest.approx(0.0772156649, abs=1e-10)
        assert aux.zeta1 < 0
        assert np.sum(A.auxiliary_constants(FAR_BASE).far_weights) == pytest.approx(1.0, abs=2e-3)

    def test_random_scheme_has_no_xi(self):
        aux = A.auxiliary_constants(FAR_BASE)
        assert math.isnan(aux.xi_near) and math.isnan(aux.xi_far)


class TestOutageValue:
    def test_roundtrip(self):
        v = A.OutageValue(1.2)
        assert float(v) == 1.0 and v.flag == "clamped_high" and v.raw == 1.2
        w = pickle.loads(pickle.dumps(v))
        assert (float(w), w.raw, w.flag) == (1.0, 1.2, "clamped_high")

    def test_nan_rejected(self):
        with pytest.raises(ArithmeticError):
            A.OutageValue(float("nan"))


class TestDiversity:
    RHO = 10 ** (np.arange(30, 46, 1.0) / 10)

    def test_pure_power_law(self):
        pts = [(r, 1.0 / r**2) for r in self.RHO]
        assert A.diversity_fit(pts) == pytest.approx(2.0, abs=1e-12)
        band = A.diversity_fit_band(pts)
        assert band.low <= 2.0 <= band.high

    def test_log_corrected(self):
        pts = [(r, 3.0 * math.log(r) / r**2) for r in self.RHO]
        plain = A.diversity_fit(pts)
        assert 1.7 < plain < 2.0
        assert A.diversity_fit(pts, model="log-corrected") == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize(
        "pts",
        [
            [(100.0, 0.1), (1000.0, 0.01)],
            [(100.0, 0.1), (1000.0, 0.0), (1e4, 0.001)],
            [(100.0, 0.1), (1000.0, 1.0), (1e4, 0.001)],
            [(100.0, 0.1), (100.0, 0.01), (100.0, 0.001)],
        ],
    )
    def test_degenerate(self, pts):
        with pytest.raises(A.DegenerateFitError):
            A.diversity_fit(pts)

    def test_log_model_needs_rho_above_one(self):
        with pytest.raises(A.DegenerateFitError):
            A.diversity_fit([(0.5, 0.5), (10.0, 0.1), (100.0, 0.01)], model="log-corrected")

    def test_unknown_model(self):
        with pytest.raises(ValueError):
            A.diversity_fit([(10.0, 0.1)] * 3, model="cubic")


class TestThroughput:
    @given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 3), st.floats(0, 3))
    def test_bounds(self, pf, pn, r1, r2):
        t = A.throughput_from_outages(pf, pn, r1, r2)
        assert -1e-12 <= t <= r1 + r2 + 1e-12

    @pytest.mark.parametrize("scheme", list(Scheme))
    def test_formula(self, scheme):
        cfg = NEAR30
        t = A.throughput_delay_sensitive(cfg, scheme=scheme)
        expected = (1 - A.outage_far(cfg, scheme=scheme)) * cfg.r1 + (1 - A.outage_near(cfg, scheme=scheme)) * cfg.r2
        assert t == pytest.approx(expected, rel=1e-14)

    def test_infeasible_near_contributes_nothing(self):
        cfg = NetworkConfig(r1=1.0, r2=2.0, alpha=2.0)
        for snr in (10, 30, 50):
            assert A.throughput_delay_sensitive(cfg.with_snr_db(snr)) <= cfg.r1

    def test_ceiling_at_high_snr(self):
        cfg = NetworkConfig(alpha=2.0, r1=1.0, r2=0.5).with_snr_db(80)
        assert A.throughput_delay_sensitive(cfg) == pytest.approx(1.5, rel=1e-4)
