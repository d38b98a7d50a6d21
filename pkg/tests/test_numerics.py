import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from coopnoma.numerics import (
    EULER_GAMMA,
    QuadratureSpec,
    bessel_k1,
    c0_constant,
    chebyshev_rule,
    digamma_int,
    one_minus_x_k1,
    small_argument_xk1,
)

# mpmath.besselk(1, x) at 50 digits, frozen
K1_REFERENCE = {
    1e-6: 999999.9999927842,
    0.01: 99.97389411829624,
    0.5: 1.656441120003301,
    1.0: 0.6019072301972346,
    2.0: 0.13986588181652243,
    2.5: 0.07389081634774707,
    10.0: 1.8648773453825585e-05,
    50.0: 3.4441022267175555e-23,
}


class TestChebyshevRule:
    def test_single_node(self):
        rule = chebyshev_rule(1)
        assert rule.nodes.tolist() == pytest.approx([0.0], abs=1e-16)
        assert rule.weight == pytest.approx(math.pi)
        assert rule.integrate(lambda x: np.ones_like(x)) == pytest.approx(math.pi)

    def test_two_nodes(self):
        assert sorted(chebyshev_rule(2).nodes) == pytest.approx([-0.70711, 0.70711], abs=1e-5)

    @pytest.mark.parametrize("order", [1, 2, 7, 30, 200])
    def test_node_count(self, order):
        assert chebyshev_rule(order).order == order

    def test_weighted_second_moment(self):
        # ∫ x² √(1 − x²) dx = π/8, exact once the rule has three nodes
        for n in (3, 4, 10, 30):
            assert chebyshev_rule(n).weighted_moment(lambda x: x**2) == pytest.approx(math.pi / 8, rel=1e-13)
        # two nodes give π/4: the rule integrates g(x)(1 − x²) against 1/√(1 − x²)
        assert chebyshev_rule(2).weighted_moment(lambda x: x**2) == pytest.approx(math.pi / 4, rel=1e-13)

    def test_total_weight_tends_to_interval_length(self):
        # Σ ω √(1 − φ²) approximates ∫ 1 dx = 2, with O(N⁻²) error
        assert float(np.sum(chebyshev_rule(200).sqrt_weights)) == pytest.approx(2.0, abs=1e-4)
        err30 = abs(np.sum(chebyshev_rule(30).sqrt_weights) - 2.0)
        err60 = abs(np.sum(chebyshev_rule(60).sqrt_weights) - 2.0)
        assert 3.5 < err30 / err60 < 4.5

    def test_integrate_maps_interval(self):
        rule = chebyshev_rule(400)
        assert rule.integrate(np.exp, 0.0, 1.0) == pytest.approx(math.e - 1.0, rel=2e-5)

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            chebyshev_rule(0)
        with pytest.raises(ValueError):
            chebyshev_rule(2.5)


class TestQuadratureSpec:
    def test_defaults(self):
        assert QuadratureSpec() == QuadratureSpec(30, 30, 30)

    def test_parse(self):
        assert QuadratureSpec.parse("10,20,30") == QuadratureSpec(10, 20, 30)
        assert QuadratureSpec.parse("12") == QuadratureSpec.uniform(12)
        assert str(QuadratureSpec(1, 2, 3)) == "1,2,3"

    @pytest.mark.parametrize("text", ["", "1,2", "a,b,c", "0,1,1"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            QuadratureSpec.parse(text)


class TestBesselK1:
    @pytest.mark.parametrize("x,expected", sorted(K1_REFERENCE.items()))
    def test_reference_values(self, x, expected):
        assert bessel_k1(x) == pytest.approx(expected, rel=1e-12)

    def test_spec_examples(self):
        assert round(bessel_k1(1.0), 10) == 0.6019072302
        assert bessel_k1(10.0) == pytest.approx(1.8649e-5, rel=1e-4)

    @given(st.floats(min_value=1e-8, max_value=600.0))
    @settings(max_examples=300, deadline=None)
    def test_matches_scipy(self, x):
        assert bessel_k1(x) == pytest.approx(special.k1(x), rel=1e-10, abs=1e-300)

    def test_vectorised(self):
        x = np.array([0.1, 1.0, 3.0])
        assert bessel_k1(x) == pytest.approx(special.k1(x), rel=1e-12)

    def test_small_argument_limit(self):
        assert 1e-10 * bessel_k1(1e-10) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("x", [0.0, -1.0, float("nan")])
    def test_domain(self, x):
        with pytest.raises(ValueError):
            bessel_k1(x)

    def test_underflow_region(self):
        assert bessel_k1(800.0) == 0.0


class TestOneMinusXK1:
    @given(st.floats(min_value=1e-6, max_value=50.0))
    @settings(max_examples=200, deadline=None)
    def test_agrees_with_direct_form_away_from_zero(self, x):
        direct = 1.0 - x * special.k1(x)
        assert one_minus_x_k1(x) == pytest.approx(direct, rel=1e-8, abs=1e-12)

    def test_no_cancellation_near_zero(self):
        # mpmath at 50 digits: 1 − x K1(x) for x = 1e-6
        assert one_minus_x_k1(1e-6) == pytest.approx(7.215721036812292e-12, rel=1e-6)
        assert one_minus_x_k1(0.0) == 0.0


class TestDigammaAndC0:
    def test_digamma(self):
        assert digamma_int(1) == pytest.approx(-EULER_GAMMA)
        assert digamma_int(2) == pytest.approx(1.0 - EULER_GAMMA)
        assert digamma_int(5) == pytest.approx(special.digamma(5.0), rel=1e-15)

    def test_c0(self):
        assert round(c0_constant(), 10) == 0.0772156649
        assert 2 * c0_constant() + digamma_int(1) + digamma_int(2) == pytest.approx(0.0, abs=1e-16)

    def test_small_argument_expansion(self):
        x = 0.01
        assert small_argument_xk1(x) == pytest.approx(x * bessel_k1(x), abs=1e-6)

    @pytest.mark.parametrize("x", [0.1, 0.05, 0.02])
    def test_expansion_error_order(self, x):
        def err(z):
            return abs(small_argument_xk1(z) - z * bessel_k1(z))

        # next term is O(x⁴ ln x): halving x cuts the error by more than 8
        assert err(x) / err(x / 2) > 8.0
