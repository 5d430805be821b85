import math

import numpy as np
import pytest

from conftest import A11_ZERO_ORACLE, MU0_ORACLE
from lbs.determinant import (
    CouplingPair,
    band_edge_constants,
    delta_a12,
    delta_s,
    structural_constants,
    threshold_polys,
    threshold_polys_expanded,
)
from lbs.errors import DomainError
from lbs.quadrature import a_bessel, afunctions


class TestCouplingPair:
    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            CouplingPair(math.inf, 0.0)
        with pytest.raises(ValueError):
            CouplingPair(0.0, math.nan)

    def test_strength(self):
        assert CouplingPair(-3.0, 8.0).strength() == 8.0


class TestDeltaS:
    def test_no_interaction_gives_one(self):
        for z in (-5.0, -1e-4, 30.0):
            assert delta_s(CouplingPair(0.0, 0.0), z) == 1.0

    def test_single_channel_reduction(self):
        z = -2.0
        f = afunctions(z)
        val = delta_s(CouplingPair(-7.5, 0.0), z)
        assert val == pytest.approx(1.0 - 7.5 * f.a11, rel=1e-14)

    def test_band_edge_limit_is_threshold_polynomial(self):
        # weak couplings keep the sqrt(-z) correction below 1e-5 at z=-1e-6
        c = CouplingPair(0.05, 0.02)
        assert delta_s(c, -1e-6) == pytest.approx(threshold_polys(c).a_minus, abs=1e-5)

    def test_band_edge_convergence_rate_is_square_root(self):
        c = CouplingPair(-20.0, -10.0)
        limit = threshold_polys(c).a_minus
        gap6 = abs(delta_s(c, -1e-6) - limit)
        gap8 = abs(delta_s(c, -1e-8) - limit)
        assert gap8 < gap6 < 1e-2
        assert gap6 / gap8 == pytest.approx(10.0, rel=0.25)

    def test_large_z_limit(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            c = CouplingPair(*rng.uniform(-30, 30, 2))
            assert abs(delta_s(c, -1e6) - 1.0) < 1e-4
            assert abs(delta_s(c, 1e6) - 1.0) < 1e-4

    def test_inside_band_rejected(self):
        with pytest.raises(DomainError):
            delta_s(CouplingPair(1.0, 1.0), 5.0)


class TestDeltaA12:
    def test_no_interaction(self):
        assert delta_a12(0.0, -3.3) == 1.0

    def test_large_z_limit(self):
        assert abs(delta_a12(9.0, -1e6) - 1.0) < 2e-5
        assert abs(delta_a12(9.0, 1e6) - 1.0) < 2e-5

    def test_band_edge_limit(self):
        mu2 = -7.0
        expect = 1.0 + mu2 * a_bessel("a_a12", 0.0)
        assert delta_a12(mu2, -1e-6) == pytest.approx(expect, abs=1e-5)


class TestReflection:
    def test_determinant_mirror(self):
        rng = np.random.default_rng(4)
        for _ in range(6):
            c = CouplingPair(*rng.uniform(-25, 25, 2))
            for z in (-8.0, -0.6, -0.004):
                assert delta_s(c, z) == pytest.approx(
                    delta_s(c.negated(), 24.0 - z), abs=1e-7
                )
                assert delta_a12(c.mu2, z) == pytest.approx(
                    delta_a12(-c.mu2, 24.0 - z), abs=1e-7
                )


class TestThresholdPolynomials:
    def test_origin_value(self):
        tp = threshold_polys(CouplingPair(0.0, 0.0))
        assert tp.a_minus == pytest.approx(1.0, rel=1e-12)
        assert tp.a_plus == pytest.approx(1.0, rel=1e-12)

    def test_mu0_against_gamma_oracle(self):
        tp = threshold_polys(CouplingPair(0.0, 0.0))
        assert tp.mu0 == pytest.approx(MU0_ORACLE, abs=1e-6)
        assert tp.mu0 == pytest.approx(5.8731, abs=1e-3)
        assert tp.mu0 > 2.0
        assert tp.mu2_crit > 0.0

    def test_factored_form_collapses_at_pole(self):
        consts = band_edge_constants()
        expect = -(12.0 * consts["a11_0"] - 1.0)
        for mu2 in (-3.0, 0.0, 7.0):
            tp = threshold_polys(CouplingPair(-12.0, mu2))
            assert tp.a_minus == pytest.approx(expect, rel=1e-12)

    def test_expanded_equals_factored_on_grid(self):
        for mu1 in np.linspace(-30.0, 30.0, 20):
            for mu2 in np.linspace(-30.0, 30.0, 20):
                c = CouplingPair(float(mu1), float(mu2))
                tp = threshold_polys(c)
                am, ap = threshold_polys_expanded(c)
                assert tp.a_minus == pytest.approx(am, abs=1e-9)
                assert tp.a_plus == pytest.approx(ap, abs=1e-9)

    def test_sign_symmetry_is_exact(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            c = CouplingPair(*rng.uniform(-40, 40, 2))
            tp = threshold_polys(c)
            tn = threshold_polys(c.negated())
            assert tp.a_minus == tn.a_plus
            assert tp.a_plus == tn.a_minus


class TestBandEdgeConstants:
    def test_derived_constants_match_direct_integrals(self):
        # the cached a12(0)/a22(0) come from the exact identities; the
        # directly integrated values must agree closely
        consts = band_edge_constants()
        assert consts["a12_0"] == pytest.approx(a_bessel("a12", 0.0), abs=1e-8)
        assert consts["a22_0"] == pytest.approx(a_bessel("a22", 0.0), abs=1e-8)
        assert consts["a11_0"] == pytest.approx(A11_ZERO_ORACLE, abs=1e-7)

    def test_cache_returns_same_object(self):
        assert structural_constants() is structural_constants()
