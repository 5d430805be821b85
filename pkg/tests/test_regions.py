import numpy as np
import pytest

from conftest import MU0_ORACLE, PICKED_COUPLINGS, cached_full_spectrum
from lbs.determinant import CouplingPair, structural_constants, threshold_polys
from lbs.errors import PoleError
from lbs.regions import (
    BOUNDARY_TOL,
    SCAN_HEADER,
    classify,
    critical_curve,
    inclusion_checks,
    phase_scan,
)


class TestCriticalCurve:
    def test_examples(self):
        mu0 = structural_constants()["mu0"]
        assert critical_curve("minus", 12.0) == pytest.approx(1.0 - mu0, rel=1e-12)
        assert critical_curve("minus", 12.0) == pytest.approx(1.0 - MU0_ORACLE, abs=1e-6)
        assert abs(critical_curve("minus", 1e6) + mu0) < 1e-4
        assert critical_curve("plus", -12.0) == pytest.approx(-1.0 + mu0, rel=1e-12)

    def test_poles(self):
        with pytest.raises(PoleError):
            critical_curve("minus", -12.0)
        with pytest.raises(PoleError):
            critical_curve("plus", 12.0)
        with pytest.raises(ValueError):
            critical_curve("up", 0.0)


class TestClassify:
    def test_origin(self):
        rep = classify(CouplingPair(0.0, 0.0))
        assert rep.a_minus == 0 and rep.a_plus == 0
        assert rep.sector_sum == (0, 0)
        assert not rep.boundary

    def test_two_state_region(self):
        rep = classify(CouplingPair(-20.0, -10.0))
        assert rep.a_minus == 2
        assert rep.d_minus == 2 and rep.g_label == (2, 0)

    def test_oversubscribed_corner_is_surfaced(self):
        # deep in both the two-state symmetric region and the active
        # antisymmetric interval: the membership total exceeds the
        # label table's per-side cap of 3
        rep = classify(CouplingPair(-13.0, -40.0))
        assert rep.a_minus == 2 and rep.b_minus == 1
        assert rep.sector_sum[0] == 4
        assert rep.d_minus == 2  # the d label caps the same point at 2

    def test_on_axis_three_state_labels(self):
        consts = structural_constants()
        mu2 = -(max(consts["mu2_crit"], consts["mu0"] - 2.0) + 1.0)
        on_axis = classify(CouplingPair(0.0, mu2))
        assert on_axis.d_minus == 3 and on_axis.g_label == (3, 0)
        assert on_axis.sector_sum == (3, 0)
        off_axis = classify(CouplingPair(0.5, mu2))
        assert off_axis.d_minus == 1  # the label table confines d3 to the axis
        assert off_axis.sector_sum[0] == 3  # membership arithmetic still says 3

    def test_pole_line_belongs_to_middle_region(self):
        rep = classify(CouplingPair(-12.0, 5.0))
        assert rep.a_minus == 1
        assert not rep.boundary

    def test_boundary_flags_and_undefined_counts(self):
        consts = structural_constants()
        on_curve = classify(CouplingPair(-20.0, critical_curve("minus", -20.0)))
        assert "OnTauMinus" in on_curve.boundary
        assert on_curve.a_minus is None
        assert on_curve.sector_sum[0] is None
        assert on_curve.sector_sum[1] is not None
        on_point = classify(CouplingPair(3.0, -consts["mu2_crit"]))
        assert "OnBMinus" in on_point.boundary
        assert on_point.b_minus is None

    def test_origin_symmetry(self):
        rng = np.random.default_rng(13)
        for _ in range(40):
            c = CouplingPair(*rng.uniform(-50, 50, 2))
            rep = classify(c)
            mirror = classify(c.negated())
            assert mirror.a_plus == rep.a_minus and mirror.a_minus == rep.a_plus
            assert mirror.b_plus == rep.b_minus and mirror.b_minus == rep.b_plus

    def test_curve_membership_duality(self):
        for mu1 in (-30.0, -14.0, -5.0, 0.0, 11.0, 40.0):
            mu2 = critical_curve("minus", mu1)
            tp = threshold_polys(CouplingPair(mu1, mu2))
            assert abs(tp.a_minus) < 1e-9


class TestGTable:
    def test_g_pairings_on_sample_grid(self):
        rng = np.random.default_rng(17)
        seen_30 = False
        for _ in range(400):
            c = CouplingPair(*rng.uniform(-60, 60, 2))
            rep = classify(c)
            if rep.g_label is None:
                continue
            if rep.d_minus == 2:
                assert rep.g_label == (2, 0)
            if rep.d_plus == 2:
                assert rep.g_label == (0, 2)
            if rep.d_minus == 3:
                assert rep.g_label == (3, 0)
                seen_30 = True
            # the (1,2)/(2,1) cells are empty
            assert rep.g_label not in ((1, 2), (2, 1))
        consts = structural_constants()
        axis = classify(CouplingPair(0.0, -(consts["mu2_crit"] + 2.0)))
        assert axis.g_label == (3, 0)
        del seen_30  # axis sample above guarantees coverage

    def test_inclusions_hold_on_grid(self):
        report = inclusion_checks(n_per_axis=120, extent=60.0)
        assert report.ok, report.counterexamples[:5]


class TestPhaseScan:
    def test_small_scan_is_all_empty(self):
        rows = phase_scan((-1.0, 1.0, 3), (-1.0, 1.0, 3))
        assert len(rows) == 9
        for r in rows:
            assert (r.sum_below, r.sum_above) == (0, 0)

    def test_transition_across_pole_line(self):
        # columns on both sides of mu1 = -12 walk 0 -> 1 and 1 -> 2 as mu2
        # decreases through the curve
        rows_right = phase_scan((-10.0, -10.0, 2), (-60.0, 20.0, 41))
        vals_right = {r.a_minus for r in rows_right if r.a_minus is not None}
        assert vals_right == {0, 1}
        rows_left = phase_scan((-14.0, -14.0, 2), (-60.0, 20.0, 41))
        vals_left = {r.a_minus for r in rows_left if r.a_minus is not None}
        assert vals_left == {1, 2}

    def test_row_count_and_order(self):
        rows = phase_scan((0.0, 1.0, 4), (0.0, 1.0, 5))
        assert len(rows) == 20
        assert rows[0].mu1 == 0.0 and rows[0].mu2 == 0.0
        assert rows[4].mu1 == 0.0 and rows[4].mu2 == 1.0
        assert rows[5].mu1 == pytest.approx(1.0 / 3.0)

    def test_verified_scan_matches_memberships(self):
        rows = phase_scan((-16.0, 1.0, 2), (-2.0, 1.0, 2), verify=True)
        for r in rows:
            assert r.det_below == r.sum_below
            assert r.det_above == r.sum_above

    def test_range_validation(self):
        with pytest.raises(ValueError):
            phase_scan((0.0, 1.0, 1), (0.0, 1.0, 3))


class TestDeterminantAgreement:
    @pytest.mark.parametrize("name", ["A1-", "A2-", "B1-", "origin"])
    def test_sector_sum_matches_determinant_counts(self, name):
        c = PICKED_COUPLINGS[name]
        rep = classify(c)
        full = cached_full_spectrum(c.mu1, c.mu2)
        assert rep.sector_sum == (len(full.below), len(full.above))


def test_scan_header_is_pinned():
    assert SCAN_HEADER == ("mu1,mu2,a_minus,a_plus,b_minus,b_plus,"
                           "sum_below,sum_above,det_below,det_above,flags")


def test_boundary_tolerance_value():
    assert BOUNDARY_TOL == 1e-9
