"""
Unit tests for the piecewise monomial rate approximation.

Tests cover the closed-form monomials, fitted envelopes, grid certification
of the published preset, the A coefficient and the inverse envelope.
"""

import numpy as np
import pytest

from src.hetnet_power.approx import (
    PAPER_M5,
    PRESET_ROUNDING_SLACK,
    a_coefficient,
    approx_value,
    chord_monomial,
    fit_piecewise,
    get_preset,
    inverse_rate,
    rate,
    tangent_monomial,
    verify_lower_bound,
)
from src.hetnet_power.exceptions import CertificationError


class TestMonomials:
    """Tests for single monomial fits."""

    def test_tangent_at_one(self):
        """Test the tangent monomial at s0 = 1."""
        a, b = tangent_monomial(1.0)

        assert a == pytest.approx(1.0, abs=1e-12)
        assert b == pytest.approx(0.72135, abs=1e-5)

    def test_tangent_touches_rate(self):
        """Test that the tangent matches value and log-log slope at its anchor."""
        s0 = 7.5
        a, b = tangent_monomial(s0)

        assert a * s0**b == pytest.approx(rate(s0), rel=1e-12)
        h = 1e-6
        slope = (np.log(rate(s0 * (1 + h))) - np.log(rate(s0))) / np.log1p(h)
        assert b == pytest.approx(slope, rel=1e-4)

    def test_tangent_lies_above_rate(self):
        """Test that a tangent monomial overestimates the rate away from its anchor."""
        a, b = tangent_monomial(1.0)
        s = np.array([0.1, 0.5, 2.0, 10.0])

        assert np.all(a * s**b >= rate(s))

    @pytest.mark.parametrize("s0", [0.0, -1.0, np.inf])
    def test_tangent_rejects_invalid_anchor(self, s0):
        """Test that anchors must be finite and positive."""
        with pytest.raises(ValueError):
            tangent_monomial(s0)

    def test_chord_through_endpoints(self):
        """Test that a chord passes through both endpoints."""
        a, b = chord_monomial(0.5, 8.0)

        assert a * 0.5**b == pytest.approx(rate(0.5), rel=1e-12)
        assert a * 8.0**b == pytest.approx(rate(8.0), rel=1e-12)
        assert 0 < b < 1

    def test_chord_rejects_reversed_range(self):
        """Test that chord endpoints must be ordered."""
        with pytest.raises(ValueError):
            chord_monomial(2.0, 1.0)


class TestFitPiecewise:
    """Tests for fit_piecewise."""

    @pytest.mark.parametrize("m", [1, 2, 3, 5, 8])
    def test_fit_passes_own_range(self, m):
        """Test that every fit certifies on its fit range."""
        pw = fit_piecewise(m, 0.01, 100.0)
        report = verify_lower_bound(pw)

        assert pw.m == m
        assert report.passed
        assert report.max_excess <= 1e-9

    def test_fit_is_exact_at_anchors(self):
        """Test that the envelope equals the rate at every breakpoint."""
        pw = fit_piecewise(5, 0.05, 50.0)
        anchors = np.asarray(pw.anchors)

        assert np.allclose(approx_value(pw, anchors), rate(anchors), rtol=0, atol=1e-12)

    def test_fit_stays_below_range_start(self):
        """Test that the leading slope-one piece keeps the bound below s_min."""
        pw = fit_piecewise(4, 0.1, 10.0)
        s = np.geomspace(1e-4, 0.1, 50)

        assert np.all(approx_value(pw, s) <= rate(s) + 1e-12)

    def test_more_pieces_tighten_the_bound(self):
        """Test that the worst gap to the rate shrinks with m."""
        grid = np.geomspace(0.01, 100.0, 2000)
        gaps = [np.max(rate(grid) - approx_value(fit_piecewise(m), grid)) for m in (2, 4, 8)]

        assert gaps[0] > gaps[1] > gaps[2]

    def test_forced_anchor_gives_tangent(self):
        """Test that a forced anchor produces the tangent monomial when not certified."""
        pw = fit_piecewise(1, 0.01, 100.0, anchors=[1.0], certify=False)

        assert pw.a == pytest.approx([1.0])
        assert pw.b == pytest.approx([0.72135], abs=1e-5)

    def test_forced_anchor_fails_certification(self):
        """Test that certification rejects an upper-bounding tangent."""
        with pytest.raises(CertificationError) as exc_info:
            fit_piecewise(1, 0.01, 100.0, anchors=[1.0])

        assert exc_info.value.excess > 0

    def test_rejects_zero_pieces(self):
        """Test that m must be positive."""
        with pytest.raises(ValueError):
            fit_piecewise(0)

    def test_rejects_empty_range(self):
        """Test that the range must be non-empty and positive."""
        with pytest.raises(ValueError):
            fit_piecewise(3, 10.0, 1.0)

    def test_anchor_count_must_match(self):
        """Test that the number of anchors must equal m."""
        with pytest.raises(ValueError):
            fit_piecewise(2, anchors=[1.0], certify=False)


class TestPreset:
    """Tests for the published five-piece preset."""

    def test_preset_registered(self):
        """Test loading the preset by name."""
        pw = get_preset("paper-m5")

        assert pw.a == [1.4080, 0.7720, 1.3436, 2.0641, 2.8584]
        assert pw.b == [1.0, 0.7994, 0.3928, 0.2538, 0.1840]

    def test_unknown_preset(self):
        """Test that unknown names raise ValueError."""
        with pytest.raises(ValueError, match="Unknown approximation preset"):
            get_preset("paper-m7")

    def test_value_at_ten(self, paper_pw):
        """Test the envelope at s = 10, attained by the third piece."""
        value = approx_value(paper_pw, 10.0)

        assert value == pytest.approx(3.3199, abs=2e-3)
        pieces = paper_pw.a_arr * 10.0**paper_pw.b_arr
        assert int(np.argmin(pieces)) == 2

    def test_value_at_one_is_min_a(self, paper_pw):
        """Test that every piece equals a_l at s = 1."""
        assert approx_value(paper_pw, 1.0) == pytest.approx(0.7720)

    def test_rejects_non_positive_sinr(self, paper_pw):
        """Test that the envelope is only defined for s > 0."""
        with pytest.raises(ValueError):
            approx_value(paper_pw, 0.0)

    def test_certified_at_rounding_slack(self, paper_pw):
        """Test certification on [0.01, 100] at the coefficient rounding slack."""
        report = verify_lower_bound(paper_pw, 0.01, 100.0, slack=PRESET_ROUNDING_SLACK)

        assert report.passed
        assert report.grid_points == 4096

    def test_rounding_overshoot_near_first_junction(self, paper_pw):
        """Test that the strict check flags the small overshoot near s = 0.05."""
        report = verify_lower_bound(paper_pw, 0.01, 100.0)

        assert not report.passed
        assert 0.045 < report.worst_s < 0.055
        assert 0 < report.max_excess < 2e-5

    def test_fails_on_wider_range(self, paper_pw):
        """Test that the preset overshoots the rate near s = 1000."""
        report = verify_lower_bound(paper_pw, 0.01, 1000.0, slack=PRESET_ROUNDING_SLACK)

        assert not report.passed
        assert report.worst_s > 500
        assert report.max_excess > 0.1

    def test_verify_rejects_tiny_grid(self, paper_pw):
        """Test that the grid needs at least two points."""
        with pytest.raises(ValueError):
            verify_lower_bound(paper_pw, grid_points=1)


class TestCoefficients:
    """Tests for a_coefficient and inverse_rate."""

    def test_a_coefficient(self):
        """Test log(B a / r) / b."""
        assert a_coefficient(20e6, 1e6, 1.0, 0.5) == pytest.approx(2 * np.log(20.0))

    def test_a_coefficient_vectorized(self):
        """Test broadcasting over monomials."""
        values = a_coefficient(20e6, 1e6, np.array([1.0, 2.0]), np.array([1.0, 0.5]))

        assert values.shape == (2,)
        assert values[1] == pytest.approx(2 * np.log(40.0))

    def test_a_coefficient_rejects_zero_demand(self):
        """Test that demands must be positive."""
        with pytest.raises(ValueError):
            a_coefficient(20e6, 0.0, 1.0, 0.5)

    @pytest.mark.parametrize("s", [0.02, 0.3, 1.0, 4.0, 60.0])
    def test_inverse_rate(self, paper_pw, s):
        """Test that inverse_rate undoes the envelope."""
        assert inverse_rate(paper_pw, approx_value(paper_pw, s)) == pytest.approx(s, rel=1e-10)
