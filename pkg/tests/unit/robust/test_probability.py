"""
Unit tests for the normal-distribution helpers and uncertainty boxes.

The anchor values come from the standard normal table: Phi(2.04) = 0.9793,
whose fifth power is 0.9007, and a 94% joint box over five base stations
has half-width 2.25.
"""

import numpy as np
import pytest

from src.hetnet_power.models import Association, BoxPolicy
from src.hetnet_power.robust import (
    box_from_alpha,
    box_from_probability,
    build_box,
)
from src.hetnet_power.robust.probability import (
    half_width,
    inv_normal_cdf,
    joint_probability,
    normal_cdf,
    per_bs_factor,
)


class TestNormal:
    """Tests for the normal CDF and its inverse."""

    def test_cdf_anchor(self):
        """Test Phi(2.04)."""
        assert normal_cdf(2.04) == pytest.approx(0.9793, abs=5e-5)

    def test_fifth_power_anchor(self):
        """Test the joint coverage over five base stations."""
        # 0.9793 is the rounded table value
        assert 0.9793**5 == pytest.approx(0.9007, abs=1e-4)
        assert normal_cdf(2.04) ** 5 == pytest.approx(0.900811, abs=5e-6)

    def test_cdf_symmetry(self):
        """Test Phi(-x) = 1 - Phi(x)."""
        x = np.linspace(-4, 4, 17)

        assert normal_cdf(-x) == pytest.approx(1 - normal_cdf(x), abs=1e-15)

    @pytest.mark.parametrize("p", [1e-6, 0.1, 0.5, 0.9793, 1 - 1e-9])
    def test_inverse_round_trip(self, p):
        """Test Phi(Phi^-1(p)) = p."""
        assert normal_cdf(inv_normal_cdf(p)) == pytest.approx(p, abs=1e-12)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.5, 1.5])
    def test_inverse_rejects_outside_open_interval(self, p):
        """Test that p must lie strictly inside (0, 1)."""
        with pytest.raises(ValueError):
            inv_normal_cdf(p)


class TestHalfWidth:
    """Tests for per-BS factors and half-widths."""

    def test_per_bs_factor(self):
        """Test phi = (1 - alpha)^(1/N)."""
        assert per_bs_factor(0.0993, 5) == pytest.approx(0.9793, abs=5e-5)

    @pytest.mark.parametrize("alpha", [0.0, 1.0])
    def test_per_bs_factor_rejects_degenerate_alpha(self, alpha):
        """Test that alpha must lie strictly inside (0, 1)."""
        with pytest.raises(ValueError):
            per_bs_factor(alpha, 5)

    def test_one_sided_half_width(self):
        """Test Phi(rho) = phi."""
        assert half_width(0.9793) == pytest.approx(2.04, abs=2e-3)

    def test_two_sided_half_width_is_wider(self):
        """Test that covering both tails needs a wider interval."""
        one = half_width(0.95, BoxPolicy.ONE_SIDED)
        two = half_width(0.95, BoxPolicy.TWO_SIDED)

        assert two == pytest.approx(1.959964, abs=1e-6)
        assert two > one

    def test_half_width_at_one_is_unbounded(self):
        """Test that phi = 1 gives an infinite interval."""
        assert half_width(1.0) == np.inf

    def test_joint_probability_inverts_half_width(self):
        """Test that joint_probability undoes the box construction."""
        rho = half_width(per_bs_factor(0.1, 4), BoxPolicy.TWO_SIDED)

        assert joint_probability(rho, 4, BoxPolicy.TWO_SIDED) == pytest.approx(0.9, abs=1e-12)


class TestBoxes:
    """Tests for box constructors."""

    def test_box_from_alpha_anchor(self):
        """Test the 94% joint box over five base stations."""
        lo, hi = box_from_alpha(0.06, 5)

        assert hi == pytest.approx(2.25, abs=5e-3)
        assert lo == -hi

    def test_box_from_alpha_default_budget(self):
        """Test the default violation budget gives rho close to 2.04."""
        _, hi = box_from_alpha(0.0993, 5)

        assert hi == pytest.approx(2.04, abs=2e-3)

    def test_build_box_scalar_alpha(self):
        """Test building a box for every user from one alpha."""
        box = build_box(0.1, n=3, N=4)

        assert box.shape == (3, 4)
        assert box.alpha == pytest.approx([0.1] * 3)
        assert np.all(box.hi == box.hi[0, 0])
        assert box.joint_probability() == pytest.approx([0.9] * 3, abs=1e-12)

    def test_build_box_per_user_alpha(self):
        """Test that smaller budgets give wider rows."""
        box = build_box([0.2, 0.05], n=2, N=3)

        assert box.hi[1, 0] > box.hi[0, 0]

    def test_build_box_two_sided(self):
        """Test two-sided coverage."""
        box = build_box(0.1, 2, 3, "two-sided")

        assert box.policy == BoxPolicy.TWO_SIDED
        assert box.joint_probability() == pytest.approx([0.9, 0.9], abs=1e-12)

    def test_box_from_probability(self):
        """Test building from a joint probability."""
        box = box_from_probability(0.94, 2, 5)

        assert box.hi[0, 0] == pytest.approx(2.25, abs=5e-3)


class TestBoxCoverageSampling:
    """Tests comparing analytic box coverage with sampled standard normal rows."""

    SAMPLES = 100_000

    def _tolerance(self, p):
        return 3.0 * np.sqrt(p * (1.0 - p) / self.SAMPLES)

    def test_one_sided_with_association(self):
        """Test that serving-below / interferer-above coverage matches sampling."""
        box = build_box(0.0993, 2, 3)
        assoc = Association(serving=[0, 2])
        rng = np.random.default_rng(11)
        rho = rng.standard_normal((self.SAMPLES, 2, 3))

        expected = box.joint_probability(assoc)
        for i, j in enumerate(assoc.serving):
            inside = rho[:, i, :] <= box.hi[i]
            inside[:, j] = rho[:, i, j] >= box.lo[i, j]
            empirical = inside.all(axis=1).mean()

            assert abs(empirical - expected[i]) <= self._tolerance(expected[i])

    def test_two_sided(self):
        """Test that two-sided coverage matches sampling."""
        box = build_box(0.1, 2, 3, "two-sided")
        rng = np.random.default_rng(12)
        rho = rng.standard_normal((self.SAMPLES, 2, 3))

        inside = ((rho >= box.lo) & (rho <= box.hi)).all(axis=2)
        expected = box.joint_probability()

        for i in range(2):
            assert abs(inside[:, i].mean() - expected[i]) <= self._tolerance(expected[i])
