"""
Unit tests for Monte Carlo validation, box coverage and demand stress.
"""

import numpy as np
import pytest

from src.hetnet_power.models import Association, SolveResult
from src.hetnet_power.models.uncertainty import GainDistribution
from src.hetnet_power.montecarlo import box_coverage, demand_stress, sample_rho, validate
from src.hetnet_power.robust.box import build_box

LOGNORMAL = GainDistribution()
DIAGONAL = Association(serving=[0, 1])


def _result(P):
    return SolveResult(P=P, x=[[1.0, 0.0], [0.0, 1.0]], assoc=DIAGONAL, objective=float(sum(P)))


@pytest.fixture
def generous_result():
    """Powers far above what the two-cell demands need."""
    return _result([1e-3, 1e-3])


@pytest.fixture
def starved_result():
    """Powers far too small to carry any demand."""
    return _result([1e-15, 1e-15])


class TestValidate:
    """Tests for validate."""

    def test_generous_powers_never_violate(self, generous_result, two_cell_scenario):
        """Test zero violations with a wide margin."""
        report = validate(generous_result, two_cell_scenario, LOGNORMAL, 2000, seed=1)

        assert report.overall_violation == 0.0
        assert report.per_user_violation == [0.0, 0.0]

    def test_starved_powers_always_violate(self, starved_result, two_cell_scenario):
        """Test full violation without enough power."""
        report = validate(starved_result, two_cell_scenario, LOGNORMAL, 500, seed=1)

        assert report.overall_violation == 1.0

    def test_worker_count_does_not_change_results(self, two_cell_scenario):
        """Test that threading leaves the report unchanged."""
        result = _result([2e-6, 2e-5])

        serial = validate(result, two_cell_scenario, LOGNORMAL, 3000, seed=5, workers=1)
        threaded = validate(result, two_cell_scenario, LOGNORMAL, 3000, seed=5, workers=4)

        assert serial == threaded

    def test_same_seed_reproduces(self, two_cell_scenario):
        """Test that validation is deterministic in the seed."""
        result = _result([2e-6, 2e-5])
        dist = GainDistribution.parse("student:2")

        a = validate(result, two_cell_scenario, dist, 1000, seed=3)
        b = validate(result, two_cell_scenario, dist, 1000, seed=3)

        assert a.per_user_violation == b.per_user_violation
        assert a.dist == "student:2"

    def test_sigma_scale_zero_is_all_or_nothing(self, two_cell_scenario):
        """Test that without uncertainty each user either always or never violates."""
        result = _result([2e-6, 2e-5])

        report = validate(result, two_cell_scenario, LOGNORMAL, 200, seed=0, sigma_scale=0.0)

        assert all(v in (0.0, 1.0) for v in report.per_user_violation)

    def test_outside_box_matches_box_coverage(self, generous_result, two_cell_scenario):
        """Test that validation reuses the draws box_coverage would see."""
        box = build_box(0.1, 2, 2)

        report = validate(generous_result, two_cell_scenario, LOGNORMAL, 4000, seed=8, box=box)
        rho = sample_rho(LOGNORMAL, 2, 2, 4000, seed=8)

        np.testing.assert_allclose(report.per_user_outside, box_coverage(rho, box, DIAGONAL))
        assert report.overall_outside == pytest.approx(np.mean(report.per_user_outside))

    def test_requires_samples(self, generous_result, two_cell_scenario):
        """Test that zero samples is rejected."""
        with pytest.raises(ValueError):
            validate(generous_result, two_cell_scenario, LOGNORMAL, 0, seed=0)

    def test_report_frame(self, generous_result, two_cell_scenario):
        """Test the long-format frame with its summary row."""
        report = validate(generous_result, two_cell_scenario, LOGNORMAL, 100, seed=0)

        frame = report.to_frame("det")

        assert list(frame["user_id"]) == ["0", "1", "all"]
        assert set(frame["result"]) == {"det"}
        assert frame["outside_box_pct"].isna().all()


class TestBoxCoverage:
    """Tests for box_coverage."""

    def test_centre_is_inside(self):
        """Test that zero deviations never leave the box."""
        box = build_box(0.1, 2, 2)

        assert np.all(box_coverage(np.zeros((10, 2, 2)), box, DIAGONAL) == 0.0)

    def test_serving_below_lower_bound(self):
        """Test that a weak serving gain counts as outside."""
        box = build_box(0.1, 2, 2)
        rho = np.zeros((4, 2, 2))
        rho[:, 0, 0] = box.lo[0, 0] - 0.1

        np.testing.assert_array_equal(box_coverage(rho, box, DIAGONAL), [1.0, 0.0])

    def test_one_sided_ignores_strong_serving_gain(self):
        """Test that only the harmful side counts under the one-sided policy."""
        rho = np.zeros((4, 2, 2))
        rho[:, 1, 1] = 10.0

        one_sided = box_coverage(rho, build_box(0.1, 2, 2, "one-sided"), DIAGONAL)
        two_sided = box_coverage(rho, build_box(0.1, 2, 2, "two-sided"), DIAGONAL)

        assert one_sided[1] == 0.0
        assert two_sided[1] == 1.0

    @pytest.mark.parametrize("policy", ["one-sided", "two-sided"])
    def test_coverage_matches_budget(self, policy):
        """Test that the outside fraction of normal draws is close to alpha."""
        box = build_box(0.1, 2, 2, policy)
        rho = sample_rho(LOGNORMAL, 2, 2, 20000, seed=4)

        outside = box_coverage(rho, box, DIAGONAL)

        np.testing.assert_allclose(outside, 0.1, atol=0.01)

    def test_shape_mismatch(self):
        """Test that rho must be (samples, n, N)."""
        with pytest.raises(ValueError):
            box_coverage(np.zeros((10, 2)), build_box(0.1, 2, 2), DIAGONAL)


class TestDemandStress:
    """Tests for demand_stress."""

    def test_violations_grow_with_demand(self, two_cell_scenario):
        """Test that scaling demand up never lowers the violation fraction."""
        result = _result([2e-6, 2e-5])

        frame = demand_stress(
            result, two_cell_scenario, LOGNORMAL, [1.0, 1.5, 2.0, 4.0], 2000, seed=2
        )

        assert list(frame.columns) == [
            "demand_factor",
            "dist",
            "violation_fraction",
            "violation_pct",
        ]
        fractions = frame["violation_fraction"].tolist()
        assert all(a <= b for a, b in zip(fractions, fractions[1:]))
        assert frame["violation_pct"].tolist() == pytest.approx([100 * f for f in fractions])

    def test_first_factor_matches_validate(self, two_cell_scenario):
        """Test that factor 1 reproduces the plain validation."""
        result = _result([2e-6, 2e-5])

        frame = demand_stress(result, two_cell_scenario, LOGNORMAL, [1.0], 1500, seed=6)
        report = validate(result, two_cell_scenario, LOGNORMAL, 1500, seed=6)

        assert frame["violation_fraction"][0] == pytest.approx(report.overall_violation)

    @pytest.mark.parametrize("factors", [[], [0.5, 1.0]])
    def test_invalid_factors(self, generous_result, two_cell_scenario, factors):
        """Test that empty or shrinking factors are rejected."""
        with pytest.raises(ValueError):
            demand_stress(generous_result, two_cell_scenario, LOGNORMAL, factors, 100, seed=0)
