"""
Unit tests for configuration settings.
"""

import pytest
from pydantic import ValidationError

from src.hetnet_power.utils.config import Settings, get_config, set_config


class TestSettings:
    """Tests for Settings."""

    def test_defaults(self):
        """Test the default configuration."""
        settings = Settings(_env_file=None)

        assert settings.log_level == "INFO"
        assert settings.solver_tol == 1e-8
        assert settings.barrier_growth == 10.0
        assert settings.approx == "paper-m5"
        assert settings.box_policy == "one-sided"
        assert settings.mc_samples == 100_000
        assert settings.node_limit == 10_000

    def test_env_file(self, temp_env_file):
        """Test loading values from an env file."""
        settings = Settings(_env_file=str(temp_env_file))

        assert settings.log_level == "DEBUG"
        assert settings.mc_samples == 500
        assert settings.seed == 11
        assert settings.box_policy == "two-sided"

    def test_environment_variables(self, monkeypatch):
        """Test that HETNET_* variables override defaults."""
        monkeypatch.setenv("HETNET_WORKERS", "4")
        monkeypatch.setenv("HETNET_GAP_TARGET", "0.01")

        settings = Settings(_env_file=None)

        assert settings.workers == 4
        assert settings.gap_target == 0.01

    def test_log_level_is_normalized(self):
        """Test that log levels are upper-cased."""
        assert Settings(_env_file=None, log_level="debug").log_level == "DEBUG"

    @pytest.mark.parametrize(
        "field,value",
        [
            ("log_level", "VERBOSE"),
            ("solver_tol", 0.0),
            ("barrier_growth", 1.0),
            ("mc_samples", 0),
            ("workers", 0),
            ("box_policy", "sideways"),
        ],
    )
    def test_invalid_values(self, field, value):
        """Test that invalid settings are rejected."""
        with pytest.raises(ValidationError):
            Settings(_env_file=None, **{field: value})

    def test_solver_options(self):
        """Test that solver settings reach the solver options."""
        options = Settings(_env_file=None, solver_tol=1e-6, max_newton_iters=50).solver_options()

        assert options.tol == 1e-6
        assert options.max_newton_iters == 50


class TestGlobalConfig:
    """Tests for the process-wide config instance."""

    def test_set_then_get(self):
        """Test that set_config replaces the global instance."""
        settings = Settings(_env_file=None, seed=99)

        set_config(settings)

        assert get_config() is settings
