"""
Pytest configuration and fixtures for the HetNet power planner tests.

This module provides small scenarios, approximation presets, configured
planners and assertion helpers shared across the unit and integration
suites.
"""

import os
from typing import Sequence

import numpy as np
import pytest

from src.hetnet_power.approx.piecewise import PAPER_M5
from src.hetnet_power.models.result import SolveResult
from src.hetnet_power.models.scenario import Association, Scenario
from src.hetnet_power.network.generator import gen_synthetic
from src.hetnet_power.planner import PowerPlanner
from src.hetnet_power.utils.config import Settings

# Keep test runs independent of a developer's .env
for key in list(os.environ):
    if key.startswith("HETNET_"):
        del os.environ[key]


@pytest.fixture
def paper_pw():
    """Fixture for the published five-piece approximation."""
    return PAPER_M5


@pytest.fixture
def two_cell_scenario():
    """Two base stations, two users, each close to its own cell."""
    return Scenario.from_arrays(
        bandwidth_hz=[20e6, 20e6],
        p_max_w=[1.0, 1.0],
        noise_w=1e-13,
        demand_bps=[1e6, 1.5e6],
        mu_db=[[-80.0, -100.0], [-100.0, -85.0]],
        sigma_db=2.0,
    )


@pytest.fixture
def single_link_scenario():
    """One user, one base station, no interference."""
    return Scenario.from_arrays(
        bandwidth_hz=[10e6],
        p_max_w=[1.0],
        noise_w=1e-13,
        demand_bps=[2e6],
        mu_db=[[-90.0]],
        sigma_db=3.0,
    )


@pytest.fixture
def clustered_scenario():
    """Six users clustered around three base stations."""
    return make_clustered(n=6, N=3, seed=3)


@pytest.fixture
def settings():
    """Fixture for a quiet, fast configuration."""
    return Settings(log_level="WARNING", mc_samples=2000, workers=1)


@pytest.fixture
def planner(settings):
    """Planner with the published approximation."""
    return PowerPlanner(settings)


@pytest.fixture
def temp_env_file(tmp_path):
    """Fixture for a temporary env-style configuration file."""
    env_file = tmp_path / "test.env"
    env_file.write_text(
        "HETNET_LOG_LEVEL=DEBUG\n"
        "HETNET_MC_SAMPLES=500\n"
        "HETNET_SEED=11\n"
        "HETNET_BOX_POLICY=two-sided\n"
    )
    return env_file


# Helpers shared by several suites


def make_clustered(
    n: int,
    N: int,
    seed: int,
    sigma_db: float = 2.0,
    demand_range=(0.2e6, 0.5e6),
) -> Scenario:
    """Clustered synthetic scenario with modest demands (comfortably feasible)"""
    return gen_synthetic(
        n,
        N,
        sigma_db=sigma_db,
        demand_range=demand_range,
        seed=seed,
        placement="clustered",
    )


def random_small_scenario(seed: int, n: int = 2, N: int = 2, sigma_db: float = 0.0) -> Scenario:
    """Random scenario with a dominant diagonal, served by BS i mod N"""
    rng = np.random.default_rng(seed)
    mu = rng.uniform(-110.0, -100.0, size=(n, N))
    for i in range(n):
        mu[i, i % N] = rng.uniform(-85.0, -75.0)
    return Scenario.from_arrays(
        bandwidth_hz=rng.uniform(10e6, 20e6, size=N),
        p_max_w=np.ones(N),
        noise_w=1e-13,
        demand_bps=rng.uniform(0.5e6, 2e6, size=n),
        mu_db=mu,
        sigma_db=sigma_db,
    )


def diagonal_assoc(n: int, N: int) -> Association:
    return Association(serving=[i % N for i in range(n)])


def assert_result_valid(result: SolveResult, scenario: Scenario):
    """Assert that a result is shaped for the scenario and respects its caps."""
    assert len(result.P) == scenario.N
    assert len(result.x) == scenario.n
    assert all(len(row) == scenario.N for row in result.x)
    assert np.all(result.powers > 0)
    assert np.all(result.powers <= scenario.p_max * (1 + 1e-9))
    assert np.all(result.allocation.sum(axis=0) <= 1 + 1e-9)
    assert result.objective == pytest.approx(float(np.sum(result.powers)), rel=1e-12)


def assert_close_relative(a: float, b: float, rel: float):
    assert abs(a - b) <= rel * max(abs(a), abs(b)), f"{a} vs {b} differ by more than {rel}"


def assert_sorted(values: Sequence[float], strict: bool = False):
    pairs = list(zip(values[:-1], values[1:]))
    if strict:
        assert all(a < b for a, b in pairs), values
    else:
        assert all(a <= b * (1 + 1e-9) for a, b in pairs), values


def pytest_configure(config):
    """Configure pytest with custom markers and settings."""
    config.addinivalue_line(
        "markers", "unit: marks tests as unit tests (deselect with '-m \"not unit\"')"
    )
    config.addinivalue_line(
        "markers",
        "integration: marks tests as integration tests (deselect with '-m \"not integration\"')",
    )
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )


def pytest_collection_modifyitems(config, items):
    """Modify test collection to add markers automatically."""
    for item in items:
        # Add unit marker to all unit test files
        if "unit" in str(item.fspath):
            item.add_marker(pytest.mark.unit)

        # Add integration marker to integration test files
        if "integration" in str(item.fspath):
            item.add_marker(pytest.mark.integration)

        # Large Monte Carlo runs and exhaustive searches
        if "acceptance" in str(item.fspath) or "large" in item.name:
            item.add_marker(pytest.mark.slow)
