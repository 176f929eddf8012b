"""Reproducible sampling of normalized gain deviations.

Each user owns a counter-based Philox stream keyed by (seed, user), so the
samples of user i never depend on how many users or workers there are.
"""

import numpy as np

from ..models.scenario import Scenario
from ..models.uncertainty import GainDistribution
from ..network.channel import C_DB


def user_generator(seed: int, user: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, user])))


def sample_user_rho(
    dist: GainDistribution, N: int, samples: int, seed: int, user: int
) -> np.ndarray:
    """(samples, N) deviations of one user"""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = user_generator(seed, user)
    if dist.kind == "uniform":
        return rng.uniform(-dist.k, dist.k, size=(samples, N))
    if dist.kind == "student_t":
        return rng.standard_t(dist.dof, size=(samples, N))
    return rng.standard_normal(size=(samples, N))


def sample_rho(dist: GainDistribution, n: int, N: int, samples: int, seed: int) -> np.ndarray:
    """(samples, n, N) deviation tensor assembled from the per-user streams"""
    return np.stack(
        [sample_user_rho(dist, N, samples, seed, i) for i in range(n)], axis=1
    )


def gains_from_rho(scenario: Scenario, rho: np.ndarray, sigma_scale: float = 1.0) -> np.ndarray:
    """g = exp(c (mu + rho * sigma * sigma_scale)), broadcast over leading axes"""
    rho = np.asarray(rho, dtype=float)
    if rho.shape[-2:] != (scenario.n, scenario.N):
        raise ValueError(f"rho must end in shape {(scenario.n, scenario.N)}, got {rho.shape}")
    return np.exp(C_DB * (scenario.mu + rho * (scenario.sigma * sigma_scale)))
