from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from ..models.result import SolveResult
from ..models.scenario import Association, Scenario
from ..models.uncertainty import BoxPolicy, GainDistribution, UncertaintyBox, ViolationReport
from ..network.audit import check_shapes
from ..network.channel import C_DB
from ..utils.performance_logger import PerformanceContext
from .sampling import sample_user_rho


def _outside(rho: np.ndarray, lo: np.ndarray, hi: np.ndarray, j: int, policy: BoxPolicy):
    """Mask of draws (rows of rho) leaving the box of one user served by j"""
    interferers = np.ones(rho.shape[-1], dtype=bool)
    interferers[j] = False
    outside = rho[:, j] < lo[j]
    outside |= np.any(rho[:, interferers] > hi[interferers], axis=1)
    if policy == BoxPolicy.TWO_SIDED:
        outside |= rho[:, j] > hi[j]
        outside |= np.any(rho[:, interferers] < lo[interferers], axis=1)
    return outside


def box_coverage(rho: np.ndarray, box: UncertaintyBox, assoc: Association) -> np.ndarray:
    """Per-user fraction of draws outside the box; rho has shape (samples, n, N)"""
    rho = np.asarray(rho, dtype=float)
    if rho.ndim != 3 or rho.shape[1:] != box.shape:
        raise ValueError(f"rho must have shape (samples, {box.shape[0]}, {box.shape[1]})")
    lo, hi = box.lo, box.hi
    return np.array(
        [
            _outside(rho[:, i, :], lo[i], hi[i], j, box.policy).mean()
            for i, j in enumerate(assoc.serving)
        ]
    )


class _UserEvaluator:
    """Throughput draws of single users for a fixed solution"""

    def __init__(self, result: SolveResult, scenario: Scenario, dist: GainDistribution,
                 samples: int, seed: int, sigma_scale: float):
        self.P = result.powers
        self.x = result.allocation
        self.serving = result.assoc.serving
        self.scenario = scenario
        self.dist = dist
        self.samples = samples
        self.seed = seed
        self.sigma_scale = sigma_scale

    def __call__(self, i: int) -> Tuple[np.ndarray, np.ndarray]:
        scenario = self.scenario
        j = self.serving[i]
        rho = sample_user_rho(self.dist, scenario.N, self.samples, self.seed, i)
        g = np.exp(C_DB * (scenario.mu[i] + rho * (scenario.sigma[i] * self.sigma_scale)))
        received = g * self.P
        signal = received[:, j]
        interference = scenario.noise_w + received.sum(axis=1) - signal
        share = self.x[i, j] * scenario.B[j]
        throughput = share * np.log2(1.0 + signal / interference)
        return throughput, rho


def _throughput_draws(result, scenario, dist, samples, seed, sigma_scale, workers):
    evaluator = _UserEvaluator(result, scenario, dist, samples, seed, sigma_scale)
    users = range(scenario.n)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(evaluator, users))
    return [evaluator(i) for i in users]


def validate(
    result: SolveResult,
    scenario: Scenario,
    dist: GainDistribution,
    samples: int,
    seed: int,
    box: Optional[UncertaintyBox] = None,
    demand_factor: float = 1.0,
    sigma_scale: float = 1.0,
    workers: int = 1,
) -> ViolationReport:
    """Monte Carlo throughput violations of a fixed (P, x, assoc).

    A (user, draw) pair violates when its Shannon throughput under the drawn
    gains falls below demand_factor * r_i. With a box, the same draws also
    yield each user's outside-box fraction.
    """
    check_shapes(result, scenario)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    with PerformanceContext("monte carlo validation", {"samples": samples, "dist": dist.label}):
        draws = _throughput_draws(result, scenario, dist, samples, seed, sigma_scale, workers)

    demand = scenario.r * demand_factor
    violations = np.array([np.mean(t < demand[i]) for i, (t, _) in enumerate(draws)])
    outside = None
    if box is not None:
        lo, hi = box.lo, box.hi
        outside = np.array(
            [
                _outside(rho, lo[i], hi[i], result.assoc.serving[i], box.policy).mean()
                for i, (_, rho) in enumerate(draws)
            ]
        )
    report = ViolationReport(
        dist=dist.label,
        samples=samples,
        seed=seed,
        demand_factor=demand_factor,
        per_user_violation=violations.tolist(),
        overall_violation=float(violations.mean()),
        per_user_outside=None if outside is None else outside.tolist(),
        overall_outside=None if outside is None else float(outside.mean()),
    )
    logger.info(
        f"validation ({dist.label}, {samples} samples): "
        f"{100 * report.overall_violation:.3f}% violations"
    )
    return report


def demand_stress(
    result: SolveResult,
    scenario: Scenario,
    dist: GainDistribution,
    factors: Sequence[float],
    samples: int,
    seed: int,
    sigma_scale: float = 1.0,
    workers: int = 1,
) -> pd.DataFrame:
    """Overall violation fraction with demands scaled by each factor, solution held fixed"""
    factors = [float(f) for f in factors]
    if not factors:
        raise ValueError("at least one demand factor is required")
    if any(f < 1.0 for f in factors):
        raise ValueError("demand factors must be at least 1")
    check_shapes(result, scenario)
    with PerformanceContext("demand stress", {"factors": len(factors), "samples": samples}):
        draws = _throughput_draws(result, scenario, dist, samples, seed, sigma_scale, workers)

    rows: List[dict] = []
    for factor in factors:
        demand = scenario.r * factor
        fraction = float(np.mean([np.mean(t < demand[i]) for i, (t, _) in enumerate(draws)]))
        rows.append(
            {
                "demand_factor": factor,
                "dist": dist.label,
                "violation_fraction": fraction,
                "violation_pct": 100.0 * fraction,
            }
        )
    return pd.DataFrame(rows)
