"""Grid runner for objective-versus-sigma and objective-versus-probability curves."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
from loguru import logger

from .exceptions import HetNetError, SolverError
from .models.scenario import Scenario
from .models.uncertainty import BoxPolicy, RobustConfig
from .planner import AssocSpec, PowerPlanner
from .robust.box import box_from_probability
from .utils.performance_logger import PerformanceContext

SWEEP_COLUMNS = [
    "sweep",
    "index",
    "sigma_db",
    "probability",
    "alpha",
    "rho",
    "joint_probability",
    "objective",
    "status",
    "message",
]


@dataclass(frozen=True)
class GridPoint:
    sweep: str
    index: int
    sigma_db: Optional[float]
    probability: float


def _run_point(
    planner: PowerPlanner,
    scenario: Scenario,
    point: GridPoint,
    policy: BoxPolicy,
    assoc: AssocSpec,
) -> dict:
    box = box_from_probability(point.probability, scenario.n, scenario.N, policy)
    alpha = box.alpha[0]
    local = scenario if point.sigma_db is None else scenario.with_uniform_sigma(point.sigma_db)
    row = {
        "sweep": point.sweep,
        "index": point.index,
        "sigma_db": point.sigma_db if point.sigma_db is not None else float(np.max(scenario.sigma)),
        "probability": point.probability,
        "alpha": alpha,
        "rho": float(box.hi[0, 0]),
        "joint_probability": float(box.joint_probability()[0]),
        "objective": np.nan,
        "status": "optimal",
        "message": "",
    }
    try:
        result = planner.solve(local, "robust", RobustConfig(alpha=alpha, policy=policy), assoc)
        row["objective"] = result.objective
        row["status"] = result.status.value
    except SolverError as e:
        row["status"] = e.status
        row["message"] = str(e)
    except HetNetError as e:
        row["status"] = "error"
        row["message"] = str(e)
    logger.info(
        f"sweep {point.sweep}[{point.index}]: sigma={row['sigma_db']} "
        f"p={point.probability} -> {row['status']} {row['objective']}"
    )
    return row


def sweep_grid(
    sigma_values: Sequence[float] = (),
    probabilities: Sequence[float] = (),
    fixed_probability: float = 0.9,
    fixed_sigma: Optional[float] = None,
) -> List[GridPoint]:
    """Sigma grid at fixed probability, then probability grid at fixed sigma"""
    if not sigma_values and not probabilities:
        raise ValueError("at least one grid must be non-empty")
    for p in list(probabilities) + [fixed_probability]:
        if not 0 < p < 1:
            raise ValueError(f"probability {p} must lie strictly between 0 and 1")
    if any(s < 0 for s in sigma_values):
        raise ValueError("sigma values must be non-negative")
    points = [GridPoint("sigma", k, float(s), fixed_probability) for k, s in enumerate(sigma_values)]
    points += [
        GridPoint("probability", k, fixed_sigma, float(p)) for k, p in enumerate(probabilities)
    ]
    return points


def run_sweep(
    planner: PowerPlanner,
    scenario: Scenario,
    sigma_values: Sequence[float] = (),
    probabilities: Sequence[float] = (),
    fixed_probability: float = 0.9,
    fixed_sigma: Optional[float] = None,
    policy: BoxPolicy = BoxPolicy.ONE_SIDED,
    assoc: AssocSpec = "greedy",
    workers: int = 1,
) -> pd.DataFrame:
    """Long-format table with one row per grid point, in grid order"""
    points = sweep_grid(sigma_values, probabilities, fixed_probability, fixed_sigma)
    policy = BoxPolicy(policy)
    with PerformanceContext("sweep", {"points": len(points), "workers": workers}):
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(
                    pool.map(lambda p: _run_point(planner, scenario, p, policy, assoc), points)
                )
        else:
            rows = [_run_point(planner, scenario, p, policy, assoc) for p in points]
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)
