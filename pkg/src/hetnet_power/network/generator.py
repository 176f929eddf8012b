from typing import Literal, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ..exceptions import ScenarioError
from ..models.scenario import Positions, Scenario

# Log-distance model reference distance (m)
REFERENCE_DISTANCE = 1.0


def pathloss_db(distance, pathloss_exponent: float, ref_loss_db: float):
    """Mean dB gain of the log-distance model, clamped at the reference distance"""
    d = np.maximum(np.asarray(distance, dtype=float), REFERENCE_DISTANCE)
    return -(ref_loss_db + 10.0 * pathloss_exponent * np.log10(d))


def _per_bs(value: Union[float, Sequence[float]], N: int, name: str) -> list:
    values = np.broadcast_to(np.asarray(value, dtype=float), (N,))
    if np.any(values <= 0):
        raise ScenarioError(f"{name} must be positive", field=name)
    return values.tolist()


def gen_synthetic(
    n: int,
    N: int,
    area_size: float = 500.0,
    pathloss_exponent: float = 3.5,
    ref_loss_db: float = 40.0,
    sigma_db: float = 3.0,
    demand_range: Tuple[float, float] = (0.5e6, 2e6),
    seed: int = 0,
    bandwidth_hz: Union[float, Sequence[float]] = 20e6,
    p_max_w: Union[float, Sequence[float]] = 1.0,
    noise_w: float = 1e-13,
    placement: Literal["uniform", "clustered"] = "uniform",
    cluster_radius: Optional[float] = None,
) -> Scenario:
    """Synthetic log-distance scenario in a square of side area_size.

    Base stations and users are placed uniformly at random. With
    placement="clustered" user i instead sits within cluster_radius of
    base station i mod N (clipped to the square). Draws happen in the
    fixed order BS positions, user positions, demands.
    """
    if n < 1:
        raise ScenarioError("n must be at least 1", field="n")
    if N < 1:
        raise ScenarioError("N must be at least 1", field="N")
    if not area_size > 0:
        raise ScenarioError("area_size must be positive", field="area_size")
    if not pathloss_exponent > 0:
        raise ScenarioError("pathloss_exponent must be positive", field="pathloss_exponent")
    if sigma_db < 0:
        raise ScenarioError("sigma_db must be non-negative", field="sigma_db")
    low, high = demand_range
    if not 0 < low <= high:
        raise ScenarioError("demand range must satisfy 0 < low <= high", field="demand_range")
    if placement not in ("uniform", "clustered"):
        raise ScenarioError(f"Unknown placement '{placement}'", field="placement")

    rng = np.random.default_rng(seed)
    bs = rng.uniform(0.0, area_size, size=(N, 2))
    if placement == "uniform":
        users = rng.uniform(0.0, area_size, size=(n, 2))
    else:
        radius = cluster_radius if cluster_radius is not None else 0.05 * area_size
        offsets = rng.uniform(-radius, radius, size=(n, 2))
        users = np.clip(bs[np.arange(n) % N] + offsets, 0.0, area_size)
    demands = rng.uniform(low, high, size=n)

    distance = np.linalg.norm(users[:, None, :] - bs[None, :, :], axis=-1)
    mu = pathloss_db(distance, pathloss_exponent, ref_loss_db)
    logger.debug(
        f"generated scenario n={n} N={N} seed={seed} placement={placement} "
        f"mu range [{mu.min():.1f}, {mu.max():.1f}] dB"
    )
    return Scenario(
        n=n,
        N=N,
        bandwidth_hz=_per_bs(bandwidth_hz, N, "bandwidth_hz"),
        p_max_w=_per_bs(p_max_w, N, "p_max_w"),
        noise_w=noise_w,
        demand_bps=demands.tolist(),
        mu_db=mu.tolist(),
        sigma_db=np.full((n, N), float(sigma_db)).tolist(),
        positions=Positions(users=users.tolist(), base_stations=bs.tolist()),
    )
