from typing import Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ..models.uncertainty import BoxPolicy, UncertaintyBox
from .probability import half_width, per_bs_factor


def box_from_alpha(
    alpha_i: float, N: int, policy: Union[BoxPolicy, str] = BoxPolicy.ONE_SIDED
) -> Tuple[float, float]:
    """(rho_lo, rho_hi) of one user for violation budget alpha_i over N BSs"""
    rho = half_width(per_bs_factor(alpha_i, N), BoxPolicy(policy))
    return -rho, rho


def build_box(
    alpha: Union[float, Sequence[float]],
    n: int,
    N: int,
    policy: Union[BoxPolicy, str] = BoxPolicy.ONE_SIDED,
) -> UncertaintyBox:
    """Uncertainty box for every user, alpha scalar or per user"""
    policy = BoxPolicy(policy)
    alphas = np.broadcast_to(np.asarray(alpha, dtype=float), (n,))
    lo = np.empty((n, N))
    hi = np.empty((n, N))
    phi = []
    for i, a in enumerate(alphas):
        lo[i, :], hi[i, :] = box_from_alpha(float(a), N, policy)
        phi.append(per_bs_factor(float(a), N))
    box = UncertaintyBox(
        policy=policy,
        alpha=alphas.tolist(),
        phi=phi,
        rho_lo=lo.tolist(),
        rho_hi=hi.tolist(),
    )
    logger.debug(
        f"{policy.value} box: alpha={alphas[0]:.4g} phi={phi[0]:.6f} rho={hi[0, 0]:.4f}"
    )
    return box


def box_from_probability(
    joint: float, n: int, N: int, policy: Union[BoxPolicy, str] = BoxPolicy.ONE_SIDED
) -> UncertaintyBox:
    """Box whose per-user joint coverage equals the given probability"""
    return build_box(1.0 - joint, n, N, policy)

