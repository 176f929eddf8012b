import numpy as np
from scipy.special import ndtr, ndtri

from ..models.uncertainty import BoxPolicy


def normal_cdf(x):
    """Standard normal CDF"""
    value = ndtr(np.asarray(x, dtype=float))
    return float(value) if np.ndim(value) == 0 else value


def inv_normal_cdf(p):
    """Standard normal quantile; p must lie strictly inside (0, 1)"""
    p_arr = np.asarray(p, dtype=float)
    if np.any(~(p_arr > 0)) or np.any(~(p_arr < 1)):
        raise ValueError("probability must lie strictly between 0 and 1")
    value = ndtri(p_arr)
    return float(value) if np.ndim(value) == 0 else value


def per_bs_factor(alpha: float, N: int) -> float:
    """Equal split phi = (1 - alpha) ** (1 / N) of a joint probability"""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie strictly between 0 and 1")
    if N < 1:
        raise ValueError("N must be at least 1")
    return float((1.0 - alpha) ** (1.0 / N))


def half_width(phi: float, policy: BoxPolicy = BoxPolicy.ONE_SIDED) -> float:
    """rho such that one interval covers probability phi.

    One-sided: Phi(rho) = phi. Two-sided: Phi(rho) - Phi(-rho) = phi.
    phi == 1 (alpha below floating resolution) gives an unbounded interval.
    """
    if not 0 < phi <= 1:
        raise ValueError("phi must lie in (0, 1]")
    if phi >= 1.0:
        return float(np.inf)
    if BoxPolicy(policy) == BoxPolicy.TWO_SIDED:
        return float(ndtri((1.0 + phi) / 2.0))
    return float(ndtri(phi))


def joint_probability(rho: float, N: int, policy: BoxPolicy = BoxPolicy.ONE_SIDED) -> float:
    """Probability that N independent standard normals all fall in the box"""
    single = normal_cdf(rho)
    if BoxPolicy(policy) == BoxPolicy.TWO_SIDED:
        single = 2.0 * single - 1.0
    return float(single**N)
