"""Physical-layer formulas: dB conversion, SINR and Shannon throughput."""

from typing import Sequence

import numpy as np

from ..models.scenario import Association

# Natural-log scale of one dB: g = exp(C_DB * g_db)
C_DB = np.log(10.0) / 10.0


def db_to_linear(g_db):
    """10 ** (g_db / 10), elementwise"""
    g_db = np.asarray(g_db, dtype=float)
    if not np.all(np.isfinite(g_db)):
        raise ValueError("dB values must be finite")
    result = np.exp(C_DB * g_db)
    return float(result) if result.ndim == 0 else result


def sinr(P: Sequence[float], g: Sequence[float], noise: float, j: int) -> float:
    """P_j g_j / (noise + sum_{k != j} P_k g_k) for one user"""
    P = np.asarray(P, dtype=float)
    g = np.asarray(g, dtype=float)
    if P.shape != g.shape or P.ndim != 1:
        raise ValueError("P and g must be vectors of equal length")
    if not 0 <= j < len(P):
        raise ValueError(f"Serving BS index {j} out of range for N={len(P)}")
    received = P * g
    interference = noise + received.sum() - received[j]
    return float(received[j] / interference)


def user_throughput(
    x_row: Sequence[float],
    P: Sequence[float],
    assoc: Association,
    g_row: Sequence[float],
    B: Sequence[float],
    noise: float,
    i: int,
) -> float:
    """x_ij B_j log2(1 + SINR_ij) at the serving BS j of user i"""
    x_row = np.asarray(x_row, dtype=float)
    if len(x_row) != len(P) or len(B) != len(P):
        raise ValueError("x row, P and B must have N entries")
    j = assoc.serving[i]
    share = x_row[j]
    if share <= 0:
        return 0.0
    return float(share * B[j] * np.log2(1.0 + sinr(P, g_row, noise, j)))


def serving_sinr(P, g, noise: float, serving) -> np.ndarray:
    """Per-user SINR at the serving BS.

    g may carry leading batch axes (..., n, N); the result has shape (..., n).
    """
    P = np.asarray(P, dtype=float)
    g = np.asarray(g, dtype=float)
    serving = np.asarray(serving, dtype=int)
    received = g * P
    total = received.sum(axis=-1)
    index = np.broadcast_to(serving, received.shape[:-1])[..., None]
    signal = np.take_along_axis(received, index, axis=-1)[..., 0]
    return signal / (noise + total - signal)


def throughput_vector(x, P, g, B, noise: float, serving) -> np.ndarray:
    """Per-user Shannon throughput with optional batch axes on g"""
    x = np.asarray(x, dtype=float)
    B = np.asarray(B, dtype=float)
    serving = np.asarray(serving, dtype=int)
    users = np.arange(len(serving))
    share = x[users, serving] * B[serving]
    return share * np.log2(1.0 + serving_sinr(P, g, noise, serving))
