"""Piecewise monomial lower envelopes of the Shannon rate log2(1 + s)."""

from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ..exceptions import CertificationError
from ..models.approximation import CertificationReport, PiecewiseApprox

CERTIFICATION_GRID = 4096
CERTIFICATION_SLACK = 1e-9
DEFAULT_RANGE = (0.01, 100.0)
# Published coefficients carry four decimals; their envelope overshoots the
# rate by about 1.1e-5 where the first two pieces meet near s = 0.05.
PRESET_ROUNDING_SLACK = 5e-5

PAPER_M5 = PiecewiseApprox(
    a=[1.4080, 0.7720, 1.3436, 2.0641, 2.8584],
    b=[1.0, 0.7994, 0.3928, 0.2538, 0.1840],
    s_min=0.01,
    s_max=100.0,
    name="paper-m5",
)

PRESETS: Dict[str, PiecewiseApprox] = {"paper-m5": PAPER_M5}


def rate(s):
    """Spectral efficiency log2(1 + s) in bits/s/Hz"""
    return np.log1p(s) / np.log(2.0)


def _positive(s, name: str = "s") -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(s)) or np.any(s <= 0):
        raise ValueError(f"{name} must be finite and positive")
    return s


def tangent_monomial(s0: float) -> Tuple[float, float]:
    """Monomial a * s**b touching log2(1 + s) at s0 with matching slope"""
    _positive(s0, "s0")
    log1p = np.log1p(s0)
    b = s0 / ((1.0 + s0) * log1p)
    a = rate(s0) / s0**b
    return float(a), float(b)


def chord_monomial(s_lo: float, s_hi: float) -> Tuple[float, float]:
    """Monomial through (s_lo, rate(s_lo)) and (s_hi, rate(s_hi)) in log-log space"""
    _positive([s_lo, s_hi], "chord endpoints")
    if not s_lo < s_hi:
        raise ValueError("chord endpoints must satisfy s_lo < s_hi")
    b = (np.log(rate(s_hi)) - np.log(rate(s_lo))) / (np.log(s_hi) - np.log(s_lo))
    a = rate(s_lo) / s_lo**b
    return float(a), float(b)


def fit_piecewise(
    m: int,
    s_min: float = DEFAULT_RANGE[0],
    s_max: float = DEFAULT_RANGE[1],
    anchors: Optional[Sequence[float]] = None,
    certify: bool = True,
) -> PiecewiseApprox:
    """Fit an m-monomial envelope exact at geometrically spaced breakpoints.

    The rate is concave in log-log coordinates, so chords between adjacent
    breakpoints stay below it; for m >= 2 a slope-one piece through
    (s_min, rate(s_min)) extends the bound below s_min. Explicit anchors
    yield tangent monomials instead, which lie above the rate away from
    their anchor and so only pass certification when certify is False.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if not 0 < s_min < s_max:
        raise ValueError("range must satisfy 0 < s_min < s_max")

    if anchors is not None:
        points = [float(v) for v in anchors]
        if len(points) != m:
            raise ValueError(f"expected {m} anchors, got {len(points)}")
        pairs = [tangent_monomial(s0) for s0 in points]
        name = f"tangent:{m}"
    elif m == 1:
        points = [s_min, s_max]
        pairs = [chord_monomial(s_min, s_max)]
        name = f"fit:1,{s_min:g},{s_max:g}"
    else:
        points = np.geomspace(s_min, s_max, m).tolist()
        pairs = [(float(rate(s_min) / s_min), 1.0)]
        pairs += [chord_monomial(lo, hi) for lo, hi in zip(points[:-1], points[1:])]
        name = f"fit:{m},{s_min:g},{s_max:g}"

    pw = PiecewiseApprox(
        a=[p[0] for p in pairs],
        b=[p[1] for p in pairs],
        s_min=s_min,
        s_max=s_max,
        name=name,
        anchors=points,
    )
    if certify:
        report = verify_lower_bound(pw)
        if not report.passed:
            raise CertificationError(
                f"Envelope exceeds log2(1+s) by {report.max_excess:.3e} at s={report.worst_s:.6g}",
                s_point=report.worst_s,
                excess=report.max_excess,
            )
        logger.debug(f"fitted {name}: max excess {report.max_excess:.2e}")
    return pw


def approx_value(pw: PiecewiseApprox, s):
    """Envelope min_l a_l * s**b_l"""
    s = _positive(s)
    values = np.min(pw.a_arr * s[..., None] ** pw.b_arr, axis=-1)
    return float(values) if values.ndim == 0 else values


def verify_lower_bound(
    pw: PiecewiseApprox,
    s_min: Optional[float] = None,
    s_max: Optional[float] = None,
    grid_points: int = CERTIFICATION_GRID,
    slack: float = CERTIFICATION_SLACK,
) -> CertificationReport:
    """Check envelope <= log2(1 + s) on a log-spaced grid"""
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    lo = pw.s_min if s_min is None else s_min
    hi = pw.s_max if s_max is None else s_max
    if not 0 < lo < hi:
        raise ValueError("range must satisfy 0 < s_min < s_max")
    grid = np.geomspace(lo, hi, grid_points)
    excess = approx_value(pw, grid) - rate(grid)
    worst = int(np.argmax(excess))
    return CertificationReport(
        passed=bool(excess[worst] <= slack),
        max_excess=float(excess[worst]),
        worst_s=float(grid[worst]),
        s_min=lo,
        s_max=hi,
        grid_points=grid_points,
        slack=slack,
    )


def a_coefficient(B_j, r_i, a_l, b_l):
    """log(B_j a_l / r_i) / b_l, the right-hand side of a throughput constraint"""
    _positive([np.min(B_j), np.min(r_i), np.min(a_l), np.min(b_l)], "inputs")
    value = np.log(np.asarray(B_j) * np.asarray(a_l) / np.asarray(r_i)) / np.asarray(b_l)
    return float(value) if np.ndim(value) == 0 else value


def inverse_rate(pw: PiecewiseApprox, target):
    """Smallest s whose envelope value reaches target: max_l (target/a_l)**(1/b_l)"""
    target = _positive(target, "target")
    values = np.max((target[..., None] / pw.a_arr) ** (1.0 / pw.b_arr), axis=-1)
    return float(values) if values.ndim == 0 else values


def get_preset(name: str) -> PiecewiseApprox:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"Unknown approximation preset '{name}'; known: {sorted(PRESETS)}")
