from .piecewise import (
    CERTIFICATION_GRID,
    CERTIFICATION_SLACK,
    PAPER_M5,
    PRESET_ROUNDING_SLACK,
    PRESETS,
    a_coefficient,
    approx_value,
    chord_monomial,
    fit_piecewise,
    get_preset,
    inverse_rate,
    rate,
    tangent_monomial,
    verify_lower_bound,
)
from .registry import resolve_approx

__all__ = [
    "PAPER_M5",
    "PRESETS",
    "CERTIFICATION_GRID",
    "CERTIFICATION_SLACK",
    "PRESET_ROUNDING_SLACK",
    "rate",
    "tangent_monomial",
    "chord_monomial",
    "fit_piecewise",
    "approx_value",
    "verify_lower_bound",
    "a_coefficient",
    "inverse_rate",
    "get_preset",
    "resolve_approx",
]
