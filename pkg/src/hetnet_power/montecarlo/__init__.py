from .sampling import gains_from_rho, sample_rho, sample_user_rho, user_generator
from .validation import box_coverage, demand_stress, validate

__all__ = [
    "user_generator",
    "sample_user_rho",
    "sample_rho",
    "gains_from_rho",
    "validate",
    "box_coverage",
    "demand_stress",
]
