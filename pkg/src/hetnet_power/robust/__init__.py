from .box import box_from_alpha, box_from_probability, build_box
from .formulation import (
    DEFAULT_LOG_FLOOR,
    FormulationBuilder,
    GainBounds,
    RelaxationLayout,
    build_migp,
    build_robust,
    fhat_value,
    worst_case_gains,
)
from .probability import (
    half_width,
    inv_normal_cdf,
    joint_probability,
    normal_cdf,
    per_bs_factor,
)

__all__ = [
    "normal_cdf",
    "inv_normal_cdf",
    "per_bs_factor",
    "half_width",
    "joint_probability",
    "box_from_alpha",
    "build_box",
    "box_from_probability",
    "GainBounds",
    "FormulationBuilder",
    "RelaxationLayout",
    "DEFAULT_LOG_FLOOR",
    "build_migp",
    "build_robust",
    "fhat_value",
    "worst_case_gains",
]
