from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class PiecewiseApprox(BaseModel):
    """Monomial envelope min_l a_l * s**b_l of the rate log2(1 + s)"""

    model_config = ConfigDict(frozen=True)

    a: List[float] = Field(..., min_length=1, description="Monomial scales a_l > 0")
    b: List[float] = Field(..., min_length=1, description="Monomial exponents in (0, 1]")
    s_min: float = Field(..., gt=0, description="Certified SINR range start")
    s_max: float = Field(..., gt=0, description="Certified SINR range end")
    name: Optional[str] = Field(None, description="Preset or fit label")
    anchors: List[float] = Field(
        default_factory=list, description="SINR points where the envelope is exact"
    )

    @field_validator("a")
    @classmethod
    def validate_a(cls, v):
        if any(not np.isfinite(x) or x <= 0 for x in v):
            raise ValueError("a coefficients must be finite and positive")
        return v

    @field_validator("b")
    @classmethod
    def validate_b(cls, v):
        if any(not 0 < x <= 1 for x in v):
            raise ValueError("b exponents must lie in (0, 1]")
        return v

    @model_validator(mode="after")
    def validate_lengths(self):
        if len(self.a) != len(self.b):
            raise ValueError("a and b must have the same length")
        if self.s_min >= self.s_max:
            raise ValueError("s_min must be smaller than s_max")
        return self

    @property
    def m(self) -> int:
        return len(self.a)

    @property
    def a_arr(self) -> np.ndarray:
        return np.asarray(self.a, dtype=float)

    @property
    def b_arr(self) -> np.ndarray:
        return np.asarray(self.b, dtype=float)


class CertificationReport(BaseModel):
    """Grid check of the envelope against log2(1 + s)"""

    passed: bool
    max_excess: float = Field(..., description="max over grid of envelope - rate")
    worst_s: float = Field(..., description="Grid point attaining max_excess")
    s_min: float
    s_max: float
    grid_points: int
    slack: float = 1e-9
