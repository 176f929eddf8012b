from enum import Enum
from typing import List, Literal, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.special import ndtr

from .scenario import Association


class BoxPolicy(str, Enum):
    ONE_SIDED = "one-sided"
    TWO_SIDED = "two-sided"


class UncertaintyBox(BaseModel):
    """Per-(user, BS) intervals on the normalized gain deviations rho.

    Under the one-sided policy the serving gain is bounded below by rho_lo
    and every interferer is bounded above by rho_hi; the other side is open.
    Under the two-sided policy both sides bound every gain.
    """

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    policy: BoxPolicy = BoxPolicy.ONE_SIDED
    alpha: List[float] = Field(..., description="Per-user violation budget")
    phi: List[float] = Field(..., description="Per-user per-BS probability factor")
    rho_lo: List[List[float]] = Field(..., description="n x N lower bounds")
    rho_hi: List[List[float]] = Field(..., description="n x N upper bounds")

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v):
        if any(not 0 <= a < 1 for a in v):
            raise ValueError("alpha entries must lie in [0, 1)")
        return v

    @model_validator(mode="after")
    def validate_bounds(self):
        lo = np.asarray(self.rho_lo, dtype=float)
        hi = np.asarray(self.rho_hi, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 2:
            raise ValueError("rho_lo and rho_hi must be matrices of equal shape")
        if lo.shape[0] != len(self.alpha) or len(self.phi) != len(self.alpha):
            raise ValueError("alpha, phi and the box rows must agree on n")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise ValueError("box bounds must not be NaN")
        if np.any(lo > hi):
            raise ValueError("rho_lo must not exceed rho_hi")
        return self

    @property
    def lo(self) -> np.ndarray:
        return np.asarray(self.rho_lo, dtype=float)

    @property
    def hi(self) -> np.ndarray:
        return np.asarray(self.rho_hi, dtype=float)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.lo.shape

    @property
    def target_probability(self) -> np.ndarray:
        return 1.0 - np.asarray(self.alpha, dtype=float)

    def interval(self, i: int, j: int, serving: bool) -> Tuple[float, float]:
        """Admissible rho interval of pair (i, j) in the given role"""
        lo, hi = self.rho_lo[i][j], self.rho_hi[i][j]
        if self.policy == BoxPolicy.TWO_SIDED:
            return lo, hi
        return (lo, np.inf) if serving else (-np.inf, hi)

    def joint_probability(self, assoc: Optional[Association] = None) -> np.ndarray:
        """Per-user probability that a standard normal rho row lies in the box"""
        lo, hi = self.lo, self.hi
        if self.policy == BoxPolicy.TWO_SIDED:
            factors = ndtr(hi) - ndtr(lo)
        elif assoc is None:
            factors = np.minimum(ndtr(-lo), ndtr(hi))
        else:
            factors = ndtr(hi)
            rows = np.arange(lo.shape[0])
            serving = np.asarray(assoc.serving)
            factors[rows, serving] = ndtr(-lo[rows, serving])
        return np.prod(factors, axis=1)


class RobustConfig(BaseModel):
    """Chance-constraint settings for a robust solve"""

    alpha: float = Field(0.0993, description="Per-user violation budget")
    sigma_scale: float = Field(1.0, ge=0, description="Multiplier on sigma_db")
    policy: BoxPolicy = BoxPolicy.ONE_SIDED

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v):
        if not 0 < v < 1:
            raise ValueError("alpha must lie strictly between 0 and 1")
        return v


class GainDistribution(BaseModel):
    """Distribution of the normalized gain deviations used for sampling"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["lognormal", "uniform", "student_t"] = "lognormal"
    k: float = Field(3.0, description="Uniform half-width in sigma units")
    dof: float = Field(2.0, description="Student's t degrees of freedom")

    @field_validator("k", "dof")
    @classmethod
    def validate_positive(cls, v, info):
        if not v > 0:
            raise ValueError(f"{info.field_name} must be positive")
        return v

    @classmethod
    def parse(cls, spec: str) -> "GainDistribution":
        """Parse 'lognormal', 'uniform[:k]' or 'student[:dof]'"""
        name, _, arg = spec.strip().lower().partition(":")
        try:
            if name == "lognormal" and not arg:
                return cls(kind="lognormal")
            if name == "uniform":
                return cls(kind="uniform", k=float(arg) if arg else 3.0)
            if name in ("student", "student_t", "t"):
                return cls(kind="student_t", dof=float(arg) if arg else 2.0)
        except ValueError as e:
            raise ValueError(f"Invalid distribution '{spec}': {e}") from e
        raise ValueError(
            f"Unknown distribution '{spec}'; use lognormal, uniform:<k> or student:<dof>"
        )

    @property
    def label(self) -> str:
        if self.kind == "uniform":
            return f"uniform:{self.k:g}"
        if self.kind == "student_t":
            return f"student:{self.dof:g}"
        return "lognormal"


class ViolationReport(BaseModel):
    """Monte Carlo throughput-violation statistics of one solution"""

    dist: str
    samples: int = Field(..., ge=1)
    seed: int
    demand_factor: float = 1.0
    per_user_violation: List[float]
    overall_violation: float
    per_user_outside: Optional[List[float]] = None
    overall_outside: Optional[float] = None

    @field_validator("per_user_violation", "per_user_outside")
    @classmethod
    def validate_fractions(cls, v):
        if v is not None and any(not 0 <= f <= 1 for f in v):
            raise ValueError("Fractions must lie in [0, 1]")
        return v

    def to_frame(self, result: str = "result") -> pd.DataFrame:
        """Long-format rows: one per user plus a summary row with user_id 'all'"""
        n = len(self.per_user_violation)
        outside = self.per_user_outside
        rows = [
            {
                "result": result,
                "dist": self.dist,
                "demand_factor": self.demand_factor,
                "user_id": str(i),
                "violation_pct": 100.0 * self.per_user_violation[i],
                "outside_box_pct": None if outside is None else 100.0 * outside[i],
            }
            for i in range(n)
        ]
        rows.append(
            {
                "result": result,
                "dist": self.dist,
                "demand_factor": self.demand_factor,
                "user_id": "all",
                "violation_pct": 100.0 * self.overall_violation,
                "outside_box_pct": None
                if self.overall_outside is None
                else 100.0 * self.overall_outside,
            }
        )
        return pd.DataFrame(rows)
