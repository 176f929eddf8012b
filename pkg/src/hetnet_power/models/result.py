from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .scenario import Association
from .uncertainty import UncertaintyBox


class SolveStatus(str, Enum):
    """Outcome labels shared by the solver, the planner and the CLI"""

    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    ITERATION_LIMIT = "iteration_limit"
    NUMERICAL_FAILURE = "numerical_failure"
    GAP_NOT_CERTIFIED = "gap not certified"


class SolverDiagnostics(BaseModel):
    """Barrier solver statistics attached to a SolveResult"""

    newton_iterations: int = Field(0, description="Newton steps over all stages")
    phase_one_iterations: int = Field(0, description="Newton steps spent in phase I")
    barrier_stages: int = Field(0, description="Outer barrier iterations")
    duality_measure: float = Field(0.0, description="#constraints / t at exit")
    barrier_t: float = Field(1.0, description="Final barrier parameter")
    stationarity: Optional[float] = Field(None, description="Lagrangian gradient norm")
    complementarity: Optional[float] = Field(None, description="max |lambda * residual|")
    stage_objectives: List[float] = Field(default_factory=list)
    sinr: List[float] = Field(
        default_factory=list, description="Per-user SINR at the gains used to build"
    )
    sinr_in_range: bool = Field(
        True, description="Every user's SINR lies inside the certified approx range"
    )
    program_size: Dict[str, int] = Field(default_factory=dict)


class SolveResult(BaseModel):
    """Powers, allocations and association produced by one solve"""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    P: List[float] = Field(..., description="Per-BS power (W)")
    x: List[List[float]] = Field(..., description="n x N allocation fractions")
    assoc: Association
    objective: float = Field(..., description="Sum of BS powers (W)")
    status: SolveStatus = SolveStatus.OPTIMAL
    diagnostics: SolverDiagnostics = Field(default_factory=SolverDiagnostics)

    # Provenance
    mode: str = Field("deterministic", description="deterministic or robust")
    approx: Optional[str] = Field(None, description="Approximation used")
    sigma_scale: float = Field(1.0, description="Sigma multiplier used to build")
    box: Optional[UncertaintyBox] = Field(None, description="Box for robust solves")

    @field_validator("P")
    @classmethod
    def validate_powers(cls, v):
        if any(p <= 0 or not np.isfinite(p) for p in v):
            raise ValueError("Powers must be finite and strictly positive")
        return v

    @field_validator("x")
    @classmethod
    def validate_allocations(cls, v):
        if any(xv < 0 or xv > 1 + 1e-6 for row in v for xv in row):
            raise ValueError("Allocations must lie in [0, 1]")
        return v

    @field_validator("mode")
    @classmethod
    def validate_mode(cls, v):
        if v not in ("deterministic", "robust"):
            raise ValueError("Mode must be 'deterministic' or 'robust'")
        return v

    @property
    def powers(self) -> np.ndarray:
        return np.asarray(self.P, dtype=float)

    @property
    def allocation(self) -> np.ndarray:
        return np.asarray(self.x, dtype=float)

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def N(self) -> int:
        return len(self.P)


class FeasibilityReport(BaseModel):
    """Per-constraint slacks of a solution evaluated against one gain matrix"""

    power_slack: List[float] = Field(..., description="1 - P_j / P_max_j")
    resource_slack: List[float] = Field(..., description="1 - sum_i x_ij")
    throughput_slack: List[float] = Field(..., description="T_i - r_i (bits/s)")
    relative_throughput_slack: List[float] = Field(..., description="T_i / r_i - 1")
    throughput: List[float] = Field(..., description="True Shannon throughput")
    sinr: List[float] = Field(..., description="SINR at the serving BS")
    tol: float
    passed: bool

    @property
    def failures(self) -> List[str]:
        """Names of the constraints that fail at this tolerance"""
        names = []
        for j, s in enumerate(self.power_slack):
            if s < -self.tol:
                names.append(f"power_cap[{j}]")
        for j, s in enumerate(self.resource_slack):
            if s < -self.tol:
                names.append(f"resource[{j}]")
        for i, s in enumerate(self.relative_throughput_slack):
            if s < -self.tol:
                names.append(f"throughput[{i}]")
        return names


class KKTReport(BaseModel):
    """Residual norms of the first-order optimality conditions"""

    stationarity: float
    complementarity: float
    multipliers: List[float]
    max_residual: float = Field(..., description="Largest constraint residual")
