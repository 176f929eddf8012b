from .approximation import CertificationReport, PiecewiseApprox
from .result import (
    FeasibilityReport,
    KKTReport,
    SolverDiagnostics,
    SolveResult,
    SolveStatus,
)
from .scenario import Association, GainSample, Positions, Scenario
from .search import BnbOptions
from .uncertainty import (
    BoxPolicy,
    GainDistribution,
    RobustConfig,
    UncertaintyBox,
    ViolationReport,
)

__all__ = [
    "Scenario",
    "Positions",
    "Association",
    "GainSample",
    "SolveResult",
    "SolveStatus",
    "SolverDiagnostics",
    "FeasibilityReport",
    "KKTReport",
    "PiecewiseApprox",
    "CertificationReport",
    "UncertaintyBox",
    "BoxPolicy",
    "RobustConfig",
    "GainDistribution",
    "ViolationReport",
    "BnbOptions",
]
