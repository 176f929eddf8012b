from .barrier import SolverOutcome, evaluate_constraint, kkt_report, phase_one, solve
from .program import (
    CompiledProgram,
    LogAffine,
    LogConvexProgram,
    LseConstraint,
    SolverOptions,
    VariableInfo,
)

__all__ = [
    "LogAffine",
    "LseConstraint",
    "LogConvexProgram",
    "CompiledProgram",
    "VariableInfo",
    "SolverOptions",
    "SolverOutcome",
    "evaluate_constraint",
    "phase_one",
    "solve",
    "kkt_report",
]
