"""Custom exceptions for the HetNet power planner"""

from typing import Any, Dict, Optional, Sequence


class HetNetError(Exception):
    """Base exception for planner errors"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}

    def __repr__(self):
        if self.details:
            return f"{type(self).__name__}('{self}', details={self.details})"
        return f"{type(self).__name__}('{self}')"

    def __str__(self):
        return super().__str__()


class ScenarioError(HetNetError, ValueError):
    """Raised when inputs are malformed or shapes disagree"""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message, {"field": field} if field else None)
        self.field = field


class CertificationError(HetNetError, ValueError):
    """Raised when a piecewise approximation is not a lower bound of the rate"""

    def __init__(self, message: str, s_point: float, excess: float):
        super().__init__(message, {"s": s_point, "excess": excess})
        self.s_point = s_point
        self.excess = excess


class SolverError(HetNetError):
    """Base exception for barrier solver failures"""

    status = "error"

    def __init__(
        self,
        message: str,
        last_iterate: Optional[Sequence[float]] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, details)
        self.last_iterate = None if last_iterate is None else list(last_iterate)


class InfeasibleError(SolverError):
    """Raised when phase I proves the program has no strictly feasible point"""

    status = "infeasible"

    def __init__(self, message: str, slack: float, last_iterate=None):
        super().__init__(message, last_iterate, {"slack": slack})
        self.slack = slack


class IterationLimitError(SolverError):
    """Raised when Newton iterations are exhausted before convergence"""

    status = "iteration_limit"


class NumericalFailureError(SolverError):
    """Raised when a Newton step is not finite or cannot be factorized"""

    status = "numerical_failure"


class AssociationLimitError(HetNetError, ValueError):
    """Raised when an exhaustive association search exceeds its limit"""

    pass
