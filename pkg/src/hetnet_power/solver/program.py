"""Log-convex (geometric) programs in exponential form.

A program works over a vector y of log-variables. Every expression is a
LogAffine ``c + a . y``; constraints read ``log sum_t exp(term_t(y)) <=
bound + offset(y)`` and the objective is ``sum_t exp(term_t(y))``.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

# Offsets whose constant part exceeds this (with no variable part) deactivate
# the constraint: the barrier term is numerically flat there.
SHORT_CIRCUIT_BOUND = 1e4


class SolverOptions(BaseModel):
    """Barrier method settings"""

    tol: float = Field(
        1e-8, description="Duality measure target #constraints/t, relative to the objective"
    )
    max_newton_iters: int = Field(200, description="Newton steps per centering")
    barrier_growth: float = Field(10.0, description="Growth factor mu of t")
    initial_t: float = Field(1.0, description="Initial barrier parameter")
    alpha: float = Field(0.25, description="Armijo fraction of the line search")
    beta: float = Field(0.5, description="Backtracking step shrink factor")
    big_m: float = Field(1e6, description="Big-M constant of relaxed binaries")
    newton_tol: float = Field(1e-9, description="Centering stop on lambda^2 / 2")

    @field_validator("tol", "initial_t", "big_m", "newton_tol")
    @classmethod
    def validate_positive(cls, v, info):
        if not v > 0:
            raise ValueError(f"{info.field_name} must be positive")
        return v

    @field_validator("barrier_growth")
    @classmethod
    def validate_growth(cls, v):
        if not v > 1:
            raise ValueError("barrier_growth must be greater than 1")
        return v

    @field_validator("max_newton_iters")
    @classmethod
    def validate_iters(cls, v):
        if v < 1:
            raise ValueError("max_newton_iters must be at least 1")
        return v

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v):
        if not 0 < v < 0.5:
            raise ValueError("alpha must lie in (0, 0.5)")
        return v

    @field_validator("beta")
    @classmethod
    def validate_beta(cls, v):
        if not 0 < v < 1:
            raise ValueError("beta must lie in (0, 1)")
        return v


@dataclass(frozen=True)
class LogAffine:
    """c + sum_k coeffs[k] * y[k]"""

    coeffs: Mapping[int, float] = field(default_factory=dict)
    constant: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.constant):
            raise ValueError("LogAffine constant must be finite")
        for index, value in self.coeffs.items():
            if index < 0:
                raise ValueError(f"Negative variable index {index}")
            if not np.isfinite(value):
                raise ValueError(f"Coefficient of y[{index}] must be finite")

    def evaluate(self, y: np.ndarray) -> float:
        return self.constant + sum(v * y[k] for k, v in self.coeffs.items())

    def shifted(self, delta: float) -> "LogAffine":
        return LogAffine(dict(self.coeffs), self.constant + delta)

    @property
    def max_index(self) -> int:
        return max(self.coeffs, default=-1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "coeffs": {str(k): v for k, v in sorted(self.coeffs.items())},
            "constant": self.constant,
        }


@dataclass(frozen=True)
class LseConstraint:
    """log sum_t exp(terms[t](y)) <= bound + offset(y)"""

    terms: Tuple[LogAffine, ...]
    bound: float = 0.0
    offset: Optional[LogAffine] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("LseConstraint needs at least one term")
        if not np.isfinite(self.bound):
            raise ValueError("LseConstraint bound must be finite")

    @property
    def effective_constant_bound(self) -> float:
        return self.bound + (self.offset.constant if self.offset else 0.0)

    @property
    def is_short_circuited(self) -> bool:
        """True when a constant offset pushes the bound out of reach"""
        if self.offset is None or self.offset.coeffs:
            return False
        return self.offset.constant > SHORT_CIRCUIT_BOUND

    @property
    def max_index(self) -> int:
        indices = [t.max_index for t in self.terms]
        if self.offset is not None:
            indices.append(self.offset.max_index)
        return max(indices)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "terms": [t.to_dict() for t in self.terms],
            "bound": self.bound,
            "offset": None if self.offset is None else self.offset.to_dict(),
        }


@dataclass(frozen=True)
class VariableInfo:
    name: str
    role: str


@dataclass
class CompiledProgram:
    """Stacked dense arrays of a program's objective and active constraints"""

    num_vars: int
    obj_A: np.ndarray
    obj_c: np.ndarray
    A: np.ndarray
    c: np.ndarray
    starts: np.ndarray
    counts: np.ndarray
    bound: np.ndarray
    G: np.ndarray
    d: np.ndarray
    active: np.ndarray  # indices into LogConvexProgram.constraints

    @property
    def num_constraints(self) -> int:
        return len(self.starts)

    def objective(self, y: np.ndarray) -> float:
        return float(np.sum(np.exp(self.obj_A @ y + self.obj_c)))

    def objective_derivatives(self, y: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
        e = np.exp(self.obj_A @ y + self.obj_c)
        grad = self.obj_A.T @ e
        hess = self.obj_A.T @ (e[:, None] * self.obj_A)
        return float(np.sum(e)), grad, hess

    def _softmax(self, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        z = self.A @ y + self.c
        zmax = np.maximum.reduceat(z, self.starts)
        shifted = np.exp(z - np.repeat(zmax, self.counts))
        sums = np.add.reduceat(shifted, self.starts)
        return zmax + np.log(sums), shifted / np.repeat(sums, self.counts)

    def residuals(self, y: np.ndarray) -> np.ndarray:
        if self.num_constraints == 0:
            return np.zeros(0)
        lse, _ = self._softmax(y)
        return lse - self.bound - (self.G @ y + self.d)

    def residual_derivatives(self, y: np.ndarray):
        """Residuals, per-row softmax weights and gradient rows"""
        lse, w = self._softmax(y)
        weighted = np.add.reduceat(w[:, None] * self.A, self.starts, axis=0)
        residual = lse - self.bound - (self.G @ y + self.d)
        return residual, w, weighted, weighted - self.G


@dataclass
class LogConvexProgram:
    """Objective sum_t exp(objective_terms[t](y)) subject to LSE constraints"""

    num_vars: int
    objective_terms: List[LogAffine]
    constraints: List[LseConstraint]
    variables: List[VariableInfo] = field(default_factory=list)
    start: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("Program needs at least one variable")
        if not self.objective_terms:
            raise ValueError("Program needs at least one objective term")
        highest = max(
            [t.max_index for t in self.objective_terms]
            + [c.max_index for c in self.constraints]
        )
        if highest >= self.num_vars:
            raise ValueError(f"Variable index {highest} out of range for {self.num_vars} vars")
        if self.variables and len(self.variables) != self.num_vars:
            raise ValueError("Variable metadata must cover every variable")
        if self.start is not None and len(self.start) != self.num_vars:
            raise ValueError("Start point length must equal num_vars")

    def variable_index(self, name: str) -> int:
        for k, info in enumerate(self.variables):
            if info.name == name:
                return k
        raise KeyError(name)

    def indices_with_role(self, role: str) -> List[int]:
        return [k for k, info in enumerate(self.variables) if info.role == role]

    def _rows(self, terms: Sequence[LogAffine]) -> Tuple[np.ndarray, np.ndarray]:
        A = np.zeros((len(terms), self.num_vars))
        c = np.zeros(len(terms))
        for r, term in enumerate(terms):
            for k, v in term.coeffs.items():
                A[r, k] += v
            c[r] = term.constant
        return A, c

    def compile(self) -> CompiledProgram:
        """Stack terms into dense arrays, dropping short-circuited constraints"""
        active = [k for k, con in enumerate(self.constraints) if not con.is_short_circuited]
        obj_A, obj_c = self._rows(self.objective_terms)

        terms: List[LogAffine] = []
        counts, bound = [], []
        G = np.zeros((len(active), self.num_vars))
        d = np.zeros(len(active))
        for row, k in enumerate(active):
            con = self.constraints[k]
            terms.extend(con.terms)
            counts.append(len(con.terms))
            bound.append(con.bound)
            if con.offset is not None:
                for index, v in con.offset.coeffs.items():
                    G[row, index] += v
                d[row] = con.offset.constant
        A, c = self._rows(terms)
        counts_arr = np.asarray(counts, dtype=int)
        starts = np.concatenate(([0], np.cumsum(counts_arr)[:-1])) if counts else np.zeros(0, int)
        return CompiledProgram(
            num_vars=self.num_vars,
            obj_A=obj_A,
            obj_c=obj_c,
            A=A,
            c=c,
            starts=starts.astype(int),
            counts=counts_arr,
            bound=np.asarray(bound, dtype=float),
            G=G,
            d=d,
            active=np.asarray(active, dtype=int),
        )

    def to_debug_json(self) -> Dict[str, Any]:
        """Plain-dict dump for cross-checking with external convex solvers"""
        return {
            "num_vars": self.num_vars,
            "variables": [{"name": v.name, "role": v.role} for v in self.variables],
            "objective": [t.to_dict() for t in self.objective_terms],
            "constraints": [c.to_dict() for c in self.constraints],
        }
