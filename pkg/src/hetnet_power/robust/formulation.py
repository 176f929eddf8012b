"""Deterministic MIGP and Robust-MIGP programs in log-variable form.

Variables are q_j = log P_j for every base station followed by
u_ij = log x_ij for each (user, BS) pair the program allows. The
throughput constraint of pair (i, j) and monomial l reads

    log(noise/g_ij * e^(-q_j - u_ij/b_l)
        + sum_{k != j} g_ik/g_ij * e^(q_k - q_j - u_ij/b_l)) <= A_ijl

where g_ij is the serving gain and g_ik the interferer gains. The robust
program evaluates them at the worst corner of the uncertainty box.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.special import logsumexp

from ..approx.piecewise import a_coefficient
from ..exceptions import InfeasibleError, ScenarioError
from ..models.approximation import PiecewiseApprox
from ..models.result import SolverDiagnostics, SolveResult, SolveStatus
from ..models.scenario import Association, GainSample, Scenario
from ..models.uncertainty import UncertaintyBox
from ..network.channel import C_DB
from ..solver.barrier import SolverOutcome, solve
from ..solver.program import (
    LogAffine,
    LogConvexProgram,
    LseConstraint,
    SolverOptions,
    VariableInfo,
)
from ..utils.performance_logger import PerformanceContext

# Lower bound on q_j - log P_max_j (and on u_ij in relaxations)
DEFAULT_LOG_FLOOR = -30.0


def _deviation(sigma: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """rho * sigma with 0 wherever sigma is 0, even for infinite rho"""
    with np.errstate(invalid="ignore"):
        return np.where(sigma == 0, 0.0, rho * sigma)


@dataclass(frozen=True)
class GainBounds:
    """Natural-log gains a program is built with.

    serving[i, j] is used when j serves i, interferer[i, k] when k interferes
    with user i. Both equal c * mu for the deterministic program.
    """

    serving: np.ndarray
    interferer: np.ndarray

    @classmethod
    def nominal(cls, scenario: Scenario) -> "GainBounds":
        mean = C_DB * scenario.mu
        return cls(serving=mean, interferer=mean.copy())

    @classmethod
    def from_box(cls, scenario: Scenario, box: UncertaintyBox) -> "GainBounds":
        if box.shape != (scenario.n, scenario.N):
            raise ScenarioError(
                f"Box shape {box.shape} does not match scenario "
                f"{(scenario.n, scenario.N)}",
                field="box",
            )
        mu, sigma = scenario.mu, scenario.sigma
        return cls(
            serving=C_DB * (mu + _deviation(sigma, box.lo)),
            interferer=C_DB * (mu + _deviation(sigma, box.hi)),
        )

    def gains(self, assoc: Association) -> np.ndarray:
        """Linear gain matrix with the serving entries taken from serving"""
        g = np.exp(self.interferer)
        rows = np.arange(len(assoc.serving))
        g[rows, assoc.serving] = np.exp(self.serving[rows, assoc.serving])
        return g


@dataclass
class RelaxationLayout:
    """Where the relaxed association lives inside a relaxation program"""

    allowed: Tuple[Tuple[int, ...], ...]
    # user -> indices of w_{i,1..m-1}; empty for users with one allowed BS
    w_index: Dict[int, List[int]] = field(default_factory=dict)

    def z(self, y: np.ndarray, N: int) -> np.ndarray:
        """Relaxed association z_ij recovered from the w variables"""
        z = np.zeros((len(self.allowed), N))
        for i, choices in enumerate(self.allowed):
            if len(choices) == 1:
                z[i, choices[0]] = 1.0
                continue
            w = y[self.w_index[i]]
            z[i, list(choices[:-1])] = w
            z[i, choices[-1]] = 1.0 - w.sum()
        return np.clip(z, 0.0, 1.0)


class FormulationBuilder:
    """Assemble and solve power-minimization programs for one scenario"""

    def __init__(
        self,
        scenario: Scenario,
        pw: PiecewiseApprox,
        bounds: Optional[GainBounds] = None,
        log_floor: float = DEFAULT_LOG_FLOOR,
        big_m: float = 1e6,
        mode: str = "deterministic",
        box: Optional[UncertaintyBox] = None,
        sigma_scale: float = 1.0,
    ):
        if log_floor >= 0:
            raise ValueError("log_floor must be negative")
        self.scenario = scenario
        self.pw = pw
        self.bounds = bounds or GainBounds.nominal(scenario)
        self.log_floor = log_floor
        self.big_m = big_m
        self.mode = mode
        self.box = box
        self.sigma_scale = sigma_scale

        n, N = scenario.n, scenario.N
        # A[i, j, l]
        self.A = a_coefficient(
            scenario.B[None, :, None],
            scenario.r[:, None, None],
            pw.a_arr[None, None, :],
            pw.b_arr[None, None, :],
        ).reshape(n, N, pw.m)
        self.log_pmax = np.log(scenario.p_max)

    @classmethod
    def deterministic(cls, scenario: Scenario, pw: PiecewiseApprox, **kwargs):
        return cls(scenario, pw, GainBounds.nominal(scenario), mode="deterministic", **kwargs)

    @classmethod
    def robust(cls, scenario: Scenario, pw: PiecewiseApprox, box: UncertaintyBox, **kwargs):
        return cls(
            scenario, pw, GainBounds.from_box(scenario, box), mode="robust", box=box, **kwargs
        )

    # Program assembly

    def _pair_exponents(self, i: int, j: int) -> Tuple[float, np.ndarray]:
        """(log noise - log g_ij, log g_ik - log g_ij for all k)"""
        serving = self.bounds.serving[i, j]
        interferer = self.bounds.interferer[i]
        if not np.isfinite(serving) or not np.all(np.isfinite(np.delete(interferer, j))):
            raise InfeasibleError(
                f"Uncertainty box is unbounded for user {i} at BS {j}", slack=np.inf
            )
        return np.log(self.scenario.noise_w) - serving, interferer - serving

    def throughput_terms(self, i: int, j: int, u: int, b: float) -> List[LogAffine]:
        noise_const, ratios = self._pair_exponents(i, j)
        terms = [LogAffine({j: -1.0, u: -1.0 / b}, float(noise_const))]
        for k in range(self.scenario.N):
            if k != j:
                terms.append(LogAffine({k: 1.0, j: -1.0, u: -1.0 / b}, float(ratios[k])))
        return terms

    def _power_block(self) -> Tuple[List[VariableInfo], List[LseConstraint]]:
        variables = [VariableInfo(f"q[{j}]", "power") for j in range(self.scenario.N)]
        constraints = []
        for j in range(self.scenario.N):
            constraints.append(
                LseConstraint(
                    (LogAffine({j: 1.0}),), float(self.log_pmax[j]), name=f"power_cap[{j}]"
                )
            )
            constraints.append(
                LseConstraint(
                    (LogAffine({j: -1.0}),),
                    float(-(self.log_pmax[j] + self.log_floor)),
                    name=f"power_floor[{j}]",
                )
            )
        return variables, constraints

    def _objective(self) -> List[LogAffine]:
        return [LogAffine({j: 1.0}) for j in range(self.scenario.N)]

    def build(self, assoc: Association) -> LogConvexProgram:
        """Fixed-association program; pairs not in the association are omitted"""
        scenario = self.scenario
        try:
            assoc.check(scenario.n, scenario.N)
        except ValueError as e:
            raise ScenarioError(str(e), field="assoc") from e

        N = scenario.N
        variables, constraints = self._power_block()
        u_index = {}
        for i, j in enumerate(assoc.serving):
            u_index[i] = N + i
            variables.append(VariableInfo(f"u[{i},{j}]", "alloc"))
            constraints.append(
                LseConstraint((LogAffine({N + i: 1.0}),), 0.0, name=f"alloc_cap[{i}]")
            )
        for j in range(N):
            users = assoc.users_of(j)
            if users:
                constraints.append(
                    LseConstraint(
                        tuple(LogAffine({u_index[i]: 1.0}) for i in users),
                        0.0,
                        name=f"resource[{j}]",
                    )
                )
        for i, j in enumerate(assoc.serving):
            for l, b in enumerate(self.pw.b):
                constraints.append(
                    LseConstraint(
                        tuple(self.throughput_terms(i, j, u_index[i], b)),
                        float(self.A[i, j, l]),
                        name=f"throughput[{i},{j},{l}]",
                    )
                )

        start = np.concatenate(
            [
                self.log_pmax - 1.0,
                [-np.log(len(assoc.users_of(j))) - 1.0 for j in assoc.serving],
            ]
        )
        return LogConvexProgram(
            num_vars=len(variables),
            objective_terms=self._objective(),
            constraints=constraints,
            variables=variables,
            start=start,
        )

    def big_m_for(self, i: int, j: int) -> float:
        """Smallest Big-M that deactivates pair (i, j) over the variable box"""
        noise_const, ratios = self._pair_exponents(i, j)
        q_min = self.log_pmax[j] + self.log_floor
        u_term = -self.log_floor / float(np.min(self.pw.b))
        peaks = [noise_const - q_min + u_term]
        peaks += [
            ratios[k] + self.log_pmax[k] - q_min + u_term
            for k in range(self.scenario.N)
            if k != j
        ]
        fhat_max = float(logsumexp(peaks))
        slack = fhat_max - float(np.min(self.A[i, j]))
        return float(min(self.big_m, max(slack, 0.0) + 1.0))

    def build_relaxation(
        self, allowed: Sequence[Sequence[int]]
    ) -> Tuple[LogConvexProgram, RelaxationLayout]:
        """Continuous relaxation with z restricted to each user's allowed BS set.

        Users with several allowed base stations get variables w with
        z_ij = w_k for the first choices and z = 1 - sum(w) for the last one;
        the Big-M term M * (1 - z_ij) is affine in w and enters the bound.
        """
        scenario = self.scenario
        n, N = scenario.n, scenario.N
        allowed = tuple(tuple(sorted(set(choices))) for choices in allowed)
        if len(allowed) != n or any(not c or c[0] < 0 or c[-1] >= N for c in allowed):
            raise ScenarioError("Allowed sets must be non-empty BS indices per user", field="allowed")

        variables, constraints = self._power_block()
        u_index: Dict[Tuple[int, int], int] = {}
        for i, choices in enumerate(allowed):
            for j in choices:
                u_index[(i, j)] = len(variables)
                variables.append(VariableInfo(f"u[{i},{j}]", "alloc"))

        layout = RelaxationLayout(allowed=allowed)
        for i, choices in enumerate(allowed):
            layout.w_index[i] = []
            for j in choices[:-1]:
                layout.w_index[i].append(len(variables))
                variables.append(VariableInfo(f"w[{i},{j}]", "assoc"))

        for (i, j), k in u_index.items():
            constraints.append(
                LseConstraint((LogAffine({k: 1.0}),), 0.0, name=f"alloc_cap[{i},{j}]")
            )
            constraints.append(
                LseConstraint(
                    (LogAffine({k: -1.0}),), -self.log_floor, name=f"alloc_floor[{i},{j}]"
                )
            )
        for i, ws in layout.w_index.items():
            if not ws:
                continue
            for k in ws:
                constraints.append(
                    LseConstraint((LogAffine({k: -1.0}),), 0.0, name=f"assoc_nonneg[{k}]")
                )
            constraints.append(
                LseConstraint(
                    (LogAffine({k: 1.0 for k in ws}),), 1.0, name=f"assoc_sum[{i}]"
                )
            )
        for j in range(N):
            members = [u_index[(i, j)] for i in range(n) if (i, j) in u_index]
            if members:
                constraints.append(
                    LseConstraint(
                        tuple(LogAffine({k: 1.0}) for k in members), 0.0, name=f"resource[{j}]"
                    )
                )

        for i, choices in enumerate(allowed):
            ws = layout.w_index[i]
            for position, j in enumerate(choices):
                offset = None
                if ws:
                    M = self.big_m_for(i, j)
                    if position < len(ws):
                        offset = LogAffine({ws[position]: -M}, M)
                    else:
                        offset = LogAffine({k: M for k in ws}, 0.0)
                for l, b in enumerate(self.pw.b):
                    constraints.append(
                        LseConstraint(
                            tuple(self.throughput_terms(i, j, u_index[(i, j)], b)),
                            float(self.A[i, j, l]),
                            offset=offset,
                            name=f"throughput[{i},{j},{l}]",
                        )
                    )

        start = np.zeros(len(variables))
        start[:N] = self.log_pmax - 1.0
        for (i, j), k in u_index.items():
            members = sum(1 for (_, jj) in u_index if jj == j)
            start[k] = -np.log(members) - 1.0
        for i, ws in layout.w_index.items():
            for k in ws:
                start[k] = 1.0 / len(allowed[i])

        program = LogConvexProgram(
            num_vars=len(variables),
            objective_terms=self._objective(),
            constraints=constraints,
            variables=variables,
            start=start,
        )
        return program, layout

    # Solving

    def bound_sinr(self, P: np.ndarray, assoc: Association) -> np.ndarray:
        """Per-user SINR at the gains this program was built with"""
        g = self.bounds.gains(assoc)
        received = g * P
        rows = np.arange(len(assoc.serving))
        signal = received[rows, assoc.serving]
        return signal / (self.scenario.noise_w + received.sum(axis=1) - signal)

    def to_result(self, assoc: Association, program: LogConvexProgram, outcome: SolverOutcome):
        scenario = self.scenario
        N = scenario.N
        P = np.exp(outcome.y[:N])
        x = np.zeros((scenario.n, N))
        for i, j in enumerate(assoc.serving):
            x[i, j] = min(np.exp(outcome.y[N + i]), 1.0)

        sinr = self.bound_sinr(P, assoc)
        in_range = bool(np.all((sinr >= self.pw.s_min) & (sinr <= self.pw.s_max)))
        if not in_range:
            outside = np.flatnonzero((sinr < self.pw.s_min) | (sinr > self.pw.s_max))
            logger.warning(
                f"SINR of users {outside.tolist()} leaves the certified range "
                f"[{self.pw.s_min:g}, {self.pw.s_max:g}] of {self.pw.name or 'the approximation'}"
            )

        kkt = outcome.kkt
        diagnostics = SolverDiagnostics(
            newton_iterations=outcome.newton_iterations,
            phase_one_iterations=outcome.phase_one_iterations,
            barrier_stages=outcome.barrier_stages,
            duality_measure=outcome.duality_measure,
            barrier_t=outcome.barrier_t,
            stationarity=kkt.stationarity if kkt else None,
            complementarity=kkt.complementarity if kkt else None,
            stage_objectives=outcome.stage_objectives,
            sinr=sinr.tolist(),
            sinr_in_range=in_range,
            program_size={
                "variables": program.num_vars,
                "constraints": len(program.constraints),
            },
        )
        return SolveResult(
            P=P.tolist(),
            x=x.tolist(),
            assoc=assoc,
            objective=float(outcome.objective),
            status=SolveStatus.OPTIMAL,
            diagnostics=diagnostics,
            mode=self.mode,
            approx=self.pw.name,
            sigma_scale=self.sigma_scale,
            box=self.box,
        )

    def solve(self, assoc: Association, options: Optional[SolverOptions] = None) -> SolveResult:
        """Build and solve the fixed-association program"""
        program = self.build(assoc)
        with PerformanceContext(f"{self.mode} solve", {"n": self.scenario.n, "N": self.scenario.N}):
            outcome = solve(program, options)
        return self.to_result(assoc, program, outcome)

    def solve_relaxation(
        self, allowed: Sequence[Sequence[int]], options: Optional[SolverOptions] = None
    ) -> Tuple[float, np.ndarray, SolverOutcome]:
        """(lower bound, relaxed z, outcome) of the node restricted to allowed"""
        program, layout = self.build_relaxation(allowed)
        outcome = solve(program, options)
        return outcome.lower_bound, layout.z(outcome.y, self.scenario.N), outcome


def build_migp(
    scenario: Scenario,
    pw: PiecewiseApprox,
    assoc: Association,
    log_floor: float = DEFAULT_LOG_FLOOR,
) -> LogConvexProgram:
    """Deterministic program at the mean gains"""
    return FormulationBuilder.deterministic(scenario, pw, log_floor=log_floor).build(assoc)


def build_robust(
    scenario: Scenario,
    pw: PiecewiseApprox,
    box: UncertaintyBox,
    assoc: Association,
    log_floor: float = DEFAULT_LOG_FLOOR,
) -> LogConvexProgram:
    """Robust program at the worst corner of the box"""
    return FormulationBuilder.robust(scenario, pw, box, log_floor=log_floor).build(assoc)


def fhat_value(q, u_ij: float, gains_row, noise: float, j: int, b_l: float) -> float:
    """log(noise/g_j e^(-q_j - u/b) + sum_{k != j} g_k/g_j e^(q_k - q_j - u/b))"""
    q = np.asarray(q, dtype=float)
    g = np.asarray(gains_row, dtype=float)
    if np.any(g <= 0):
        raise ValueError("gains must be strictly positive")
    if not b_l > 0:
        raise ValueError("b must be positive")
    if not 0 <= j < len(g):
        raise ValueError(f"Serving BS index {j} out of range")
    exponents = [np.log(noise) - np.log(g[j]) - q[j] - u_ij / b_l]
    exponents += [
        np.log(g[k]) - np.log(g[j]) + q[k] - q[j] - u_ij / b_l for k in range(len(g)) if k != j
    ]
    return float(logsumexp(exponents))


def worst_case_gains(
    scenario: Scenario, box: UncertaintyBox, assoc: Association
) -> GainSample:
    """Serving gains at rho_lo, interferers at rho_hi"""
    return GainSample(g=GainBounds.from_box(scenario, box).gains(assoc))
