"""Barrier path-following solver for LogConvexProgram instances."""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
import scipy.linalg
from loguru import logger
from scipy.special import logsumexp

from ..exceptions import InfeasibleError, IterationLimitError, NumericalFailureError
from ..models.result import KKTReport
from .program import CompiledProgram, LogConvexProgram, LseConstraint, SolverOptions

# Phase I stops as soon as every residual is below -PHASE_ONE_MARGIN
PHASE_ONE_MARGIN = 1e-3
STRICT_FEASIBILITY = 1e-9
# Phase I searches the box |y - y0| <= PHASE_ONE_RADIUS around its start
PHASE_ONE_RADIUS = 50.0
# Centering tolerance never drops below this fraction of t * f0
CENTERING_FLOOR = 1e-13

ObjectiveFn = Callable[[np.ndarray], Tuple[float, np.ndarray, np.ndarray]]


@dataclass
class SolverOutcome:
    """Optimal log-variables plus the statistics of the run that found them"""

    y: np.ndarray
    objective: float
    newton_iterations: int = 0
    phase_one_iterations: int = 0
    barrier_stages: int = 0
    duality_measure: float = 0.0
    barrier_t: float = 1.0
    stage_objectives: List[float] = field(default_factory=list)
    kkt: Optional[KKTReport] = None

    @property
    def lower_bound(self) -> float:
        """Objective minus the duality measure bounds the true optimum from below"""
        return self.objective - self.duality_measure


def evaluate_constraint(c: LseConstraint, y) -> float:
    """Residual log sum exp(terms) - bound - offset"""
    y = np.asarray(y, dtype=float)
    lse = logsumexp([t.evaluate(y) for t in c.terms])
    offset = c.offset.evaluate(y) if c.offset is not None else 0.0
    return float(lse - c.bound - offset)


class _Barrier:
    """t * f0(y) - sum_k log(-r_k(y)) over one compiled program"""

    def __init__(self, cp: CompiledProgram, objective: ObjectiveFn):
        self.cp = cp
        self.objective = objective

    def value(self, y: np.ndarray, t: float) -> float:
        r = self.cp.residuals(y)
        if np.any(r >= 0) or not np.all(np.isfinite(r)):
            return np.inf
        f0, _, _ = self.objective(y)
        return t * f0 - float(np.sum(np.log(-r)))

    def derivatives(self, y: np.ndarray, t: float):
        """(barrier value, gradient, Hessian, objective value)"""
        f0, g0, h0 = self.objective(y)
        value = t * f0
        grad = t * g0
        hess = t * h0
        if self.cp.num_constraints:
            r, w, weighted, rows = self.cp.residual_derivatives(y)
            slack = -r
            A = self.cp.A
            per_row = np.repeat(1.0 / slack, self.cp.counts)
            grad = grad + rows.T @ (1.0 / slack)
            hess = (
                hess
                + A.T @ ((w * per_row)[:, None] * A)
                - weighted.T @ (weighted / slack[:, None])
                + rows.T @ (rows / (slack**2)[:, None])
            )
            value -= float(np.sum(np.log(slack)))
        return value, grad, hess, f0


def _newton_direction(hess: np.ndarray, grad: np.ndarray, y: np.ndarray) -> np.ndarray:
    if not (np.all(np.isfinite(hess)) and np.all(np.isfinite(grad))):
        raise NumericalFailureError("Non-finite barrier derivatives", last_iterate=y)
    scale = 1.0 + float(np.max(np.abs(np.diag(hess)), initial=0.0))
    for shift in (0.0, 1e-12, 1e-10, 1e-8):
        try:
            factor = scipy.linalg.cho_factor(hess + shift * scale * np.eye(len(y)))
            step = scipy.linalg.cho_solve(factor, -grad)
        except np.linalg.LinAlgError:
            continue
        if np.all(np.isfinite(step)):
            return step
    raise NumericalFailureError("Barrier Hessian could not be factorized", last_iterate=y)


def _center(
    barrier: _Barrier,
    y: np.ndarray,
    t: float,
    opts: SolverOptions,
    stop: Optional[Callable[[np.ndarray], bool]] = None,
) -> Tuple[np.ndarray, int, bool]:
    """Damped Newton on the barrier function; returns (y, steps, stopped_early).

    Centering ends when lambda^2 / 2 <= max(newton_tol, CENTERING_FLOOR * |t * f0|).
    """
    for step_count in range(opts.max_newton_iters):
        value, grad, hess, f0 = barrier.derivatives(y, t)
        direction = _newton_direction(hess, grad, y)
        slope = float(grad @ direction)
        if -slope / 2.0 <= max(opts.newton_tol, CENTERING_FLOOR * abs(t * f0)):
            return y, step_count, False

        step = 1.0
        while True:
            candidate = y + step * direction
            trial = barrier.value(candidate, t)
            if np.isfinite(trial) and trial <= value + opts.alpha * step * slope:
                break
            step *= opts.beta
            if step < 1e-14:
                break
        if step < 1e-14:
            # Line search stalls only at machine precision around the center
            if -slope / 2.0 <= 1e-6 * max(1.0, abs(value)):
                return y, step_count, False
            raise NumericalFailureError(
                f"Line search failed (decrement {-slope:.3e})", last_iterate=y
            )
        y = candidate
        logger.trace(f"newton t={t:.3e} step={step:.3e} decrement={-slope:.3e}")
        if stop is not None and stop(y):
            return y, step_count + 1, True
    raise IterationLimitError(
        f"Newton iteration limit {opts.max_newton_iters} reached at t={t:.3e}",
        last_iterate=y,
    )


def _path_follow(
    barrier: _Barrier,
    y: np.ndarray,
    opts: SolverOptions,
    stop: Optional[Callable[[np.ndarray], bool]] = None,
    relative: bool = False,
):
    """Outer loop: center, record the objective, grow t until K/t < tol.

    With relative=True the target is tol times the current objective, so
    programs whose optimum is far below one watt still converge to tol
    relative accuracy.
    """
    cp = barrier.cp
    t = opts.initial_t
    iterations = 0
    stages = 0
    stage_objectives = []
    while True:
        y, steps, stopped = _center(barrier, y, t, opts, stop)
        iterations += steps
        stages += 1
        stage_objectives.append(barrier.objective(y)[0])
        logger.debug(f"barrier stage {stages}: t={t:.3e} objective={stage_objectives[-1]:.6e}")
        gap = cp.num_constraints / t
        target = opts.tol * abs(stage_objectives[-1]) if relative else opts.tol
        if stopped or gap < target:
            return y, iterations, stages, gap, t, stage_objectives, stopped
        t *= opts.barrier_growth


def _scaled_objective(cp: CompiledProgram, scale: float) -> ObjectiveFn:
    def objective(y):
        f0, grad, hess = cp.objective_derivatives(y)
        return f0 / scale, grad / scale, hess / scale

    return objective


def _phase_one_program(cp: CompiledProgram, y0: np.ndarray) -> CompiledProgram:
    """Constraints r_k(y) <= s, s >= -1 and |y - y0| <= PHASE_ONE_RADIUS over (y, s)"""
    n = cp.num_vars
    rows = cp.A.shape[0]
    eye = np.eye(n)
    box_A = np.hstack([np.vstack([eye, -eye]), np.zeros((2 * n, 1))])
    floor_row = np.zeros((1, n + 1))
    floor_row[0, n] = -1.0
    G = np.hstack([cp.G, np.ones((cp.num_constraints, 1))])
    extra = 1 + 2 * n
    return CompiledProgram(
        num_vars=n + 1,
        obj_A=np.zeros((0, n + 1)),
        obj_c=np.zeros(0),
        A=np.vstack([np.hstack([cp.A, np.zeros((rows, 1))]), floor_row, box_A]),
        c=np.concatenate([cp.c, [0.0], -y0, y0]),
        starts=np.concatenate([cp.starts, rows + np.arange(extra)]).astype(int),
        counts=np.concatenate([cp.counts, np.ones(extra)]).astype(int),
        bound=np.concatenate([cp.bound, [1.0], np.full(2 * n, PHASE_ONE_RADIUS)]),
        G=np.vstack([G, np.zeros((extra, n + 1))]),
        d=np.concatenate([cp.d, np.zeros(extra)]),
        active=cp.active,
    )


def phase_one(p: LogConvexProgram, opts: Optional[SolverOptions] = None, start=None):
    """Find a strictly feasible point of p or prove there is none.

    Minimizes s subject to r_k(y) <= s and s >= -1, with y confined to a box
    of half-width PHASE_ONE_RADIUS around the start so the auxiliary problem
    stays bounded. Returns (y, newton_steps). Raises InfeasibleError when the
    optimal s is not negative.
    """
    opts = opts or SolverOptions()
    cp = p.compile()
    y0 = _initial_point(p, start)
    if cp.num_constraints == 0 or np.max(cp.residuals(y0)) < -STRICT_FEASIBILITY:
        return y0, 0

    n = cp.num_vars
    aug = _phase_one_program(cp, y0)
    unit = np.zeros(n + 1)
    unit[n] = 1.0
    hess0 = np.zeros((n + 1, n + 1))

    def linear(z):
        return float(z[n]), unit, hess0

    s0 = float(np.max(cp.residuals(y0))) + 1.0
    z0 = np.concatenate([y0, [max(s0, 0.0)]])
    barrier = _Barrier(aug, linear)

    def feasible_enough(z):
        return z[n] < -PHASE_ONE_MARGIN

    z, iterations, _, _, _, _, _ = _path_follow(barrier, z0, opts, feasible_enough)
    y = z[:n]
    slack = float(np.max(cp.residuals(y)))
    if slack > -STRICT_FEASIBILITY:
        logger.info(f"phase I: infeasible (optimal slack {slack:.3e})")
        raise InfeasibleError(
            f"Program is infeasible (phase I slack {slack:.3e})", slack=slack, last_iterate=y
        )
    logger.debug(f"phase I: strictly feasible after {iterations} Newton steps (slack {slack:.3e})")
    return y, iterations


def _initial_point(p: LogConvexProgram, start) -> np.ndarray:
    if start is not None:
        return np.asarray(start, dtype=float).copy()
    if p.start is not None:
        return np.asarray(p.start, dtype=float).copy()
    return np.zeros(p.num_vars)


def solve(
    p: LogConvexProgram,
    opts: Optional[SolverOptions] = None,
    warm_start=None,
) -> SolverOutcome:
    """Minimize the program's objective with the log barrier method"""
    opts = opts or SolverOptions()
    cp = p.compile()
    y0 = _initial_point(p, warm_start)
    phase_one_steps = 0
    if cp.num_constraints and not np.max(cp.residuals(y0)) < -STRICT_FEASIBILITY:
        y0, phase_one_steps = phase_one(p, opts, y0)

    # The barrier runs on f0 / f0(y0); t and the gap are reported for f0 itself
    scale = cp.objective(y0)
    if not (np.isfinite(scale) and scale > 0):
        raise NumericalFailureError(f"Objective {scale!r} at the start point", last_iterate=y0)
    barrier = _Barrier(cp, _scaled_objective(cp, scale))
    y, iterations, stages, gap, t, stage_objectives, _ = _path_follow(
        barrier, y0, opts, relative=True
    )
    objective = cp.objective(y)
    t = t / scale
    outcome = SolverOutcome(
        y=y,
        objective=objective,
        newton_iterations=iterations + phase_one_steps,
        phase_one_iterations=phase_one_steps,
        barrier_stages=stages,
        duality_measure=gap * scale,
        barrier_t=t,
        stage_objectives=[f * scale for f in stage_objectives],
    )
    outcome.kkt = kkt_report(p, y, t, cp)
    logger.debug(
        f"barrier solve: objective={objective:.9e} stages={stages} "
        f"newton={outcome.newton_iterations} gap={outcome.duality_measure:.2e}"
    )
    return outcome


def kkt_report(
    p: LogConvexProgram,
    y,
    barrier_t: float,
    compiled: Optional[CompiledProgram] = None,
) -> KKTReport:
    """Stationarity and complementarity residuals with barrier multipliers.

    Multipliers are lambda_k = 1 / (t * -r_k(y)); short-circuited
    constraints carry a zero multiplier.
    """
    cp = compiled or p.compile()
    y = np.asarray(y, dtype=float)
    _, grad, _ = cp.objective_derivatives(y)
    multipliers = np.zeros(len(p.constraints))
    max_residual = -np.inf
    complementarity = 0.0
    if cp.num_constraints:
        r, _, _, rows = cp.residual_derivatives(y)
        lam = 1.0 / (barrier_t * np.maximum(-r, np.finfo(float).tiny))
        grad = grad + rows.T @ lam
        multipliers[cp.active] = lam
        max_residual = float(np.max(r))
        complementarity = float(np.max(np.abs(lam * r)))
    return KKTReport(
        stationarity=float(np.linalg.norm(grad)),
        complementarity=complementarity,
        multipliers=multipliers.tolist(),
        max_residual=max_residual if np.isfinite(max_residual) else 0.0,
    )

