"""Best-bound branch & bound over the Big-M association binaries."""

import heapq
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from ..exceptions import InfeasibleError, IterationLimitError, SolverError
from ..models.result import SolveResult, SolveStatus
from ..models.scenario import Association, Scenario
from ..models.search import BnbOptions
from ..robust.formulation import FormulationBuilder
from ..solver.program import SolverOptions
from ..utils.performance_logger import PerformanceContext
from .heuristics import greedy_assoc

Allowed = Tuple[Tuple[int, ...], ...]

INTEGRALITY_TOL = 1e-6


@dataclass(order=True)
class BnbNode:
    """Open node; ordered by parent bound, then creation order"""

    bound: float
    counter: int
    allowed: Allowed = field(compare=False)
    depth: int = field(compare=False, default=0)


@dataclass
class BnbStats:
    nodes_explored: int = 0
    nodes_pruned: int = 0
    nodes_infeasible: int = 0
    relaxations_solved: int = 0
    leaves_solved: int = 0
    leaves_failed: int = 0
    relaxations_failed: int = 0
    best_bound: float = float("-inf")
    gap: float = float("inf")
    incumbent_history: List[float] = field(default_factory=list)


@dataclass
class BnbOutcome:
    assoc: Association
    result: SolveResult
    gap: float
    certified: bool
    stats: BnbStats

    @property
    def status(self) -> SolveStatus:
        return SolveStatus.OPTIMAL if self.certified else SolveStatus.GAP_NOT_CERTIFIED


def _most_fractional(z: np.ndarray, allowed: Allowed) -> Tuple[int, int]:
    """(i, j) with z_ij closest to 0.5 among undecided users; lowest (i, j) on ties"""
    best, best_score = None, np.inf
    for i, choices in enumerate(allowed):
        if len(choices) < 2:
            continue
        for j in choices:
            score = abs(z[i, j] - 0.5)
            if score < best_score - 1e-12:
                best, best_score = (i, j), score
    return best


def _integral(z: np.ndarray, allowed: Allowed) -> Optional[Association]:
    rows = np.arange(len(allowed))
    serving = np.argmax(z, axis=1)
    if np.all(np.abs(z[rows, serving] - 1.0) <= INTEGRALITY_TOL):
        return Association(serving=serving.tolist())
    return None


def _branch(allowed: Allowed, i: int, j: int) -> Tuple[Allowed, Allowed]:
    fixed = list(allowed)
    fixed[i] = (j,)
    rest = list(allowed)
    rest[i] = tuple(k for k in allowed[i] if k != j)
    return tuple(fixed), tuple(rest)


def branch_and_bound(
    scenario: Scenario,
    builder: FormulationBuilder,
    opts: Optional[BnbOptions] = None,
    solver_options: Optional[SolverOptions] = None,
) -> BnbOutcome:
    """Search associations with Big-M relaxations, starting from the greedy incumbent"""
    opts = opts or BnbOptions()
    stats = BnbStats()
    target = opts.gap_target

    incumbent: Optional[SolveResult] = None
    try:
        incumbent = builder.solve(greedy_assoc(scenario), solver_options)
        stats.incumbent_history.append(incumbent.objective)
        logger.info(f"B&B: greedy incumbent {incumbent.objective:.6e} W")
    except InfeasibleError:
        logger.info("B&B: greedy association is infeasible")
    except SolverError as e:
        logger.warning(f"B&B: greedy incumbent failed: {e}")

    def cutoff() -> float:
        return incumbent.objective * (1.0 - target) if incumbent else np.inf

    def offer(result: SolveResult) -> None:
        nonlocal incumbent
        if incumbent is None or result.objective < incumbent.objective:
            incumbent = result
            stats.incumbent_history.append(result.objective)
            logger.info(
                f"B&B: new incumbent {result.objective:.6e} W after {stats.nodes_explored} nodes"
            )

    def solve_leaf(assoc: Association) -> None:
        stats.leaves_solved += 1
        try:
            offer(builder.solve(assoc, solver_options))
        except InfeasibleError:
            stats.nodes_infeasible += 1
        except SolverError as e:
            stats.leaves_failed += 1
            logger.warning(f"B&B: leaf {assoc.serving} failed: {e}")

    pruned_bounds: List[float] = []
    root = tuple(tuple(range(scenario.N)) for _ in range(scenario.n))
    heap: List[BnbNode] = [BnbNode(-np.inf, 0, root)]
    counter = 1

    with PerformanceContext("branch and bound", {"n": scenario.n, "N": scenario.N}):
        while heap and stats.nodes_explored < opts.node_limit:
            node = heapq.heappop(heap)
            if node.bound >= cutoff():
                stats.nodes_pruned += 1
                pruned_bounds.append(node.bound)
                continue
            stats.nodes_explored += 1

            if all(len(choices) == 1 for choices in node.allowed):
                solve_leaf(Association(serving=[c[0] for c in node.allowed]))
                continue

            try:
                bound, z, _ = builder.solve_relaxation(node.allowed, solver_options)
                stats.relaxations_solved += 1
            except InfeasibleError:
                stats.nodes_infeasible += 1
                continue
            except SolverError as e:
                stats.relaxations_failed += 1
                logger.warning(f"B&B: relaxation failed at depth {node.depth}: {e}")
                bound, z = node.bound, None
            bound = max(bound, node.bound)

            if bound >= cutoff():
                stats.nodes_pruned += 1
                pruned_bounds.append(bound)
                continue

            if z is not None:
                assoc = _integral(z, node.allowed)
                if assoc is not None:
                    solve_leaf(assoc)
                    continue
                i, j = _most_fractional(z, node.allowed)
            else:
                i = next(k for k, c in enumerate(node.allowed) if len(c) > 1)
                j = node.allowed[i][0]

            for child in _branch(node.allowed, i, j):
                heapq.heappush(heap, BnbNode(bound, counter, child, node.depth + 1))
                counter += 1

    if incumbent is None:
        if stats.leaves_failed:
            raise SolverError(
                f"No association solved; {stats.leaves_failed} leaf solves failed",
                details={"leaves_failed": stats.leaves_failed},
            )
        if heap:
            raise IterationLimitError(
                f"No feasible association found within {opts.node_limit} nodes"
            )
        raise InfeasibleError("No association admits a feasible solution", slack=float("inf"))

    open_bounds = [n.bound for n in heap]
    stats.best_bound = min(open_bounds + pruned_bounds + [incumbent.objective])
    stats.gap = max(0.0, (incumbent.objective - stats.best_bound) / incumbent.objective)
    certified = (not heap or stats.gap <= target) and stats.leaves_failed == 0
    if stats.leaves_failed:
        logger.warning(f"B&B: {stats.leaves_failed} leaf solves failed; optimality not certified")
    elif not certified:
        logger.warning(
            f"B&B: node limit {opts.node_limit} reached; gap {stats.gap:.3e} not certified"
        )
    status = SolveStatus.OPTIMAL if certified else SolveStatus.GAP_NOT_CERTIFIED
    result = incumbent.model_copy(update={"status": status})
    logger.info(
        f"B&B: {stats.nodes_explored} nodes, {stats.nodes_pruned} pruned, "
        f"objective {result.objective:.6e} W, gap {stats.gap:.2e}"
    )
    return BnbOutcome(
        assoc=result.assoc, result=result, gap=stats.gap, certified=certified, stats=stats
    )
