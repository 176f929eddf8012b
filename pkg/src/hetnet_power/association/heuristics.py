import itertools
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from ..exceptions import AssociationLimitError, InfeasibleError, SolverError
from ..models.result import SolveResult, SolveStatus
from ..models.scenario import Association, Scenario
from ..robust.formulation import FormulationBuilder
from ..solver.program import SolverOptions


def greedy_assoc(scenario: Scenario) -> Association:
    """Serve every user from its strongest mean gain; ties go to the lowest index"""
    return Association(serving=np.argmax(scenario.mu, axis=1).tolist())


def enumerate_assoc(
    scenario: Scenario,
    builder: FormulationBuilder,
    limit: int = 4096,
    options: Optional[SolverOptions] = None,
) -> Tuple[Association, SolveResult]:
    """Solve every assignment and keep the cheapest; first in lexicographic order wins ties"""
    count = scenario.N**scenario.n
    if count > limit:
        raise AssociationLimitError(
            f"{scenario.N}^{scenario.n} = {count} assignments exceed the limit {limit}",
            {"count": count, "limit": limit},
        )

    best: Optional[SolveResult] = None
    skipped = failed = 0
    for serving in itertools.product(range(scenario.N), repeat=scenario.n):
        assoc = Association(serving=list(serving))
        try:
            result = builder.solve(assoc, options)
        except InfeasibleError:
            skipped += 1
            continue
        except SolverError as e:
            logger.warning(f"assignment {list(serving)} failed: {e}")
            failed += 1
            continue
        if best is None or result.objective < best.objective:
            best = result

    if best is None:
        if failed:
            raise SolverError(
                f"No assignment solved: {skipped} infeasible, {failed} failed",
                details={"infeasible": skipped, "failed": failed},
            )
        raise InfeasibleError(f"All {count} assignments are infeasible", slack=float("inf"))
    logger.info(
        f"enumeration: best objective {best.objective:.6e} W over {count} assignments "
        f"({skipped} infeasible, {failed} failed)"
    )
    if failed:
        logger.warning(f"enumeration: {failed} assignments failed; optimality not certified")
        best = best.model_copy(update={"status": SolveStatus.GAP_NOT_CERTIFIED})
    return best.assoc, best
