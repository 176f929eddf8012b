from typing import Optional

import numpy as np

from ..exceptions import ScenarioError
from ..models.result import FeasibilityReport, SolveResult
from ..models.scenario import GainSample, Scenario
from .channel import db_to_linear, serving_sinr, throughput_vector


def check_shapes(result: SolveResult, scenario: Scenario) -> None:
    """Raise ScenarioError when a result does not belong to the scenario"""
    if result.N != scenario.N:
        raise ScenarioError(
            f"Result has {result.N} base stations, scenario has {scenario.N}", field="P"
        )
    if result.n != scenario.n or any(len(row) != scenario.N for row in result.x):
        raise ScenarioError(
            f"Result allocation is not {scenario.n} x {scenario.N}", field="x"
        )
    try:
        result.assoc.check(scenario.n, scenario.N)
    except ValueError as e:
        raise ScenarioError(str(e), field="assoc") from e


def check_feasible(
    result: SolveResult,
    scenario: Scenario,
    g: Optional[GainSample] = None,
    tol: float = 1e-6,
) -> FeasibilityReport:
    """Audit caps, resource budgets and true Shannon throughputs.

    Slacks are relative (power and throughput) or absolute (resource shares,
    already fractions of one). Defaults to the mean gains when g is None.
    """
    check_shapes(result, scenario)
    gains = g.g if g is not None else db_to_linear(scenario.mu)
    if gains.shape != (scenario.n, scenario.N):
        raise ScenarioError("Gain sample shape does not match scenario", field="g")

    P = result.powers
    x = result.allocation
    serving = np.asarray(result.assoc.serving)
    throughput = throughput_vector(x, P, gains, scenario.B, scenario.noise_w, serving)
    sinr = serving_sinr(P, gains, scenario.noise_w, serving)

    power_slack = 1.0 - P / scenario.p_max
    resource_slack = 1.0 - x.sum(axis=0)
    throughput_slack = throughput - scenario.r
    relative = throughput / scenario.r - 1.0

    passed = bool(
        np.all(power_slack >= -tol)
        and np.all(resource_slack >= -tol)
        and np.all(relative >= -tol)
    )
    return FeasibilityReport(
        power_slack=power_slack.tolist(),
        resource_slack=resource_slack.tolist(),
        throughput_slack=throughput_slack.tolist(),
        relative_throughput_slack=relative.tolist(),
        throughput=throughput.tolist(),
        sinr=sinr.tolist(),
        tol=tol,
        passed=passed,
    )
