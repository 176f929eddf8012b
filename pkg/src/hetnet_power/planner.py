from typing import Optional, Tuple, Union

from loguru import logger

from .approx.registry import resolve_approx
from .association.bnb import BnbOutcome, branch_and_bound
from .association.heuristics import enumerate_assoc, greedy_assoc
from .exceptions import ScenarioError
from .models.approximation import PiecewiseApprox
from .models.result import SolveResult
from .models.scenario import Association, Scenario
from .models.search import BnbOptions
from .models.uncertainty import RobustConfig
from .robust.box import build_box
from .robust.formulation import FormulationBuilder
from .utils.config import Settings, get_config
from .utils.performance_logger import track_performance

AssocSpec = Union[str, Association]
ASSOC_MODES = ("greedy", "enumerate", "bnb")


class PowerPlanner:
    """Main service: turns a scenario into a solved power plan"""

    def __init__(
        self, config: Optional[Settings] = None, approx: Optional[PiecewiseApprox] = None
    ):
        self.config = config or get_config()
        self.pw = approx or resolve_approx(self.config.approx)
        self.solver_options = self.config.solver_options()
        self.last_bnb: Optional[BnbOutcome] = None

    def builder(
        self,
        scenario: Scenario,
        mode: str = "deterministic",
        robust: Optional[RobustConfig] = None,
    ) -> FormulationBuilder:
        """Formulation for the given mode; robust solves scale sigma first"""
        if mode == "deterministic":
            return FormulationBuilder.deterministic(
                scenario, self.pw, big_m=self.config.big_m, sigma_scale=0.0
            )
        if mode != "robust":
            raise ScenarioError(f"Unknown mode '{mode}'", field="mode")
        robust = robust or RobustConfig(policy=self.config.box_policy)
        scaled = scenario.with_sigma_scale(robust.sigma_scale)
        box = build_box(robust.alpha, scenario.n, scenario.N, robust.policy)
        return FormulationBuilder.robust(
            scaled, self.pw, box, big_m=self.config.big_m, sigma_scale=robust.sigma_scale
        )

    def bnb_options(self) -> BnbOptions:
        return BnbOptions(node_limit=self.config.node_limit, gap_target=self.config.gap_target)

    @track_performance("planner_solve")
    def solve(
        self,
        scenario: Scenario,
        mode: str = "deterministic",
        robust: Optional[RobustConfig] = None,
        assoc: AssocSpec = "greedy",
    ) -> SolveResult:
        """Solve with a fixed association or one of greedy / enumerate / bnb"""
        builder = self.builder(scenario, mode, robust)
        if isinstance(assoc, Association):
            return builder.solve(assoc, self.solver_options)
        if assoc == "greedy":
            return builder.solve(greedy_assoc(scenario), self.solver_options)
        if assoc == "enumerate":
            _, result = enumerate_assoc(
                scenario, builder, self.config.enumerate_limit, self.solver_options
            )
            return result
        if assoc == "bnb":
            outcome = branch_and_bound(scenario, builder, self.bnb_options(), self.solver_options)
            self.last_bnb = outcome
            return outcome.result
        raise ScenarioError(
            f"Unknown association mode '{assoc}'; use fixed:<file> or one of {ASSOC_MODES}",
            field="assoc",
        )

    def solve_pair(
        self,
        scenario: Scenario,
        robust: RobustConfig,
        assoc: AssocSpec = "greedy",
    ) -> Tuple[SolveResult, SolveResult]:
        """Deterministic and robust plans of the same scenario"""
        deterministic = self.solve(scenario, "deterministic", assoc=assoc)
        result = self.solve(scenario, "robust", robust, assoc=assoc)
        logger.info(
            f"deterministic {deterministic.objective:.6e} W vs robust {result.objective:.6e} W"
        )
        return deterministic, result
