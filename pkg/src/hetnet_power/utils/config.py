from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..solver.program import SolverOptions

VALID_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
VALID_BOX_POLICIES = ["one-sided", "two-sided"]


class Settings(BaseSettings):
    """Application configuration, read from HETNET_* environment variables"""

    # Logging
    log_level: str = Field("INFO", description="Console/file log level")
    log_dir: Optional[str] = Field(
        None, description="Directory for rotating log files; console only if unset"
    )

    # Barrier solver
    solver_tol: float = Field(1e-8, description="Duality measure target")
    max_newton_iters: int = Field(200, description="Newton steps per centering")
    barrier_growth: float = Field(10.0, description="Barrier parameter growth mu")
    initial_t: float = Field(1.0, description="Initial barrier parameter")
    big_m: float = Field(1e6, description="Big-M constant of the association relaxation")

    # Robust formulation and Monte Carlo
    approx: str = Field("paper-m5", description="Approximation preset or fit spec")
    box_policy: str = Field("one-sided", description="Uncertainty box policy")
    mc_samples: int = Field(100_000, description="Monte Carlo sample count")
    seed: int = Field(0, description="Default RNG seed")
    workers: int = Field(1, description="Worker threads for sweeps and sampling")

    # Association search
    node_limit: int = Field(10_000, description="Branch & bound node limit")
    gap_target: float = Field(1e-4, description="Branch & bound relative gap target")
    enumerate_limit: int = Field(4096, description="Max assignments for enumeration")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        if v.upper() not in VALID_LOG_LEVELS:
            raise ValueError(f"Log level must be one of {VALID_LOG_LEVELS}")
        return v.upper()

    @field_validator("solver_tol", "initial_t", "big_m", "gap_target")
    @classmethod
    def validate_positive(cls, v, info):
        if v <= 0:
            raise ValueError(f"{info.field_name} must be positive")
        return v

    @field_validator("barrier_growth")
    @classmethod
    def validate_barrier_growth(cls, v):
        if v <= 1:
            raise ValueError("Barrier growth must be greater than 1")
        return v

    @field_validator("max_newton_iters", "mc_samples", "workers", "node_limit", "enumerate_limit")
    @classmethod
    def validate_at_least_one(cls, v, info):
        if v < 1:
            raise ValueError(f"{info.field_name} must be at least 1")
        return v

    @field_validator("box_policy")
    @classmethod
    def validate_box_policy(cls, v):
        if v not in VALID_BOX_POLICIES:
            raise ValueError(f"Box policy must be one of {VALID_BOX_POLICIES}")
        return v

    def solver_options(self) -> SolverOptions:
        """Build the solver options described by this configuration"""
        return SolverOptions(
            tol=self.solver_tol,
            max_newton_iters=self.max_newton_iters,
            barrier_growth=self.barrier_growth,
            initial_t=self.initial_t,
            big_m=self.big_m,
        )

    model_config = SettingsConfigDict(
        env_prefix="HETNET_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


# Global config instance
_config_instance: Optional[Settings] = None


def get_config() -> Settings:
    """Get the global config instance."""
    global _config_instance
    if _config_instance is None:
        _config_instance = Settings()
    return _config_instance


def set_config(config: Settings) -> None:
    """Set the global config instance."""
    global _config_instance
    _config_instance = config
