from typing import Literal

from pydantic import BaseModel, Field


class BnbOptions(BaseModel):
    """Branch & bound limits and rules"""

    node_limit: int = Field(10_000, ge=1, description="Max nodes solved")
    gap_target: float = Field(1e-4, gt=0, description="Relative gap to certify")
    branching: Literal["most-fractional"] = "most-fractional"
    order: Literal["best-bound"] = "best-bound"
