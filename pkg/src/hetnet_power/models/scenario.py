from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Positions(BaseModel):
    """Planar coordinates (m) of users and base stations"""

    model_config = ConfigDict(frozen=True)

    users: List[List[float]] = Field(..., description="n rows of [x, y]")
    base_stations: List[List[float]] = Field(..., description="N rows of [x, y]")


class Scenario(BaseModel):
    """Network description: counts, bandwidths, caps, noise, demands, gain statistics"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Number of users")
    N: int = Field(..., ge=1, description="Number of base stations")
    bandwidth_hz: List[float] = Field(..., description="Per-BS bandwidth B_j (Hz)")
    p_max_w: List[float] = Field(..., description="Per-BS per-RB power cap (W)")
    noise_w: float = Field(..., gt=0, description="Noise power (W)")
    demand_bps: List[float] = Field(..., description="Per-user throughput demand")
    mu_db: List[List[float]] = Field(..., description="n x N mean dB gains")
    sigma_db: List[List[float]] = Field(..., description="n x N dB gain std devs")
    positions: Optional[Positions] = Field(None, description="Optional layout")

    @field_validator("bandwidth_hz", "p_max_w", "demand_bps")
    @classmethod
    def validate_strictly_positive(cls, v, info):
        if any(not np.isfinite(item) or item <= 0 for item in v):
            raise ValueError(f"{info.field_name} entries must be finite and positive")
        return v

    @field_validator("sigma_db")
    @classmethod
    def validate_sigma(cls, v):
        if any(item < 0 or not np.isfinite(item) for row in v for item in row):
            raise ValueError("sigma_db entries must be finite and non-negative")
        return v

    @field_validator("mu_db")
    @classmethod
    def validate_mu(cls, v):
        if any(not np.isfinite(item) for row in v for item in row):
            raise ValueError("mu_db entries must be finite")
        return v

    @model_validator(mode="after")
    def validate_shapes(self):
        if len(self.bandwidth_hz) != self.N:
            raise ValueError(f"bandwidth_hz must have N={self.N} entries")
        if len(self.p_max_w) != self.N:
            raise ValueError(f"p_max_w must have N={self.N} entries")
        if len(self.demand_bps) != self.n:
            raise ValueError(f"demand_bps must have n={self.n} entries")
        for name in ("mu_db", "sigma_db"):
            matrix = getattr(self, name)
            if len(matrix) != self.n or any(len(row) != self.N for row in matrix):
                raise ValueError(f"{name} must be an n x N = {self.n} x {self.N} matrix")
        if self.positions is not None:
            if len(self.positions.users) != self.n:
                raise ValueError("positions.users must have n rows")
            if len(self.positions.base_stations) != self.N:
                raise ValueError("positions.base_stations must have N rows")
        return self

    # Array views used by the numeric code
    @property
    def B(self) -> np.ndarray:
        return np.asarray(self.bandwidth_hz, dtype=float)

    @property
    def p_max(self) -> np.ndarray:
        return np.asarray(self.p_max_w, dtype=float)

    @property
    def r(self) -> np.ndarray:
        return np.asarray(self.demand_bps, dtype=float)

    @property
    def mu(self) -> np.ndarray:
        return np.asarray(self.mu_db, dtype=float)

    @property
    def sigma(self) -> np.ndarray:
        return np.asarray(self.sigma_db, dtype=float)

    @classmethod
    def from_arrays(
        cls,
        bandwidth_hz: Sequence[float],
        p_max_w: Sequence[float],
        noise_w: float,
        demand_bps: Sequence[float],
        mu_db,
        sigma_db=None,
        positions: Optional[Positions] = None,
    ) -> "Scenario":
        """Build a scenario from array-likes; sigma defaults to zero"""
        mu = np.atleast_2d(np.asarray(mu_db, dtype=float))
        sigma = (
            np.zeros_like(mu)
            if sigma_db is None
            else np.broadcast_to(np.asarray(sigma_db, dtype=float), mu.shape)
        )
        return cls(
            n=mu.shape[0],
            N=mu.shape[1],
            bandwidth_hz=[float(v) for v in np.ravel(bandwidth_hz)],
            p_max_w=[float(v) for v in np.ravel(p_max_w)],
            noise_w=float(noise_w),
            demand_bps=[float(v) for v in np.ravel(demand_bps)],
            mu_db=mu.tolist(),
            sigma_db=np.array(sigma).tolist(),
            positions=positions,
        )

    def with_sigma_scale(self, factor: float) -> "Scenario":
        """Copy with every sigma multiplied by factor"""
        if factor < 0:
            raise ValueError("sigma scale must be non-negative")
        return self.model_copy(update={"sigma_db": (self.sigma * factor).tolist()})

    def with_uniform_sigma(self, sigma_db: float) -> "Scenario":
        """Copy with the same sigma for every (user, BS) pair"""
        if sigma_db < 0:
            raise ValueError("sigma must be non-negative")
        return self.model_copy(
            update={"sigma_db": np.full((self.n, self.N), float(sigma_db)).tolist()}
        )

    def with_demand_factor(self, factor: float) -> "Scenario":
        """Copy with every demand multiplied by factor"""
        if factor <= 0:
            raise ValueError("demand factor must be positive")
        return self.model_copy(update={"demand_bps": (self.r * factor).tolist()})


class Association(BaseModel):
    """User to base-station assignment; serving[i] = j means z_ij = 1"""

    model_config = ConfigDict(frozen=True)

    serving: List[int] = Field(..., min_length=1)

    @field_validator("serving")
    @classmethod
    def validate_serving(cls, v):
        if any(j < 0 for j in v):
            raise ValueError("BS indices must be non-negative")
        return v

    @property
    def n(self) -> int:
        return len(self.serving)

    def check(self, n: int, N: int) -> None:
        """Raise ValueError unless this association fits an n-user, N-BS network"""
        if len(self.serving) != n:
            raise ValueError(f"association covers {len(self.serving)} users, expected {n}")
        bad = [j for j in self.serving if j >= N]
        if bad:
            raise ValueError(f"association references BS {bad[0]} but N={N}")

    def z(self, N: int) -> np.ndarray:
        """Binary n x N indicator matrix"""
        z = np.zeros((self.n, N))
        z[np.arange(self.n), self.serving] = 1.0
        return z

    def users_of(self, j: int) -> List[int]:
        return [i for i, serving in enumerate(self.serving) if serving == j]


class GainSample(BaseModel):
    """One realization of the n x N linear channel gains"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    g: np.ndarray

    @field_validator("g", mode="before")
    @classmethod
    def validate_gains(cls, v):
        g = np.atleast_2d(np.asarray(v, dtype=float))
        if g.ndim != 2:
            raise ValueError("gain sample must be a matrix")
        if not np.all(np.isfinite(g)) or np.any(g <= 0):
            raise ValueError("gains must be finite and strictly positive")
        g = g.copy()
        g.setflags(write=False)
        return g
