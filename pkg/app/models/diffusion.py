"""
Diffusion models
SI spreading configuration, seed sets and Monte Carlo outcomes
"""
from typing import Optional, Tuple

from pydantic import Field, field_validator, model_validator

from app.models.common import FrozenModel, NodeId, UnitInterval


class DiffusionConfig(FrozenModel):
    """
    SI process parameters
    Seeds are infected at snapshot start_t; spreading uses G_start_t..G_end_t
    and influence is counted after the last step
    """
    lam: UnitInterval = Field(..., description="Infection probability per contact per step")
    start_t: int = Field(..., ge=1, description="Snapshot at which seeds are infected")
    end_t: int = Field(..., ge=1, description="Last snapshot on which spreading occurs")
    mc_runs: int = Field(default=1000, ge=1, description="Monte Carlo samples")
    rng_seed: int = Field(default=0, ge=0, lt=2**64, description="Master RNG seed")

    @model_validator(mode="after")
    def validate_window(self):
        if self.start_t > self.end_t:
            raise ValueError(f"start_t={self.start_t} must not exceed end_t={self.end_t}")
        return self

    @property
    def steps(self) -> int:
        return self.end_t - self.start_t + 1


class SeedSet(FrozenModel):
    """Seed nodes S in selection order"""
    nodes: Tuple[NodeId, ...] = Field(default_factory=tuple)

    @field_validator("nodes", mode="before")
    @classmethod
    def validate_unique(cls, v):
        v = tuple(int(x) for x in v)
        if len(set(v)) != len(v):
            raise ValueError("Seed set contains duplicate nodes")
        return v

    @property
    def k(self) -> int:
        return len(self.nodes)

    def as_set(self) -> frozenset:
        return frozenset(self.nodes)


class DiffusionOutcome(FrozenModel):
    """Estimate of sigma(S) from repeated SI runs"""
    mean_spread: float = Field(..., ge=0, description="Estimate of sigma(S)")
    stderr: float = Field(..., ge=0, description="Standard error of the mean")
    mc_runs: int = Field(..., ge=1)
    per_run_final_counts: Optional[Tuple[int, ...]] = Field(
        None, description="Infected count after the last step for each run"
    )
