"""
Experiment Schemas
Request/response models for running experiments and sweeps
"""
from itertools import product
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from app.config import settings
from app.models.experiment import (
    DatasetRef,
    ExperimentSpec,
    Hyperparameters,
    ImAlgorithm,
    Method,
)


class SweepGrid(BaseModel):
    """Cartesian product of seed-set sizes, methods, lam, p and T over one dataset"""
    dataset: DatasetRef
    ks: List[int] = Field(..., min_length=1, description="Seed set sizes")
    methods: List[Method] = Field(default_factory=lambda: list(Method), min_length=1)
    lams: List[float] = Field(..., min_length=1, description="Infection probabilities")
    ps: List[int] = Field(..., min_length=1, description="Observed prefix lengths")
    Ts: List[Optional[int]] = Field(default_factory=lambda: [None], min_length=1, description="Horizons")
    im_algorithm: ImAlgorithm = ImAlgorithm.GREEDY
    mc_runs: int = Field(default=settings.DEFAULT_MC_RUNS, ge=1)
    rng_seed: int = Field(default=0, ge=0)
    history: Optional[int] = Field(None, ge=1)
    hyper: Hyperparameters = Field(default_factory=Hyperparameters)

    @field_validator("ks", "ps")
    @classmethod
    def validate_positive(cls, v):
        if any(x < 1 for x in v):
            raise ValueError("Values must be positive")
        return sorted(set(v))

    @field_validator("methods")
    @classmethod
    def validate_methods(cls, v):
        return list(dict.fromkeys(v))

    def expand(self) -> List[ExperimentSpec]:
        """One spec per combination, in (p, T, lam, k, method) order"""
        return [
            ExperimentSpec(
                dataset=self.dataset,
                p=p,
                T=T,
                lam=lam,
                k=k,
                method=method,
                im_algorithm=self.im_algorithm,
                mc_runs=self.mc_runs,
                rng_seed=self.rng_seed,
                history=self.history,
                hyper=self.hyper,
            )
            for p, T, lam, k, method in product(self.ps, self.Ts, self.lams, self.ks, self.methods)
        ]

    class Config:
        json_schema_extra = {
            "example": {
                "dataset": {"path": "synthetic.txt", "format": "snapshots"},
                "ks": [2, 5, 10],
                "methods": ["oracle", "static-mem", "logreg-sum"],
                "lams": [0.1],
                "ps": [16],
                "Ts": [20],
                "mc_runs": 1000,
                "rng_seed": 7
            }
        }


class SweepFailureResponse(BaseModel):
    fingerprint: str
    method: Method
    k: int
    error: str


class SweepResponse(BaseModel):
    """Tidy result rows plus per-spec failures"""
    rows: List[Dict[str, Any]]
    failures: List[SweepFailureResponse]
    ok: bool
