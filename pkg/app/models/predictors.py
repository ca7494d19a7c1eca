"""
Fitted link-prediction models
"""
from typing import Dict, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.models.common import ArrayModel
from app.models.scores import PairIndex


def _readonly(arr, dtype=np.float64) -> np.ndarray:
    out = np.array(arr, dtype=dtype)
    out.setflags(write=False)
    return out


class LassoLogitModel(ArrayModel):
    """
    One L1-penalized logistic regression per historical pair

    Pair i is modelled as expit(intercepts[i] + x(t) @ coef[:, i]), so
    column i of ``coef`` holds (beta_i1..beta_iM) and every pair's lag
    (its own and all others) is a feature.
    """
    pair_index: PairIndex
    intercepts: np.ndarray = Field(..., description="beta_i0 per pair, shape (M,)")
    coef: np.ndarray = Field(..., description="beta_ij, shape (M features, M pairs)")
    alpha: float = Field(..., gt=0, description="Chosen L1 penalty")
    validation_auc: Dict[float, float] = Field(default_factory=dict, description="Pooled validation AUC per alpha")
    sweeps: int = Field(default=0, ge=0)
    converged: bool = True

    @field_validator("intercepts", "coef", mode="before")
    @classmethod
    def validate_arrays(cls, v):
        arr = _readonly(v)
        if not np.all(np.isfinite(arr)):
            raise ValueError("Coefficients must be finite")
        return arr

    @model_validator(mode="after")
    def validate_shapes(self):
        m = self.pair_index.M
        if self.intercepts.shape != (m,) or self.coef.shape != (m, m):
            raise ValueError(
                f"Expected intercepts ({m},) and coef ({m}, {m}), "
                f"got {self.intercepts.shape} and {self.coef.shape}"
            )
        return self

    @property
    def sparsity(self) -> float:
        """Fraction of exactly-zero non-intercept coefficients"""
        return float(np.mean(self.coef == 0.0)) if self.coef.size else 1.0

    @property
    def nonzero(self) -> int:
        return int(np.count_nonzero(self.coef))


class NmfModel(ArrayModel):
    """
    Temporal consensus NMF: A_t ~ U_t V_t with U_t, V_t pulled towards the
    attenuation-weighted means U_*, V_*
    """
    U: np.ndarray = Field(..., description="Per-snapshot U_t, shape (p, n, q)")
    V: np.ndarray = Field(..., description="Per-snapshot V_t, shape (p, q, n)")
    U_star: np.ndarray = Field(..., description="Consensus U_*, shape (n, q)")
    V_star: np.ndarray = Field(..., description="Consensus V_*, shape (q, n)")
    phi: float = Field(..., gt=0, le=1, description="Attenuation coefficient")
    loss_history: Tuple[float, ...] = Field(default_factory=tuple, description="Loss after each iteration")
    converged: bool = True
    restart: int = Field(default=0, ge=0, description="Index of the kept restart")

    @field_validator("U", "V", "U_star", "V_star", mode="before")
    @classmethod
    def validate_nonnegative(cls, v):
        arr = _readonly(v)
        if np.any(arr < 0):
            raise ValueError("NMF factors must be non-negative")
        return arr

    @model_validator(mode="after")
    def validate_shapes(self):
        p, n, q = self.U.shape
        if self.V.shape != (p, q, n) or self.U_star.shape != (n, q) or self.V_star.shape != (q, n):
            raise ValueError("Inconsistent NMF factor shapes")
        if q >= n:
            raise ValueError(f"Rank q={q} must be smaller than n={n}")
        return self

    @property
    def p(self) -> int:
        return self.U.shape[0]

    @property
    def n(self) -> int:
        return self.U.shape[1]

    @property
    def q(self) -> int:
        return self.U.shape[2]

    @property
    def final_loss(self) -> float:
        return self.loss_history[-1] if self.loss_history else float("nan")

    def weights(self) -> np.ndarray:
        """phi^(p - t) for t = 1..p"""
        return self.phi ** np.arange(self.p - 1, -1, -1, dtype=np.float64)
