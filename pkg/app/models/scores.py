"""
Link-prediction outputs
Score matrices, the historical pair index and predicted futures
"""
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.models.common import ArrayModel, FrozenModel, NodePair
from app.models.network import Snapshot, TemporalNetwork


class ScoreKind(str, Enum):
    PROBABILITY = "probability"
    SIMILARITY = "similarity"


class ScoreMatrix(ArrayModel):
    """Symmetric n x n link scores with a zero diagonal"""
    values: np.ndarray = Field(..., description="Score of each node pair")
    kind: ScoreKind = Field(..., description="Probabilities or similarity scores")

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, v):
        arr = np.array(v, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"Score matrix must be square, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Score matrix must be finite")
        if not np.allclose(arr, arr.T, atol=1e-12):
            raise ValueError("Score matrix must be symmetric")
        if np.any(np.diag(arr) != 0):
            raise ValueError("Score matrix diagonal must be zero")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def validate_kind(self):
        if self.kind == ScoreKind.PROBABILITY and (self.values.min(initial=0.0) < 0 or self.values.max(initial=0.0) > 1):
            raise ValueError("Probability scores must lie in [0, 1]")
        return self

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def row_sums(self) -> np.ndarray:
        """theta_i = sum_j P_ij"""
        return self.values.sum(axis=1)


class PairIndex(FrozenModel):
    """
    Node pairs with at least one edge in the training window
    Pairs are ordered lexicographically by (i, j)
    """
    n: int = Field(..., ge=0)
    pairs: Tuple[NodePair, ...] = Field(default_factory=tuple)

    @field_validator("pairs")
    @classmethod
    def validate_sorted(cls, v):
        if list(v) != sorted(set(v)):
            raise ValueError("Pairs must be unique and sorted lexicographically")
        return v

    @classmethod
    def from_network(cls, net: TemporalNetwork, p: int) -> "PairIndex":
        seen = set()
        for snap in net.snapshots[:p]:
            seen |= snap.edges
        return cls(n=net.n, pairs=tuple(sorted(seen)))

    @property
    def M(self) -> int:
        return len(self.pairs)

    def reverse(self) -> Dict[NodePair, int]:
        """Pair -> column position"""
        return {pair: idx for idx, pair in enumerate(self.pairs)}

    def indicator(self, snap: Snapshot, lookup: Optional[Dict[NodePair, int]] = None) -> np.ndarray:
        """x(t): 1.0 where pair m has an edge in ``snap``; edges outside the index are dropped"""
        lookup = self.reverse() if lookup is None else lookup
        x = np.zeros(self.M)
        cols = np.fromiter((lookup[pair] for pair in snap.edges if pair in lookup), dtype=np.intp)
        x[cols] = 1.0
        return x

    def design(self, net: TemporalNetwork, start: int, end: int) -> np.ndarray:
        """Rows x(start)..x(end) stacked into a (end-start+1) x M matrix"""
        lookup = self.reverse()
        return np.vstack([self.indicator(net.snapshot(t), lookup) for t in range(start, end + 1)])

    def to_matrix(self, values: np.ndarray) -> np.ndarray:
        """Scatter per-pair values into a symmetric n x n matrix; other pairs are 0"""
        mat = np.zeros((self.n, self.n))
        if self.M:
            ij = np.array(self.pairs)
            mat[ij[:, 0], ij[:, 1]] = values
            mat[ij[:, 1], ij[:, 0]] = values
        return mat


class PredictedFuture(FrozenModel):
    """
    Scores and predicted snapshots for steps p+1..T
    edges_per_step is set when the snapshots were density-matched by binarization
    """
    scores: Tuple[ScoreMatrix, ...] = Field(default_factory=tuple)
    snapshots: Tuple[Snapshot, ...] = Field(default_factory=tuple)
    edges_per_step: Optional[int] = Field(None, ge=0)

    @model_validator(mode="after")
    def validate_edge_counts(self):
        if self.edges_per_step is not None:
            for s, snap in enumerate(self.snapshots, start=1):
                if snap.m != self.edges_per_step:
                    raise ValueError(f"Step {s} has {snap.m} edges, expected {self.edges_per_step}")
        return self

    @property
    def steps(self) -> int:
        return max(len(self.scores), len(self.snapshots))

    def as_network(self, labels=None) -> TemporalNetwork:
        """Binarized steps as a temporal network of length T - p"""
        if not self.snapshots:
            raise ValueError("Prediction has no binarized snapshots")
        return TemporalNetwork(n=self.snapshots[0].n, snapshots=self.snapshots, labels=labels)
