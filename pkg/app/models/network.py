"""
Temporal network data model
Snapshots over a fixed node set, raw event logs and density statistics
"""
from enum import Enum
from typing import FrozenSet, List, Optional, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator
from scipy import sparse

from app.models.common import ArrayModel, FrozenModel, NodePair, UnitInterval, pair_count


class AggregationScheme(str, Enum):
    EQUAL_TIME = "equal-time"
    EQUAL_COUNT = "equal-count"


class Snapshot(FrozenModel):
    """
    Undirected graph G_t over nodes 0..n-1
    Edges are stored canonically as (i, j) with i < j
    """
    n: int = Field(..., ge=0, description="Node count")
    edges: FrozenSet[NodePair] = Field(default_factory=frozenset, description="Canonical edge pairs")

    @model_validator(mode="after")
    def validate_edges(self):
        """Reject self-loops, non-canonical pairs and out-of-range nodes"""
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"Self-loop on node {i} is not allowed")
            if not (0 <= i < j < self.n):
                raise ValueError(f"Edge ({i}, {j}) must satisfy 0 <= i < j < n={self.n}")
        return self

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "Snapshot":
        """Build from arbitrary (u, v) pairs; orientation is dropped, self-loops skipped"""
        edges = set()
        for u, v in pairs:
            u, v = int(u), int(v)
            if u != v:
                edges.add((u, v) if u < v else (v, u))
        return cls(n=n, edges=frozenset(edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def density(self) -> float:
        pairs = pair_count(self.n)
        return self.m / pairs if pairs else 0.0

    def sorted_edges(self) -> List[NodePair]:
        return sorted(self.edges)

    def adjacency(self, dtype=np.float64) -> sparse.csr_matrix:
        """Symmetric sparse adjacency matrix"""
        if not self.edges:
            return sparse.csr_matrix((self.n, self.n), dtype=dtype)
        ij = np.array(self.sorted_edges(), dtype=np.int64)
        rows = np.concatenate([ij[:, 0], ij[:, 1]])
        cols = np.concatenate([ij[:, 1], ij[:, 0]])
        data = np.ones(rows.shape[0], dtype=dtype)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def dense(self) -> np.ndarray:
        """Dense boolean adjacency matrix"""
        a = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            a[i, j] = a[j, i] = True
        return a

    def neighbor_sets(self) -> List[set]:
        nbrs = [set() for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return nbrs

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def active_nodes(self) -> FrozenSet[int]:
        """Nodes with at least one edge"""
        return frozenset(v for e in self.edges for v in e)


class TemporalNetwork(FrozenModel):
    """
    Ordered sequence of snapshots G_1..G_T over a fixed node set
    Snapshot indices are 1-based throughout the toolkit
    """
    n: int = Field(..., ge=0, description="Node count")
    snapshots: Tuple[Snapshot, ...] = Field(..., min_length=1, description="G_1..G_T")
    labels: Optional[Tuple[str, ...]] = Field(None, description="Original label of each NodeId")
    split: Optional[int] = Field(None, ge=1, description="Observed prefix length p")

    @model_validator(mode="after")
    def validate_network(self):
        for t, snap in enumerate(self.snapshots, start=1):
            if snap.n != self.n:
                raise ValueError(f"Snapshot {t} has n={snap.n}, network has n={self.n}")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError(f"Expected {self.n} labels, got {len(self.labels)}")
        if self.split is not None and self.split >= self.T:
            raise ValueError(f"Split p={self.split} must be smaller than T={self.T}")
        return self

    @property
    def T(self) -> int:
        return len(self.snapshots)

    def snapshot(self, t: int) -> Snapshot:
        """G_t for 1 <= t <= T"""
        if not 1 <= t <= self.T:
            raise IndexError(f"Snapshot index {t} outside [1, {self.T}]")
        return self.snapshots[t - 1]

    def window(self, start: int, end: int) -> "TemporalNetwork":
        """Sub-network G_start..G_end (inclusive, 1-based)"""
        if not 1 <= start <= end <= self.T:
            raise IndexError(f"Window [{start}, {end}] outside [1, {self.T}]")
        return TemporalNetwork(n=self.n, snapshots=self.snapshots[start - 1:end], labels=self.labels)

    def with_split(self, p: int) -> "TemporalNetwork":
        """Same network with the observed prefix length set (validated)"""
        return TemporalNetwork(n=self.n, snapshots=self.snapshots, labels=self.labels, split=p)

    def _require_split(self) -> int:
        if self.split is None:
            raise ValueError("Network has no observed/future split")
        return self.split

    def observed(self) -> "TemporalNetwork":
        """G_1..G_p"""
        return self.window(1, self._require_split())

    def future(self) -> "TemporalNetwork":
        """G_{p+1}..G_T"""
        return self.window(self._require_split() + 1, self.T)

    def active_nodes(self) -> FrozenSet[int]:
        """Nodes with an edge in any snapshot"""
        active = set()
        for snap in self.snapshots:
            active |= snap.active_nodes()
        return frozenset(active)

    @classmethod
    def replicate(cls, snap: Snapshot, times: int, labels=None) -> "TemporalNetwork":
        return cls(n=snap.n, snapshots=(snap,) * times, labels=labels)


class RawEventLog(ArrayModel):
    """Timestamped contact events (timestamp, u, v) before aggregation"""
    timestamps: np.ndarray = Field(..., description="Event times, float64")
    sources: np.ndarray = Field(..., description="First endpoint label of each event")
    targets: np.ndarray = Field(..., description="Second endpoint label of each event")

    @field_validator("timestamps", mode="before")
    @classmethod
    def validate_timestamps(cls, v):
        arr = np.asarray(v, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("timestamps must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("timestamps must be finite")
        return arr

    @field_validator("sources", "targets", mode="before")
    @classmethod
    def validate_labels(cls, v):
        return np.asarray(v).astype(str)

    @model_validator(mode="after")
    def validate_lengths(self):
        if not (len(self.timestamps) == len(self.sources) == len(self.targets)):
            raise ValueError("timestamps, sources and targets must have equal length")
        return self

    def __len__(self) -> int:
        return len(self.timestamps)

    @classmethod
    def from_events(cls, events) -> "RawEventLog":
        """Build from an iterable of (timestamp, u, v) triples"""
        events = list(events)
        return cls(
            timestamps=np.array([e[0] for e in events], dtype=np.float64),
            sources=np.array([str(e[1]) for e in events]),
            targets=np.array([str(e[2]) for e in events]),
        )


class DensityProfile(FrozenModel):
    """Per-snapshot edge densities and their recency-weighted mean"""
    per_snapshot: Tuple[UnitInterval, ...] = Field(..., description="rho_t for t = 1..upto")
    weighted: UnitInterval = Field(..., description="rho* (recency-weighted mean density)")
    xi: UnitInterval = Field(..., description="Decay factor")
    upto: int = Field(..., ge=1)
