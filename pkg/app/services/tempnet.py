"""
Temporal network operations
Snapshot aggregation of raw events, density statistics and time-aggregated graphs
"""
import logging
from typing import Dict, List, Sequence

import numpy as np

from app.core.errors import InvalidInputError
from app.models.common import pair_count
from app.models.network import (
    AggregationScheme,
    DensityProfile,
    RawEventLog,
    Snapshot,
    TemporalNetwork,
)

logger = logging.getLogger(__name__)


def sort_labels(labels) -> List[str]:
    """Numeric order when every label is an integer, lexicographic otherwise"""
    labels = set(labels)
    try:
        return sorted(labels, key=lambda s: (int(s), s))
    except ValueError:
        return sorted(labels)


def label_index(labels: Sequence[str]) -> Dict[str, int]:
    return {label: idx for idx, label in enumerate(labels)}


def _equal_time_bins(ts: np.ndarray, n_bins: int) -> np.ndarray:
    tmin, tmax = ts.min(), ts.max()
    if tmax == tmin:
        return np.zeros(ts.shape[0], dtype=np.int64)
    # Half-open bins [tmin + b*w, tmin + (b+1)*w); the last bin also takes tmax
    bins = np.floor((ts - tmin) * n_bins / (tmax - tmin)).astype(np.int64)
    return np.minimum(bins, n_bins - 1)


def _equal_count_bins(ts: np.ndarray, n_bins: int) -> np.ndarray:
    distinct = np.unique(ts).shape[0]
    if n_bins > distinct:
        raise InvalidInputError(
            f"equal-count binning needs n_bins <= distinct timestamps ({distinct}), got {n_bins}"
        )
    order = np.sort(ts, kind="stable")
    # Events sharing a timestamp share the bin of the first of them
    first_rank = np.searchsorted(order, ts, side="left")
    return (first_rank * n_bins) // ts.shape[0]


def aggregate(log: RawEventLog, n_bins: int, scheme: AggregationScheme = AggregationScheme.EQUAL_TIME) -> TemporalNetwork:
    """
    Bin timestamped events into ``n_bins`` snapshots

    An edge appears in snapshot t iff at least one event for the pair falls
    in bin t. Labels are densely re-indexed in sorted order; endpoints of
    self-loop events stay in the node set but contribute no edge.
    """
    if len(log) == 0:
        raise InvalidInputError("Cannot aggregate an empty event log")
    if n_bins < 1:
        raise InvalidInputError(f"n_bins must be positive, got {n_bins}")

    scheme = AggregationScheme(scheme)
    if scheme == AggregationScheme.EQUAL_TIME:
        bins = _equal_time_bins(log.timestamps, n_bins)
    else:
        bins = _equal_count_bins(log.timestamps, n_bins)

    labels = sort_labels(np.concatenate([log.sources, log.targets]).tolist())
    index = label_index(labels)
    u = np.fromiter((index[s] for s in log.sources), dtype=np.int64, count=len(log))
    v = np.fromiter((index[s] for s in log.targets), dtype=np.int64, count=len(log))

    keep = u != v
    rows = np.stack([bins[keep], np.minimum(u, v)[keep], np.maximum(u, v)[keep]], axis=1)
    rows = np.unique(rows, axis=0) if rows.size else rows.reshape(0, 3)

    n = len(labels)
    per_bin: List[list] = [[] for _ in range(n_bins)]
    for b, i, j in rows.tolist():
        per_bin[b].append((i, j))

    snapshots = tuple(Snapshot(n=n, edges=frozenset(edges)) for edges in per_bin)
    net = TemporalNetwork(n=n, snapshots=snapshots, labels=tuple(labels))
    logger.info(
        f"Aggregated {len(log)} events into {n_bins} {scheme.value} snapshots "
        f"(n={n}, unique links={unique_links(net)})"
    )
    return net


def density_profile(net: TemporalNetwork, upto: int, xi: float) -> DensityProfile:
    """
    Per-snapshot densities rho_t for t <= upto and their recency-weighted mean

    rho* = sum_t xi^(upto-t) rho_t / sum_t xi^(upto-t), with 0^0 = 1 so that
    xi = 0 keeps only the last snapshot.
    """
    if net.n < 2:
        raise InvalidInputError(f"Density needs at least 2 nodes, got n={net.n}")
    if not 1 <= upto <= net.T:
        raise InvalidInputError(f"upto={upto} outside [1, {net.T}]")
    if not 0.0 <= xi <= 1.0:
        raise InvalidInputError(f"xi={xi} outside [0, 1]")

    rho = np.array([snap.m for snap in net.snapshots[:upto]], dtype=np.float64) / pair_count(net.n)
    weights = np.power(float(xi), np.arange(upto - 1, -1, -1, dtype=np.float64))
    weighted = float(np.dot(weights, rho) / weights.sum())
    weighted = float(np.clip(weighted, rho.min(), rho.max()))
    return DensityProfile(per_snapshot=tuple(float(r) for r in rho), weighted=weighted, xi=xi, upto=upto)


def memory_graph(net: TemporalNetwork, upto: int) -> Snapshot:
    """Union of the edge sets of G_1..G_upto"""
    if not 1 <= upto <= net.T:
        raise InvalidInputError(f"upto={upto} outside [1, {net.T}]")
    edges = set()
    for snap in net.snapshots[:upto]:
        edges |= snap.edges
    return Snapshot(n=net.n, edges=frozenset(edges))


def unique_links(net: TemporalNetwork) -> int:
    """Number of distinct pairs with an edge in any snapshot"""
    return memory_graph(net, net.T).m
