"""
Jaccard-coefficient network evolution baseline
"""
import logging
from typing import Dict, List, Tuple

import networkx as nx
import numpy as np

from app.core.errors import InvalidInputError
from app.core.rng import derive_seed
from app.models.common import NodePair, canonical_pair, round_half_up
from app.models.network import Snapshot
from app.models.scores import PredictedFuture

logger = logging.getLogger(__name__)


def to_graph(g: Snapshot) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n))
    graph.add_edges_from(g.sorted_edges())
    return graph


def jaccard_scores(g: Snapshot) -> Dict[NodePair, float]:
    """|N_u & N_v| / |N_u | N_v| for every non-adjacent pair with a positive score"""
    scores = {}
    for u, v, jc in nx.jaccard_coefficient(to_graph(g)):
        if jc > 0:
            scores[canonical_pair(u, v)] = float(jc)
    return scores


def jaccard_evolve(g: Snapshot, add_frac: float, remove_frac: float, rng_seed: int) -> Snapshot:
    """
    One evolution step: drop round(remove_frac * |E|) random edges, then add the
    round(add_frac * #scored) best-scored non-adjacent pairs (ties by (i, j))
    """
    for name, frac in (("add_frac", add_frac), ("remove_frac", remove_frac)):
        if not 0.0 <= frac <= 1.0:
            raise InvalidInputError(f"{name}={frac} outside [0, 1]")

    scored: List[Tuple[float, NodePair]] = sorted(
        ((-jc, pair) for pair, jc in jaccard_scores(g).items())
    )
    added = [pair for _, pair in scored[:round_half_up(add_frac * len(scored))]]

    edges = g.sorted_edges()
    n_remove = round_half_up(remove_frac * len(edges))
    rng = np.random.default_rng(rng_seed)
    dropped = {edges[i] for i in rng.choice(len(edges), size=n_remove, replace=False).tolist()}

    kept = [e for e in edges if e not in dropped]
    return Snapshot(n=g.n, edges=frozenset(kept + added))


def jaccard_rollout(g: Snapshot, steps: int, add_frac: float, remove_frac: float, seed: int) -> PredictedFuture:
    """Iterate jaccard_evolve from ``g``; step s draws from its own derived stream"""
    if steps < 1:
        raise InvalidInputError(f"steps must be positive, got {steps}")
    snapshots = []
    current = g
    for s in range(steps):
        current = jaccard_evolve(current, add_frac, remove_frac, derive_seed(seed, s))
        snapshots.append(current)
    logger.info(f"JC rollout: {steps} steps, edges {g.m} -> {current.m}")
    return PredictedFuture(snapshots=tuple(snapshots))
