"""
Seed selection
Greedy marginal gain, dynamic and static degree discount, and score-sum ranking
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Set, Tuple

import numpy as np

from app.config import settings
from app.core.errors import InvalidInputError
from app.models.diffusion import SeedSet
from app.models.network import Snapshot, TemporalNetwork
from app.models.scores import ScoreMatrix
from app.services.diffusion import SigmaEstimator

logger = logging.getLogger(__name__)


def _eligible(n: int, k: int, candidates: Optional[Iterable[int]]) -> np.ndarray:
    """Boolean mask of selectable nodes; every selector needs k of them"""
    if k < 1:
        raise InvalidInputError(f"k must be positive, got {k}")
    if k > n:
        raise InvalidInputError(f"k={k} exceeds n={n}")
    mask = np.ones(n, dtype=bool)
    if candidates is not None:
        mask[:] = False
        mask[np.fromiter(candidates, dtype=np.int64)] = True
        if mask.sum() < k:
            raise InvalidInputError(f"Only {int(mask.sum())} candidate nodes for k={k}")
    return mask


def top_k(values: np.ndarray, k: int, excluded: Iterable[int] = ()) -> List[int]:
    """The k largest entries outside ``excluded``, lowest NodeId on ties"""
    skip = set(excluded)
    order = np.lexsort((np.arange(len(values)), -np.asarray(values)))
    return [int(v) for v in order if int(v) not in skip][:k]


def _argmax(values: np.ndarray, eligible: np.ndarray) -> int:
    """Largest value among eligible nodes; lowest NodeId on ties"""
    return int(np.argmax(np.where(eligible, values, -np.inf)))


# ============================================================================
# GREEDY
# ============================================================================

def greedy_select(
    net: TemporalNetwork,
    k: int,
    sigma: SigmaEstimator,
    workers: Optional[int] = None,
    candidates: Optional[Iterable[int]] = None,
) -> SeedSet:
    """
    Add, k times, the node with the largest marginal gain sigma(S + u) - sigma(S)

    ``sigma`` must be deterministic for a given seed tuple (exact_sigma, or
    simulate_si with a fixed rng_seed), so every candidate in a step is scored
    on the same random schedule.
    """
    eligible = _eligible(net.n, k, candidates)
    workers = workers or settings.IM_WORKERS
    chosen: List[int] = []
    base = 0.0

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for step in range(k):
            pending = np.flatnonzero(eligible).tolist()
            trial = [tuple(chosen + [u]) for u in pending]
            if pool is not None:
                spreads = list(pool.map(sigma, trial))
            else:
                spreads = [sigma(s) for s in trial]
            best = int(np.argmax(np.asarray(spreads) - base))
            u = pending[best]
            logger.debug(f"greedy step {step + 1}: node {u}, gain {spreads[best] - base:.4f}")
            chosen.append(u)
            eligible[u] = False
            base = spreads[best]
    finally:
        if pool is not None:
            pool.shutdown()

    return SeedSet(nodes=chosen)


# ============================================================================
# DYNAMIC DEGREE DISCOUNT
# ============================================================================

def dynamic_degree(net: TemporalNetwork, t_a: int, t_b: int) -> np.ndarray:
    """
    D(v) = sum over consecutive (G_{t-1}, G_t) in [t_a, t_b] of
    |N_{t-1} \\ N_t| / |N_{t-1} u N_t| * |N_t|, a term being 0 when the union is empty
    """
    if not 1 <= t_a < t_b <= net.T:
        raise InvalidInputError(f"Dynamic degree range [{t_a}, {t_b}] invalid for T={net.T}")
    total = np.zeros(net.n, dtype=np.float64)
    prev = net.snapshot(t_a).dense()
    for t in range(t_a + 1, t_b + 1):
        cur = net.snapshot(t).dense()
        lost = (prev & ~cur).sum(axis=1)
        union = (prev | cur).sum(axis=1)
        degree = cur.sum(axis=1)
        ratio = np.divide(lost, union, out=np.zeros(net.n), where=union > 0)
        total += ratio * degree
        prev = cur
    return total


class DynamicDegreeTable:
    """
    Working state of dynamic degree discount: D(v), neighbour unions over
    the range, selected-neighbour counters t_u and discounted degrees dd_u
    """

    def __init__(self, D: np.ndarray, neighbors: List[Set[int]]):
        self.D = np.asarray(D, dtype=np.float64)
        self.neighbors = neighbors
        self.t = np.zeros(self.D.shape[0], dtype=np.int64)
        self.dd = self.D.copy()

    @classmethod
    def from_network(cls, net: TemporalNetwork, t_a: int, t_b: int) -> "DynamicDegreeTable":
        if not 1 <= t_a <= t_b <= net.T:
            raise InvalidInputError(f"Range [{t_a}, {t_b}] invalid for T={net.T}")
        # A single snapshot has no transitions, so every D(v) is 0
        D = dynamic_degree(net, t_a, t_b) if t_a < t_b else np.zeros(net.n)
        neighbors: List[Set[int]] = [set() for _ in range(net.n)]
        for t in range(t_a, t_b + 1):
            for i, j in net.snapshot(t).edges:
                neighbors[i].add(j)
                neighbors[j].add(i)
        return cls(D, neighbors)

    def discount(self, v: int, lam: float) -> None:
        """dd_u = D(u) - 2 t_u - (D(u) - t_u) t_u lam for every u in N_v; not clamped"""
        for u in self.neighbors[v]:
            self.t[u] += 1
            t_u = self.t[u]
            self.dd[u] = self.D[u] - 2 * t_u - (self.D[u] - t_u) * t_u * lam


def dyn_deg_discount(
    net: TemporalNetwork,
    k: int,
    lam: float,
    t_a: int = 1,
    t_b: Optional[int] = None,
    candidates: Optional[Iterable[int]] = None,
) -> SeedSet:
    """Dynamic degree discount over snapshots t_a..t_b (default: the whole network)"""
    eligible = _eligible(net.n, k, candidates)
    table = DynamicDegreeTable.from_network(net, t_a, net.T if t_b is None else t_b)
    chosen = []
    for _ in range(k):
        v = _argmax(table.dd, eligible)
        chosen.append(v)
        eligible[v] = False
        table.discount(v, lam)
    return SeedSet(nodes=chosen)


# ============================================================================
# STATIC DEGREE DISCOUNT
# ============================================================================

def static_degree_discount(g: Snapshot, k: int, candidates: Optional[Iterable[int]] = None) -> SeedSet:
    """Pick the max-degree node, then lower each neighbour's degree by one"""
    eligible = _eligible(g.n, k, candidates)
    degree = g.degrees().astype(np.float64)
    neighbors = g.neighbor_sets()
    chosen = []
    for _ in range(k):
        v = _argmax(degree, eligible)
        chosen.append(v)
        eligible[v] = False
        for u in neighbors[v]:
            degree[u] -= 1
    return SeedSet(nodes=chosen)


# ============================================================================
# SCORE SUM
# ============================================================================

def score_sum_select(scores: ScoreMatrix, k: int, candidates: Optional[Iterable[int]] = None) -> SeedSet:
    """Top-k nodes by theta_i = sum_j P_ij, lowest NodeId on ties"""
    eligible = _eligible(scores.n, k, candidates)
    return SeedSet(nodes=top_k(scores.row_sums(), k, excluded=np.flatnonzero(~eligible).tolist()))


# ============================================================================
# FILL RULE
# ============================================================================

def fill_seeds(seeds: SeedSet, k: int, history: Snapshot) -> Tuple[SeedSet, int]:
    """
    Top up ``seeds`` to k nodes by descending degree on the historical graph,
    lowest NodeId on ties. Returns the seed set and how many nodes were added.
    """
    missing = k - seeds.k
    if missing <= 0:
        return seeds, 0
    extra = top_k(history.degrees(), missing, excluded=seeds.nodes)
    logger.warning(f"Prediction has too few active nodes; filled {len(extra)} seeds by historical degree")
    return SeedSet(nodes=seeds.nodes + tuple(extra)), len(extra)
