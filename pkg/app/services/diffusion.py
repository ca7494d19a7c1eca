"""
SI diffusion on temporal networks
Monte Carlo estimation of sigma(S) and exact enumeration for tiny instances
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy import sparse

from app.config import settings
from app.core.errors import InstanceTooLargeError, InvalidInputError
from app.core.rng import chunk_generator
from app.models.diffusion import DiffusionConfig, DiffusionOutcome, SeedSet
from app.models.network import TemporalNetwork

logger = logging.getLogger(__name__)

# Maps a seed tuple to an estimate of sigma(S)
SigmaEstimator = Callable[[Sequence[int]], float]


def _check_window(net: TemporalNetwork, start_t: int, end_t: int) -> None:
    if not 1 <= start_t <= end_t <= net.T:
        raise InvalidInputError(f"Diffusion window [{start_t}, {end_t}] outside [1, {net.T}]")


def _check_seeds(net: TemporalNetwork, seeds: SeedSet) -> None:
    if seeds.k == 0:
        raise InvalidInputError("Seed set is empty")
    bad = [v for v in seeds.nodes if v >= net.n]
    if bad:
        raise InvalidInputError(f"Seed nodes {bad} outside [0, {net.n})")


def _run_chunk(
    adjacency: List[sparse.csr_matrix],
    seeds: np.ndarray,
    lam: float,
    n: int,
    runs: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Final infected counts of ``runs`` independent SI runs"""
    infected = np.zeros((runs, n), dtype=bool)
    infected[:, seeds] = True
    for adj in adjacency:
        # Infected neighbours of every node, per run
        pressure = np.asarray(adj @ infected.T.astype(np.float64)).T
        p_inf = 1.0 - np.power(1.0 - lam, pressure)
        # Nodes infected this step only start spreading at the next one
        infected |= rng.random((runs, n)) < p_inf
    return infected.sum(axis=1)


def simulate_si(
    net: TemporalNetwork,
    seeds: SeedSet,
    cfg: DiffusionConfig,
    workers: Optional[int] = None,
    keep_runs: bool = True,
) -> DiffusionOutcome:
    """
    Monte Carlo estimate of the SI influence spread sigma(S)

    Seeds are infected at ``cfg.start_t``; on every snapshot up to
    ``cfg.end_t`` each susceptible node escapes infection with probability
    (1 - lam)^m, m being its number of infected neighbours. Runs are split
    into fixed-size chunks with their own random streams, so the per-run
    counts do not depend on ``workers``.
    """
    _check_seeds(net, seeds)
    _check_window(net, cfg.start_t, cfg.end_t)

    adjacency = [net.snapshot(t).adjacency() for t in range(cfg.start_t, cfg.end_t + 1)]
    seed_idx = np.array(seeds.nodes, dtype=np.int64)
    chunk = settings.MC_CHUNK_SIZE
    sizes = [min(chunk, cfg.mc_runs - c * chunk) for c in range(math.ceil(cfg.mc_runs / chunk))]

    def work(c: int) -> np.ndarray:
        return _run_chunk(adjacency, seed_idx, cfg.lam, net.n, sizes[c], chunk_generator(cfg.rng_seed, c))

    workers = workers or settings.IM_WORKERS
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    else:
        parts = [work(c) for c in range(len(sizes))]

    counts = np.concatenate(parts)
    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / math.sqrt(counts.shape[0])) if counts.shape[0] > 1 else 0.0
    return DiffusionOutcome(
        mean_spread=mean,
        stderr=stderr,
        mc_runs=cfg.mc_runs,
        per_run_final_counts=tuple(int(c) for c in counts) if keep_runs else None,
    )


def exact_sigma(net: TemporalNetwork, seeds: SeedSet, lam: float, start_t: int, end_t: int) -> float:
    """
    Exact sigma(S) by propagating the distribution over infected sets

    Each state is a bitmask of infected nodes. At every step the exposed
    susceptible nodes get infected independently, node v with probability
    1 - (1 - lam)^deg_I(v), so all their subsets are enumerated.
    """
    _check_seeds(net, seeds)
    _check_window(net, start_t, end_t)
    if not 0.0 <= lam <= 1.0:
        raise InvalidInputError(f"lam={lam} outside [0, 1]")
    if net.n > settings.EXACT_MAX_NODES or end_t - start_t > settings.EXACT_MAX_STEPS:
        raise InstanceTooLargeError(net.n, end_t - start_t, settings.EXACT_MAX_NODES, settings.EXACT_MAX_STEPS)

    n = net.n
    start = 0
    for v in seeds.nodes:
        start |= 1 << v
    states: Dict[int, float] = {start: 1.0}

    for t in range(start_t, end_t + 1):
        adj = net.snapshot(t).dense()
        nxt: Dict[int, float] = {}
        for mask, prob in states.items():
            infected = np.array([(mask >> v) & 1 for v in range(n)], dtype=bool)
            deg = adj[:, infected].sum(axis=1)
            exposed = np.flatnonzero(~infected & (deg > 0))
            if exposed.size == 0 or lam == 0.0:
                nxt[mask] = nxt.get(mask, 0.0) + prob
                continue
            q = 1.0 - np.power(1.0 - lam, deg[exposed])
            outcomes = (np.arange(2 ** exposed.size)[:, None] >> np.arange(exposed.size)) & 1
            weights = np.prod(np.where(outcomes == 1, q, 1.0 - q), axis=1) * prob
            added = outcomes @ (np.int64(1) << exposed.astype(np.int64))
            for extra, w in zip(added.tolist(), weights.tolist()):
                if w > 0.0:
                    new_mask = mask | extra
                    nxt[new_mask] = nxt.get(new_mask, 0.0) + w
        states = nxt

    return float(sum(prob * bin(mask).count("1") for mask, prob in states.items()))


def mc_estimator(net: TemporalNetwork, cfg: DiffusionConfig, workers: Optional[int] = None) -> SigmaEstimator:
    """sigma(S) by simulate_si with a fixed random schedule (common random numbers)"""
    def sigma(nodes: Sequence[int]) -> float:
        return simulate_si(net, SeedSet(nodes=nodes), cfg, workers=workers, keep_runs=False).mean_spread
    return sigma


def exact_estimator(net: TemporalNetwork, lam: float, start_t: int, end_t: int) -> SigmaEstimator:
    def sigma(nodes: Sequence[int]) -> float:
        return exact_sigma(net, SeedSet(nodes=nodes), lam, start_t, end_t)
    return sigma
