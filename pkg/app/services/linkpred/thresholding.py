"""
Density-preserving binarization of link scores
"""
import numpy as np

from app.core.errors import InvalidInputError
from app.models.common import pair_count, round_half_up
from app.models.network import Snapshot
from app.models.scores import ScoreMatrix


def edge_budget(n: int, rho_star: float) -> int:
    """round(C(n, 2) * rho*), halves rounded up"""
    if not 0.0 <= rho_star <= 1.0:
        raise InvalidInputError(f"rho*={rho_star} outside [0, 1]")
    return min(pair_count(n), round_half_up(pair_count(n) * rho_star))


def binarize(scores: ScoreMatrix, rho_star: float) -> Snapshot:
    """
    Keep exactly round(C(n, 2) * rho*) pairs: the highest scores, ties in
    lexicographic (i, j) order
    """
    n = scores.n
    budget = edge_budget(n, rho_star)
    rows, cols = np.triu_indices(n, k=1)
    values = scores.values[rows, cols]
    # triu_indices is already lexicographic, so position breaks ties
    order = np.lexsort((np.arange(values.shape[0]), -values))[:budget]
    return Snapshot(n=n, edges=frozenset(zip(rows[order].tolist(), cols[order].tolist())))
