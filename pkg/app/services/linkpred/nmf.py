"""
Temporal consensus NMF link prediction

Each snapshot A_t is factored as U_t V_t while U_t and V_t are pulled towards
the attenuation-weighted consensus U_*, V_*. Node similarity is the cosine
between the per-node columns of V_*.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.config import settings
from app.core.errors import InvalidInputError
from app.models.common import round_half_up
from app.models.network import Snapshot, TemporalNetwork
from app.models.predictors import NmfModel
from app.models.scores import PredictedFuture, ScoreKind, ScoreMatrix
from app.services.linkpred.thresholding import binarize, edge_budget

logger = logging.getLogger(__name__)

EPS = 1e-9


def default_rank(n: int) -> int:
    """max(1, round(0.05 n))"""
    return max(1, round_half_up(0.05 * n))


def attenuation(p: int, phi: float) -> np.ndarray:
    """phi^(p - t) for t = 1..p"""
    return np.power(float(phi), np.arange(p - 1, -1, -1, dtype=np.float64))


def _consensus(factors: np.ndarray, w: np.ndarray) -> np.ndarray:
    return np.tensordot(w, factors, axes=1) / w.sum()


def nmf_loss(A: np.ndarray, U: np.ndarray, V: np.ndarray, w: np.ndarray) -> float:
    """sum_t w_t (||A_t - U_t V_t||^2 + ||U_t - U_*||^2 + ||V_t - V_*||^2)"""
    Us, Vs = _consensus(U, w), _consensus(V, w)
    recon = ((A - U @ V) ** 2).sum(axis=(1, 2))
    pull = ((U - Us) ** 2).sum(axis=(1, 2)) + ((V - Vs) ** 2).sum(axis=(1, 2))
    return float(np.dot(w, recon + pull))


def _iterate(
    A: np.ndarray,
    U: np.ndarray,
    V: np.ndarray,
    w: np.ndarray,
    max_iter: int,
    tol: float,
) -> Tuple[np.ndarray, np.ndarray, List[float], bool]:
    """
    Alternating multiplicative updates; the consensus is recomputed after
    every block so it always equals the weighted factor mean.
    loss[0] is the loss of the starting point.
    """
    U, V = U.copy(), V.copy()
    losses = [nmf_loss(A, U, V, w)]
    converged = False
    for _ in range(max_iter):
        for t in range(A.shape[0]):
            Us = _consensus(U, w)
            U[t] *= (A[t] @ V[t].T + Us) / (U[t] @ V[t] @ V[t].T + U[t] + EPS)
            Vs = _consensus(V, w)
            V[t] *= (U[t].T @ A[t] + Vs) / (U[t].T @ U[t] @ V[t] + V[t] + EPS)
        losses.append(nmf_loss(A, U, V, w))
        prev, cur = losses[-2], losses[-1]
        if abs(prev - cur) <= tol * max(prev, EPS):
            converged = True
            break
    return U, V, losses, converged


def _stack(snapshots: Sequence[Snapshot]) -> np.ndarray:
    return np.stack([snap.dense().astype(np.float64) for snap in snapshots])


def _build_model(U, V, w, phi, losses, converged, restart) -> NmfModel:
    return NmfModel(
        U=U,
        V=V,
        U_star=_consensus(U, w),
        V_star=_consensus(V, w),
        phi=phi,
        loss_history=tuple(losses),
        converged=converged,
        restart=restart,
    )


def fit_temporal_nmf(
    net: TemporalNetwork,
    p: int,
    q: Optional[int] = None,
    phi: Optional[float] = None,
    restarts: Optional[int] = None,
    max_iter: Optional[int] = None,
    tol: Optional[float] = None,
    seed: int = 0,
    workers: Optional[int] = None,
) -> NmfModel:
    """
    Fit the temporal NMF on G_1..G_p, keeping the restart with the lowest
    final loss (lower restart index on ties)
    """
    q = q or default_rank(net.n)
    phi = settings.DEFAULT_PHI if phi is None else phi
    restarts = restarts or settings.NMF_RESTARTS
    max_iter = max_iter or settings.NMF_MAX_ITER
    tol = settings.NMF_TOL if tol is None else tol
    workers = workers or settings.IM_WORKERS
    if not 1 <= q < net.n:
        raise InvalidInputError(f"Rank q={q} must satisfy 1 <= q < n={net.n}")
    if not 0.0 < phi <= 1.0:
        raise InvalidInputError(f"phi={phi} outside (0, 1]")
    if not 1 <= p <= net.T:
        raise InvalidInputError(f"p={p} outside [1, {net.T}]")
    if restarts < 1:
        raise InvalidInputError(f"restarts must be positive, got {restarts}")

    return factorize(_stack(net.snapshots[:p]), q, phi, restarts, max_iter, tol, seed, workers)


def factorize(
    A: np.ndarray,
    q: int,
    phi: float,
    restarts: int,
    max_iter: int,
    tol: float,
    seed: int = 0,
    workers: int = 1,
) -> NmfModel:
    """Temporal NMF of a stack of non-negative (p, n, n) matrices"""
    p, n, _ = A.shape
    w = attenuation(p, phi)
    scale = np.sqrt(max(A.mean(), EPS) / q)

    def run(r: int):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(r,)))
        U0 = rng.random((p, n, q)) * scale
        V0 = rng.random((p, q, n)) * scale
        return _iterate(A, U0, V0, w, max_iter, tol)

    if workers > 1 and restarts > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(restarts)))
    else:
        results = [run(r) for r in range(restarts)]

    best = min(range(restarts), key=lambda r: (results[r][2][-1], r))
    U, V, losses, converged = results[best]
    if not converged:
        logger.warning(f"NMF did not converge in {max_iter} iterations (restart {best}, loss {losses[-1]:.4g})")
    logger.info(f"NMF fit: p={p}, q={q}, restarts={restarts}, best={best}, loss={losses[-1]:.4g}")
    return _build_model(U, V, w, phi, losses, converged, best)


def extend_nmf(
    model: NmfModel,
    snapshots: Sequence[Snapshot],
    max_iter: Optional[int] = None,
    tol: Optional[float] = None,
) -> NmfModel:
    """
    Refit on ``snapshots`` (the model's training snapshots plus appended ones)
    warm-started from the model; new steps start at the consensus factors
    """
    max_iter = max_iter or settings.NMF_MAX_ITER
    tol = settings.NMF_TOL if tol is None else tol
    extra = len(snapshots) - model.p
    if extra < 0:
        raise InvalidInputError(f"Model has {model.p} steps, only {len(snapshots)} snapshots given")

    U = np.concatenate([model.U, np.repeat(model.U_star[None], extra, axis=0)])
    V = np.concatenate([model.V, np.repeat(model.V_star[None], extra, axis=0)])
    w = attenuation(len(snapshots), model.phi)
    U, V, losses, converged = _iterate(_stack(snapshots), U, V, w, max_iter, tol)
    if not converged:
        logger.warning(f"Extended NMF did not converge in {max_iter} iterations")
    return _build_model(U, V, w, model.phi, losses, converged, model.restart)


def nmf_scores(model: NmfModel) -> ScoreMatrix:
    """Cosine similarity between node columns of V_*; zero columns score 0"""
    cols = model.V_star
    norms = np.linalg.norm(cols, axis=0)
    gram = cols.T @ cols
    denom = np.outer(norms, norms)
    sim = np.divide(gram, denom, out=np.zeros_like(gram), where=denom > 0)
    sim = np.clip((sim + sim.T) / 2.0, 0.0, 1.0)
    np.fill_diagonal(sim, 0.0)
    return ScoreMatrix(values=sim, kind=ScoreKind.SIMILARITY)


def nmf_rollout(
    model: NmfModel,
    net: TemporalNetwork,
    p: int,
    steps: int,
    rho_star: float,
    max_iter: Optional[int] = None,
    tol: Optional[float] = None,
) -> PredictedFuture:
    """
    Score, binarize, append the predicted snapshot and refit with the
    extended loss, for ``steps`` steps
    """
    if steps < 1:
        raise InvalidInputError(f"steps must be positive, got {steps}")
    if model.p != p:
        raise InvalidInputError(f"Model was fit on {model.p} snapshots, p={p} given")
    history = list(net.snapshots[:p])
    scores, predicted = [], []
    for s in range(steps):
        if s > 0:
            model = extend_nmf(model, history, max_iter, tol)
        score = nmf_scores(model)
        snap = binarize(score, rho_star)
        scores.append(score)
        predicted.append(snap)
        history.append(snap)
    return PredictedFuture(
        scores=tuple(scores),
        snapshots=tuple(predicted),
        edges_per_step=edge_budget(net.n, rho_star),
    )
