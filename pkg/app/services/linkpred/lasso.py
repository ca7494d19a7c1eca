"""
L1-penalized logistic regression link prediction

Every historical pair gets its own logistic model whose features are the
previous-step indicators of all historical pairs. The M per-pair problems
share one design matrix, so coordinate descent updates them together.
"""
import logging
import math
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit, logit
from sklearn.metrics import roc_auc_score

from app.config import settings
from app.core.errors import InvalidInputError
from app.models.network import TemporalNetwork
from app.models.predictors import LassoLogitModel
from app.models.scores import PairIndex, PredictedFuture, ScoreKind, ScoreMatrix
from app.services.linkpred.thresholding import binarize, edge_budget

logger = logging.getLogger(__name__)

# Base rates are clipped before logit so constant pairs get finite intercepts
RATE_CLIP = 1e-5
# Lower limit on p (1 - p) curvature once fitted probabilities saturate
CURVATURE_FLOOR = 1e-12


class PathPoint:
    """One fit on the regularization path"""

    def __init__(self, alpha: float, intercepts: np.ndarray, coef: np.ndarray, sweeps: int, converged: bool):
        self.alpha = alpha
        self.intercepts = intercepts
        self.coef = coef
        self.sweeps = sweeps
        self.converged = converged

    @property
    def nonzero(self) -> int:
        return int(np.count_nonzero(self.coef))


def soft_threshold(z: np.ndarray, gamma: float) -> np.ndarray:
    return np.sign(z) * np.maximum(np.abs(z) - gamma, 0.0)


def base_rate_intercepts(Y: np.ndarray) -> np.ndarray:
    rate = np.clip(Y.mean(axis=0), RATE_CLIP, 1.0 - RATE_CLIP)
    return logit(rate)


def _logloss(eta: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, eta) - y * eta


def _coordinate_descent(
    X: np.ndarray,
    Y: np.ndarray,
    alpha: float,
    intercepts: np.ndarray,
    coef: np.ndarray,
    tol: float,
    max_sweeps: int,
) -> Tuple[np.ndarray, np.ndarray, int, bool]:
    """
    Minimize mean log-loss + alpha * ||beta||_1 for every target column

    Cyclic coordinate descent. Each coordinate takes a proximal Newton step
    with the local curvature mean(x_j^2 p (1 - p)); targets where that step
    would raise the objective take the step of the global bound
    mean(x_j^2) / 4 instead, so every update is a descent step. The
    intercept is unpenalized. Pairs whose target never changes keep their
    base-rate intercept and zero coefficients.
    """
    N = X.shape[0]
    intercepts = intercepts.copy()
    coef = coef.copy()
    varying = Y.min(axis=0) != Y.max(axis=0)
    intercepts[~varying] = base_rate_intercepts(Y[:, ~varying])
    coef[:, ~varying] = 0.0
    if not varying.any():
        return intercepts, coef, 0, True

    Yv = Y[:, varying]
    b0 = intercepts[varying]
    B = coef[:, varying]
    eta = b0 + X @ B
    bound = (X ** 2).mean(axis=0) / 4.0
    features = np.flatnonzero(bound > 0)
    # Only rows where x_j != 0 move when beta_j changes
    support = {j: np.flatnonzero(X[:, j]) for j in features}

    converged = False
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        prob = expit(eta)
        grad0 = (prob - Yv).mean(axis=0)
        hess0 = np.maximum((prob * (1.0 - prob)).mean(axis=0), CURVATURE_FLOOR)
        newton0 = -grad0 / hess0
        better = _logloss(eta + newton0, Yv).sum(axis=0) <= _logloss(eta, Yv).sum(axis=0)
        step0 = np.where(better, newton0, -4.0 * grad0)
        b0 += step0
        eta += step0
        max_step = float(np.abs(step0).max())

        for j in features:
            rows = support[j]
            x = X[rows, j][:, None]
            e, y = eta[rows], Yv[rows]
            pr = expit(e)
            grad = (x * (pr - y)).sum(axis=0) / N
            hess = np.maximum((x * x * pr * (1.0 - pr)).sum(axis=0) / N, CURVATURE_FLOOR)

            old = B[j]
            newton = soft_threshold(old - grad / hess, alpha / hess)
            fallback = soft_threshold(old - grad / bound[j], alpha / bound[j])
            before = _logloss(e, y).sum(axis=0) / N + alpha * np.abs(old)
            after = _logloss(e + x * (newton - old), y).sum(axis=0) / N + alpha * np.abs(newton)
            new = np.where(after <= before, newton, fallback)

            delta = new - old
            if np.any(delta):
                B[j] = new
                eta[rows] += x * delta
                max_step = max(max_step, float(np.abs(delta).max()))

        if max_step < tol:
            converged = True
            break

    intercepts[varying] = b0
    coef[:, varying] = B
    return intercepts, coef, sweeps, converged


class _MergedProblem:
    """
    Design and target columns with identical histories, fitted once

    Duplicate feature columns can share their weight without changing the
    loss or the L1 norm, so the whole weight goes to the first of them.
    Duplicate target columns are the same problem and share one solution.
    """

    def __init__(self, X: np.ndarray, Y: np.ndarray):
        _, first = np.unique(X, axis=1, return_index=True)
        self.features = np.sort(first)
        _, targets, inverse = np.unique(Y, axis=1, return_index=True, return_inverse=True)
        self.targets = targets
        self.inverse = np.asarray(inverse).ravel()
        self.shape = (X.shape[1], Y.shape[1])
        self.X = X[:, self.features]
        self.Y = Y[:, self.targets]

    def expand(self, intercepts: np.ndarray, coef: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        full = np.zeros(self.shape)
        full[self.features] = coef[:, self.inverse]
        return intercepts[self.inverse], full


def lasso_path(
    X: np.ndarray,
    Y: np.ndarray,
    alphas: Sequence[float],
    tol: Optional[float] = None,
    max_sweeps: Optional[int] = None,
) -> Iterator[PathPoint]:
    """Fits for ``alphas`` in decreasing order, each warm-started from the previous"""
    tol = tol or settings.LASSO_TOL
    max_sweeps = max_sweeps or settings.LASSO_MAX_SWEEPS
    merged = _MergedProblem(X, Y)
    logger.debug(
        f"LASSO path: {merged.X.shape[1]} of {X.shape[1]} features, "
        f"{merged.Y.shape[1]} of {Y.shape[1]} targets after merging duplicates"
    )
    intercepts = base_rate_intercepts(merged.Y)
    coef = np.zeros((merged.X.shape[1], merged.Y.shape[1]))
    for alpha in sorted(alphas, reverse=True):
        intercepts, coef, sweeps, converged = _coordinate_descent(
            merged.X, merged.Y, alpha, intercepts, coef, tol, max_sweeps
        )
        if not converged:
            logger.warning(f"LASSO hit the sweep cap ({max_sweeps}) at alpha={alpha:g}")
        yield PathPoint(alpha, *merged.expand(intercepts, coef), sweeps, converged)


def pooled_auc(y_true: np.ndarray, y_score: np.ndarray) -> float:
    """ROC AUC over all pairs and steps; 0.5 when only one class is present"""
    y_true = y_true.ravel()
    if y_true.min() == y_true.max():
        return 0.5
    return float(roc_auc_score(y_true, y_score.ravel()))


def training_split(p: int, train_fraction: float) -> int:
    """Transitions used for training during alpha selection; at least one is held out"""
    return max(1, min(p - 2, math.floor(train_fraction * (p - 1))))


def fit_lasso_logit(
    net: TemporalNetwork,
    p: int,
    alpha_grid: Optional[Sequence[float]] = None,
    train_fraction: float = 0.75,
    tol: Optional[float] = None,
    max_sweeps: Optional[int] = None,
) -> LassoLogitModel:
    """
    Fit the per-pair L1 logistic models on G_1..G_p

    alpha is picked by pooled validation AUC on the transitions after the
    training share (ties go to the larger alpha), then the model is refit on
    all p - 1 transitions.
    """
    if p < 3:
        raise InvalidInputError(f"LASSO link prediction needs p >= 3, got {p}")
    if p > net.T:
        raise InvalidInputError(f"p={p} exceeds T={net.T}")
    alpha_grid = list(alpha_grid) if alpha_grid is not None else settings.default_alpha_grid
    if not alpha_grid:
        raise InvalidInputError("alpha_grid is empty")
    if any(a <= 0 for a in alpha_grid):
        raise InvalidInputError("alpha_grid values must be positive")

    index = PairIndex.from_network(net, p)
    if index.M == 0:
        raise InvalidInputError("No historical edges in the training window")

    design = index.design(net, 1, p)
    X, Y = design[:-1], design[1:]
    n_train = training_split(p, train_fraction)

    auc = {}
    for point in lasso_path(X[:n_train], Y[:n_train], alpha_grid, tol, max_sweeps):
        scores = expit(point.intercepts + X[n_train:] @ point.coef)
        auc[point.alpha] = pooled_auc(Y[n_train:], scores)
        if auc[point.alpha] >= 1.0:
            # Smaller alphas can at best tie, and ties keep the larger alpha
            logger.info(f"Validation AUC saturated at alpha={point.alpha:g}; rest of the grid skipped")
            break
    # Path runs from the largest alpha, so max() keeps the largest on ties
    best_alpha = max(sorted(auc, reverse=True), key=lambda a: auc[a])

    final = next(lasso_path(X, Y, [best_alpha], tol, max_sweeps))
    model = LassoLogitModel(
        pair_index=index,
        intercepts=final.intercepts,
        coef=final.coef,
        alpha=best_alpha,
        validation_auc={float(a): v for a, v in auc.items()},
        sweeps=final.sweeps,
        converged=final.converged,
    )
    logger.info(
        f"LASSO fit: M={index.M}, alpha={best_alpha:g}, val AUC={auc[best_alpha]:.3f}, "
        f"sparsity={model.sparsity:.3f}"
    )
    return model


def lasso_rollout(
    model: LassoLogitModel,
    net: TemporalNetwork,
    p: int,
    steps: int,
    rho_star: Optional[float] = None,
) -> PredictedFuture:
    """
    Multi-step probabilities: the first step reads the observed x(p), later
    steps feed back the previous predicted probabilities. Pairs outside the
    historical index score 0. With ``rho_star`` every step is also binarized.
    """
    if steps < 1:
        raise InvalidInputError(f"steps must be positive, got {steps}")
    index = model.pair_index
    x = index.indicator(net.snapshot(p))
    scores = []
    for _ in range(steps):
        prob = expit(model.intercepts + x @ model.coef)
        scores.append(ScoreMatrix(values=index.to_matrix(prob), kind=ScoreKind.PROBABILITY))
        x = prob

    if rho_star is None:
        return PredictedFuture(scores=tuple(scores))
    return PredictedFuture(
        scores=tuple(scores),
        snapshots=tuple(binarize(s, rho_star) for s in scores),
        edges_per_step=edge_budget(index.n, rho_star),
    )


def lasso_scores(model: LassoLogitModel, net: TemporalNetwork, p: int) -> ScoreMatrix:
    """One-step-ahead probabilities used for score-sum seeding"""
    return lasso_rollout(model, net, p, 1).scores[0]
