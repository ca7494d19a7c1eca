"""
Experiment pipeline
Observe G_1..G_p, predict G_{p+1}..G_T, select k seeds, evaluate on the true future
"""
import logging
from typing import Callable, Dict, Optional

from app.config import settings
from app.core.errors import IncompatibleSpecError, InvalidInputError
from app.core.rng import Stream, derive_seed
from app.models.common import FrozenModel
from app.models.diffusion import DiffusionConfig, SeedSet
from app.models.experiment import ExperimentSpec, Method, ResultRecord, Selector
from app.models.network import TemporalNetwork
from app.models.scores import ScoreMatrix
from app.services.datasets import format_snapshots, load_temporal_network
from app.services.diffusion import mc_estimator, simulate_si
from app.services.linkpred import (
    default_rank,
    fit_lasso_logit,
    fit_temporal_nmf,
    jaccard_rollout,
    lasso_rollout,
    lasso_scores,
    nmf_rollout,
    nmf_scores,
)
from app.services.serialization import cached_fit
from app.services.selection import (
    dyn_deg_discount,
    fill_seeds,
    greedy_select,
    score_sum_select,
    static_degree_discount,
)
from app.services.tempnet import density_profile, memory_graph
from app.utils.fingerprint import fingerprint
from app.utils.timing import StageTimer

logger = logging.getLogger(__name__)


class PredictionContext(FrozenModel):
    """
    Everything a predictor may read. ``truth`` holds G_{p+1}..G_T and is
    only filled in for the oracle.
    """
    spec: ExperimentSpec
    observed: TemporalNetwork
    train: TemporalNetwork
    horizon: int
    truth: Optional[TemporalNetwork] = None


class Prediction(FrozenModel):
    """A predicted future window, or a score matrix for score-sum seeding"""
    network: Optional[TemporalNetwork] = None
    scores: Optional[ScoreMatrix] = None


def spec_fingerprint(spec: ExperimentSpec) -> str:
    return fingerprint(spec.model_dump(mode="json"))


def _model_key(kind: str, ctx: PredictionContext, **params) -> str:
    return fingerprint({"kind": kind, "train": format_snapshots(ctx.train), **params})


# ============================================================================
# PREDICTORS
# ============================================================================

def _predict_oracle(ctx: PredictionContext) -> Prediction:
    if ctx.truth is None:
        raise IncompatibleSpecError("Oracle prediction requires the true future window")
    return Prediction(network=ctx.truth)


def _predict_static_last(ctx: PredictionContext) -> Prediction:
    last = ctx.observed.snapshot(ctx.observed.T)
    return Prediction(network=TemporalNetwork.replicate(last, ctx.horizon))


def _predict_static_mem(ctx: PredictionContext) -> Prediction:
    memory = memory_graph(ctx.train, ctx.train.T)
    return Prediction(network=TemporalNetwork.replicate(memory, ctx.horizon))


def _predict_jc(ctx: PredictionContext) -> Prediction:
    hyper = ctx.spec.hyper
    future = jaccard_rollout(
        ctx.observed.snapshot(ctx.observed.T),
        ctx.horizon,
        hyper.add_frac,
        hyper.remove_frac,
        derive_seed(ctx.spec.rng_seed, Stream.JACCARD),
    )
    return Prediction(network=future.as_network())


def _rho_star(ctx: PredictionContext) -> float:
    return density_profile(ctx.train, ctx.train.T, ctx.spec.hyper.xi).weighted


def _fit_lasso(ctx: PredictionContext):
    hyper = ctx.spec.hyper
    key = _model_key("lasso", ctx, alphas=list(hyper.alpha_grid), train_fraction=hyper.train_fraction)
    return cached_fit(
        settings.cache_root,
        key,
        lambda: fit_lasso_logit(ctx.train, ctx.train.T, hyper.alpha_grid, hyper.train_fraction),
    )


def _fit_nmf(ctx: PredictionContext):
    hyper = ctx.spec.hyper
    q = hyper.q or default_rank(ctx.train.n)
    if q >= ctx.train.n:
        raise IncompatibleSpecError(f"NMF rank q={q} must be smaller than n={ctx.train.n}")
    seed = derive_seed(ctx.spec.rng_seed, Stream.NMF)
    key = _model_key(
        "nmf", ctx, q=q, phi=hyper.phi, restarts=hyper.nmf_restarts, max_iter=hyper.nmf_max_iter, seed=seed
    )
    return cached_fit(
        settings.cache_root,
        key,
        lambda: fit_temporal_nmf(
            ctx.train, ctx.train.T, q=q, phi=hyper.phi, restarts=hyper.nmf_restarts,
            max_iter=hyper.nmf_max_iter, seed=seed,
        ),
    )


def _predict_logreg(ctx: PredictionContext) -> Prediction:
    future = lasso_rollout(_fit_lasso(ctx), ctx.train, ctx.train.T, ctx.horizon, _rho_star(ctx))
    return Prediction(network=future.as_network())


def _predict_logreg_sum(ctx: PredictionContext) -> Prediction:
    return Prediction(scores=lasso_scores(_fit_lasso(ctx), ctx.train, ctx.train.T))


def _predict_nmf(ctx: PredictionContext) -> Prediction:
    future = nmf_rollout(
        _fit_nmf(ctx), ctx.train, ctx.train.T, ctx.horizon, _rho_star(ctx), max_iter=ctx.spec.hyper.nmf_max_iter
    )
    return Prediction(network=future.as_network())


def _predict_nmf_sum(ctx: PredictionContext) -> Prediction:
    return Prediction(scores=nmf_scores(_fit_nmf(ctx)))


PREDICTORS: Dict[Method, Callable[[PredictionContext], Prediction]] = {
    Method.ORACLE: _predict_oracle,
    Method.STATIC_LAST: _predict_static_last,
    Method.STATIC_MEM: _predict_static_mem,
    Method.JC: _predict_jc,
    Method.LOGREG: _predict_logreg,
    Method.LOGREG_SUM: _predict_logreg_sum,
    Method.NMF: _predict_nmf,
    Method.NMF_SUM: _predict_nmf_sum,
}


# ============================================================================
# SELECTION
# ============================================================================

def select_seeds(
    spec: ExperimentSpec,
    prediction: Prediction,
    observed: TemporalNetwork,
    workers: Optional[int] = None,
) -> tuple:
    """
    Run the spec's selector on the prediction. Returns (seeds, n_active, filled);
    predicted windows with fewer than k active nodes select among the active
    ones and are topped up by historical degree.
    """
    selector = spec.selector
    if selector == Selector.SCORE_SUM:
        return score_sum_select(prediction.scores, spec.k), None, 0

    future = prediction.network
    active = sorted(future.active_nodes())
    n_active = len(active)
    k = min(spec.k, n_active)
    candidates = active if n_active < spec.k else None

    if k == 0:
        seeds = SeedSet()
    elif selector == Selector.GREEDY:
        cfg = DiffusionConfig(
            lam=spec.lam,
            start_t=1,
            end_t=future.T,
            mc_runs=spec.hyper.selection_mc_runs or spec.mc_runs,
            rng_seed=derive_seed(spec.rng_seed, Stream.SELECTION),
        )
        seeds = greedy_select(future, k, mc_estimator(future, cfg, workers), workers, candidates)
    elif selector == Selector.DYNAMIC_DEGREE_DISCOUNT:
        seeds = dyn_deg_discount(future, k, spec.lam, 1, future.T, candidates)
    else:
        # Static predictions repeat one graph, so its first step is the graph
        seeds = static_degree_discount(future.snapshot(1), k, candidates)

    seeds, filled = fill_seeds(seeds, spec.k, memory_graph(observed, observed.T))
    return seeds, n_active, filled


# ============================================================================
# PIPELINE
# ============================================================================

def run_experiment(
    spec: ExperimentSpec,
    workers: Optional[int] = None,
    network: Optional[TemporalNetwork] = None,
) -> ResultRecord:
    """
    Run one experiment end to end. ``network`` skips loading the dataset
    reference and is used as the full G_1..G_T.
    """
    timer = StageTimer()
    workers = workers or settings.IM_WORKERS
    logger.info(f"Running {spec.method.value} ({spec.selector.value}) k={spec.k} lam={spec.lam} p={spec.p}")

    with timer.stage("load"):
        net = network if network is not None else load_temporal_network(spec.dataset)
        T = spec.T or net.T
        if T > net.T:
            raise IncompatibleSpecError(f"T={T} exceeds the {net.T} available snapshots")
        if spec.p >= T:
            raise IncompatibleSpecError(f"p={spec.p} must be smaller than T={T}")
        if spec.k > net.n:
            raise IncompatibleSpecError(f"k={spec.k} exceeds n={net.n}")
        net = net.window(1, T).with_split(spec.p)
        observed = net.observed()
        train = observed.window(spec.p - spec.history + 1, spec.p) if spec.history else observed

    with timer.stage("predict"):
        ctx = PredictionContext(
            spec=spec,
            observed=observed,
            train=train,
            horizon=T - spec.p,
            truth=net.future() if spec.method == Method.ORACLE else None,
        )
        try:
            prediction = PREDICTORS[spec.method](ctx)
        except InvalidInputError as e:
            raise IncompatibleSpecError(f"{spec.method.value} prediction failed: {e}") from e

    with timer.stage("select"):
        seeds, n_active, filled = select_seeds(spec, prediction, observed, workers)

    with timer.stage("evaluate"):
        cfg = DiffusionConfig(
            lam=spec.lam,
            start_t=spec.p + 1,
            end_t=T,
            mc_runs=spec.mc_runs,
            rng_seed=derive_seed(spec.rng_seed, Stream.EVALUATION),
        )
        outcome = simulate_si(net, seeds, cfg, workers=workers)

    logger.info(f"{spec.method.value}: seeds={list(seeds.nodes)} spread={outcome.mean_spread:.3f}")
    return ResultRecord(
        fingerprint=spec_fingerprint(spec),
        dataset=spec.dataset.path,
        method=spec.method,
        im_algorithm=spec.im_algorithm,
        selector=spec.selector,
        k=spec.k,
        lam=spec.lam,
        p=spec.p,
        T=T,
        n=net.n,
        mean_spread=outcome.mean_spread,
        stderr=outcome.stderr,
        seeds=seeds.nodes,
        n_active=n_active,
        filled=filled,
        stage_seconds=timer.seconds,
        per_run_final_counts=outcome.per_run_final_counts,
    )
