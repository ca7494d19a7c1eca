"""
Domain models for the ex-ante influence maximization toolkit
"""
from app.models.network import (
    AggregationScheme,
    Snapshot,
    TemporalNetwork,
    RawEventLog,
    DensityProfile,
)
from app.models.diffusion import DiffusionConfig, SeedSet, DiffusionOutcome
from app.models.scores import ScoreKind, ScoreMatrix, PairIndex, PredictedFuture
from app.models.predictors import LassoLogitModel, NmfModel
from app.models.experiment import (
    Method,
    ImAlgorithm,
    Selector,
    DatasetFormat,
    DatasetRef,
    Hyperparameters,
    ExperimentSpec,
    ResultRecord,
    DatasetStats,
    DATASET_DEFAULTS,
)

__all__ = [
    "AggregationScheme", "Snapshot", "TemporalNetwork", "RawEventLog", "DensityProfile",
    "DiffusionConfig", "SeedSet", "DiffusionOutcome",
    "ScoreKind", "ScoreMatrix", "PairIndex", "PredictedFuture",
    "LassoLogitModel", "NmfModel",
    "Method", "ImAlgorithm", "Selector", "DatasetFormat", "DatasetRef",
    "Hyperparameters", "ExperimentSpec", "ResultRecord", "DatasetStats", "DATASET_DEFAULTS",
]
