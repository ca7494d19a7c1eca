"""
Experiment models
Declarative run specifications, result records and dataset statistics
"""
from enum import Enum
from typing import Dict, Optional, Tuple

from pydantic import Field, field_validator, model_validator

from app.config import settings
from app.models.common import FrozenModel, UnitInterval
from app.models.network import AggregationScheme


class Method(str, Enum):
    ORACLE = "oracle"
    STATIC_LAST = "static-last"
    STATIC_MEM = "static-mem"
    JC = "jc"
    LOGREG = "logreg"
    LOGREG_SUM = "logreg-sum"
    NMF = "nmf"
    NMF_SUM = "nmf-sum"

    @property
    def is_score_sum(self) -> bool:
        return self in (Method.LOGREG_SUM, Method.NMF_SUM)

    @property
    def is_static(self) -> bool:
        return self in (Method.STATIC_LAST, Method.STATIC_MEM)


class ImAlgorithm(str, Enum):
    GREEDY = "greedy"
    DYNDEG = "dyndeg"


class Selector(str, Enum):
    """Seed-selection routine actually applied for a run"""
    GREEDY = "greedy"
    DYNAMIC_DEGREE_DISCOUNT = "dyn-deg-discount"
    STATIC_DEGREE_DISCOUNT = "static-degree-discount"
    SCORE_SUM = "score-sum"


class DatasetFormat(str, Enum):
    EVENTS = "events"
    SNAPSHOTS = "snapshots"


class DatasetRef(FrozenModel):
    """Where a temporal network comes from and how to bin it"""
    path: str = Field(..., min_length=1, description="Event or snapshot file")
    format: DatasetFormat = Field(default=DatasetFormat.EVENTS)
    n_bins: Optional[int] = Field(None, ge=1, description="Snapshots to aggregate events into")
    scheme: AggregationScheme = Field(default=AggregationScheme.EQUAL_TIME)

    @model_validator(mode="after")
    def validate_bins(self):
        if self.format == DatasetFormat.EVENTS and self.n_bins is None:
            raise ValueError("n_bins is required for event files")
        return self


class Hyperparameters(FrozenModel):
    """Link-prediction and thresholding knobs"""
    xi: UnitInterval = Field(default=settings.DEFAULT_XI, description="Density decay for rho*")
    phi: float = Field(default=settings.DEFAULT_PHI, gt=0, le=1, description="NMF attenuation")
    q: Optional[int] = Field(None, ge=1, description="NMF rank; default max(1, round(0.05 n))")
    alpha_grid: Tuple[float, ...] = Field(
        default_factory=lambda: tuple(settings.default_alpha_grid), min_length=1,
        description="LASSO penalties searched by validation AUC",
    )
    train_fraction: float = Field(default=0.75, gt=0, lt=1, description="Share of transitions used to pick alpha")
    nmf_restarts: int = Field(default=settings.NMF_RESTARTS, ge=1)
    nmf_max_iter: int = Field(default=settings.NMF_MAX_ITER, ge=1)
    add_frac: UnitInterval = Field(default=settings.JC_ADD_FRAC, description="JC share of scored pairs added")
    remove_frac: UnitInterval = Field(default=settings.JC_REMOVE_FRAC, description="JC share of edges removed")
    selection_mc_runs: Optional[int] = Field(None, ge=1, description="Greedy MC runs; default mc_runs")

    @field_validator("alpha_grid")
    @classmethod
    def validate_alphas(cls, v):
        if any(a <= 0 for a in v):
            raise ValueError("LASSO penalties must be positive")
        return v


class ExperimentSpec(FrozenModel):
    """One observe -> predict -> select -> evaluate run"""
    dataset: DatasetRef
    p: int = Field(..., ge=1, description="Observed snapshots G_1..G_p")
    T: Optional[int] = Field(None, ge=2, description="Horizon; default all snapshots")
    lam: UnitInterval = Field(..., description="SI infection probability")
    k: int = Field(..., ge=1, description="Seed set size")
    method: Method
    im_algorithm: ImAlgorithm = Field(default=ImAlgorithm.GREEDY)
    mc_runs: int = Field(default=settings.DEFAULT_MC_RUNS, ge=1)
    rng_seed: int = Field(default=0, ge=0, lt=2**63)
    history: Optional[int] = Field(None, ge=1, description="Train on only the last `history` observed snapshots")
    hyper: Hyperparameters = Field(default_factory=Hyperparameters)

    @model_validator(mode="after")
    def validate_spec(self):
        if self.T is not None and self.p >= self.T:
            raise ValueError(f"p={self.p} must be smaller than T={self.T}")
        if self.history is not None and self.history > self.p:
            raise ValueError(f"history={self.history} cannot exceed p={self.p}")
        if self.method in (Method.LOGREG, Method.LOGREG_SUM) and (self.history or self.p) < 3:
            raise ValueError("LASSO methods need at least 3 training snapshots")
        return self

    @property
    def selector(self) -> Selector:
        """Score-sum methods ignore im_algorithm; static methods route dyndeg to static degree discount"""
        if self.method.is_score_sum:
            return Selector.SCORE_SUM
        if self.im_algorithm == ImAlgorithm.GREEDY:
            return Selector.GREEDY
        if self.method.is_static:
            return Selector.STATIC_DEGREE_DISCOUNT
        return Selector.DYNAMIC_DEGREE_DISCOUNT


class ResultRecord(FrozenModel):
    """Outcome of one experiment"""
    fingerprint: str
    dataset: str
    method: Method
    im_algorithm: ImAlgorithm
    selector: Selector
    k: int = Field(..., ge=1)
    lam: float
    p: int
    T: int
    n: int = Field(..., ge=1)
    mean_spread: float
    stderr: float = Field(..., ge=0)
    seeds: Tuple[int, ...]
    n_active: Optional[int] = Field(None, description="Active nodes in the prediction")
    filled: int = Field(default=0, ge=0, description="Seeds added by the historical-degree fill rule")
    stage_seconds: Dict[str, float] = Field(default_factory=dict)
    per_run_final_counts: Optional[Tuple[int, ...]] = None

    @model_validator(mode="after")
    def validate_spread(self):
        if not (self.k - 1e-9 <= self.mean_spread <= self.n + 1e-9):
            raise ValueError(f"mean_spread={self.mean_spread} outside [k={self.k}, n={self.n}]")
        if len(self.seeds) != self.k:
            raise ValueError(f"Expected {self.k} seeds, got {len(self.seeds)}")
        return self

    def table_row(self) -> Dict[str, object]:
        """Deterministic columns for the tidy results table"""
        return {
            "fingerprint": self.fingerprint,
            "dataset": self.dataset,
            "method": self.method.value,
            "im_algorithm": self.im_algorithm.value,
            "selector": self.selector.value,
            "k": self.k,
            "lam": self.lam,
            "p": self.p,
            "T": self.T,
            "mean_spread": self.mean_spread,
            "stderr": self.stderr,
            "seeds": ";".join(str(s) for s in self.seeds),
            "n_active": self.n_active,
            "filled": self.filled,
        }


class DatasetStats(FrozenModel):
    """Summary statistics and temporal measures of one dataset"""
    n: int
    m: int = Field(..., description="Unique links over all snapshots")
    mean_density: float = Field(..., description="Average edge density across snapshots")
    T: int
    fNT: Optional[float] = Field(None, description="Fraction of nodes present by half the sampling time")
    fLT: Optional[float] = Field(None, description="Fraction of links present by half the sampling time")
    FNT: Optional[float] = Field(None, description="Fraction of nodes present in the first and last 5%")
    FLT: Optional[float] = Field(None, description="Fraction of links present in the first and last 5%")
    degree_assortativity: Optional[float] = None


class DatasetDefaults(FrozenModel):
    """Experiment settings reported for a public dataset"""
    name: str
    T: int
    p: int
    lam: float
    im_algorithm: ImAlgorithm
    n: int
    m: int


# Settings and Table-style statistics reported for the public datasets.
# College keeps the reported lam=0.25 even though other datasets use <= 0.10.
DATASET_DEFAULTS: Dict[str, DatasetDefaults] = {
    d.name: d for d in [
        DatasetDefaults(name="reality", T=24, p=20, lam=0.10, im_algorithm=ImAlgorithm.GREEDY, n=64, m=722),
        DatasetDefaults(name="email4", T=39, p=30, lam=0.05, im_algorithm=ImAlgorithm.DYNDEG, n=168, m=3250),
        DatasetDefaults(name="hs1", T=20, p=16, lam=0.10, im_algorithm=ImAlgorithm.DYNDEG, n=312, m=2242),
        DatasetDefaults(name="hospital", T=16, p=12, lam=0.10, im_algorithm=ImAlgorithm.GREEDY, n=75, m=1139),
        DatasetDefaults(name="office", T=7, p=6, lam=0.10, im_algorithm=ImAlgorithm.GREEDY, n=92, m=755),
        DatasetDefaults(name="copenb", T=100, p=90, lam=0.05, im_algorithm=ImAlgorithm.DYNDEG, n=703, m=21318),
        DatasetDefaults(name="college", T=50, p=40, lam=0.25, im_algorithm=ImAlgorithm.DYNDEG, n=1899, m=13838),
    ]
}
