"""
Sweeps over experiment specs and tidy result tables
"""
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import Field

from app.config import settings
from app.models.common import FrozenModel
from app.models.experiment import ExperimentSpec, Method, ResultRecord
from app.models.network import TemporalNetwork
from app.services.pipeline import run_experiment, spec_fingerprint

logger = logging.getLogger(__name__)

TABLE_COLUMNS = [
    "fingerprint", "dataset", "method", "im_algorithm", "selector", "k", "lam", "p", "T",
    "mean_spread", "stderr", "ratio_to_oracle", "seeds", "n_active", "filled", "error",
]

# Rows compared against the same oracle share these columns
GROUP_COLUMNS = ["dataset", "im_algorithm", "k", "lam", "p", "T"]


class SweepFailure(FrozenModel):
    fingerprint: str
    spec: ExperimentSpec
    error: str


class SweepResult(FrozenModel):
    specs: Tuple[ExperimentSpec, ...] = Field(default_factory=tuple)
    records: Tuple[ResultRecord, ...] = Field(default_factory=tuple)
    failures: Tuple[SweepFailure, ...] = Field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.failures


def _run_one(
    spec: ExperimentSpec, network: Optional[TemporalNetwork] = None
) -> Tuple[Optional[ResultRecord], Optional[str]]:
    """Process-pool entry point; failures come back as messages"""
    try:
        return run_experiment(spec, workers=1, network=network), None
    except Exception as e:
        logger.error(f"Spec {spec_fingerprint(spec)} ({spec.method.value}, k={spec.k}) failed: {e}")
        return None, f"{type(e).__name__}: {e}"


def run_sweep(
    specs: Sequence[ExperimentSpec],
    workers: Optional[int] = None,
    network: Optional[TemporalNetwork] = None,
) -> SweepResult:
    """
    Run every spec; results are ordered by spec fingerprint whatever the
    worker count. ``network`` replaces loading each spec's dataset.
    """
    if not specs:
        raise ValueError("Sweep needs at least one spec")
    workers = workers or settings.IM_WORKERS
    logger.info(f"Sweep: {len(specs)} specs on {workers} worker(s)")

    if workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(partial(_run_one, network=network), specs))
    else:
        outcomes = [_run_one(spec, network) for spec in specs]

    records, failures = [], []
    for spec, (record, error) in zip(specs, outcomes):
        if record is not None:
            records.append(record)
        else:
            failures.append(SweepFailure(fingerprint=spec_fingerprint(spec), spec=spec, error=error))

    records.sort(key=lambda r: (r.fingerprint, r.method.value))
    failures.sort(key=lambda f: f.fingerprint)
    logger.info(f"Sweep finished: {len(records)} succeeded, {len(failures)} failed")
    ordered = sorted(specs, key=spec_fingerprint)
    return SweepResult(specs=tuple(ordered), records=tuple(records), failures=tuple(failures))


def summary_table(result: SweepResult) -> pd.DataFrame:
    """
    One row per spec with a ratio_to_oracle column; failed specs appear as
    rows with an error message. Timings are left out so the table is
    reproducible byte for byte.
    """
    rows = [dict(r.table_row(), error="") for r in result.records]
    for f in result.failures:
        spec = f.spec
        rows.append({
            "fingerprint": f.fingerprint,
            "dataset": spec.dataset.path,
            "method": spec.method.value,
            "im_algorithm": spec.im_algorithm.value,
            "selector": spec.selector.value,
            "k": spec.k,
            "lam": spec.lam,
            "p": spec.p,
            "T": spec.T,
            "error": f.error,
        })
    df = pd.DataFrame(rows, columns=[c for c in TABLE_COLUMNS if c != "ratio_to_oracle"])
    if df.empty:
        return df.reindex(columns=TABLE_COLUMNS)

    oracle = (
        df[(df["method"] == Method.ORACLE.value) & (df["error"] == "")]
        .groupby(GROUP_COLUMNS, dropna=False)["mean_spread"]
        .first()
        .rename("oracle_spread")
    )
    df = df.merge(oracle, how="left", left_on=GROUP_COLUMNS, right_index=True)
    df["ratio_to_oracle"] = df["mean_spread"] / df["oracle_spread"]
    df = df.drop(columns="oracle_spread")
    return df.sort_values(["fingerprint", "method"], kind="stable").reset_index(drop=True)[TABLE_COLUMNS]


def write_results(result: SweepResult, out_dir, name: str = "results") -> List[Path]:
    """Write ``<name>.csv`` (tidy table) and ``<name>.json`` (full specs, records and failures)"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    csv_path = out_dir / f"{name}.csv"
    summary_table(result).to_csv(csv_path, index=False, lineterminator="\n")

    json_path = out_dir / f"{name}.json"
    sidecar = {
        "specs": {spec_fingerprint(s): s.model_dump(mode="json") for s in result.specs},
        "records": [r.model_dump(mode="json") for r in result.records],
        "failures": [f.model_dump(mode="json") for f in result.failures],
    }
    json_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True), encoding="utf-8")
    logger.info(f"Wrote {csv_path} and {json_path}")
    return [csv_path, json_path]
