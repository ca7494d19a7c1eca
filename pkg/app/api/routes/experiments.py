"""
Experiment API Routes
Run single experiments and parameter sweeps
"""
from fastapi import APIRouter, Depends, HTTPException, status

from app.api.deps import get_settings, resolve_data_path, to_http_error
from app.config import Settings
from app.models.experiment import ExperimentSpec, ResultRecord
from app.schemas.experiment_schema import SweepFailureResponse, SweepGrid, SweepResponse
from app.services.datasets import load_temporal_network
from app.services.pipeline import run_experiment
from app.services.sweep import run_sweep, summary_table

router = APIRouter()


@router.post(
    "/run",
    response_model=ResultRecord,
    status_code=status.HTTP_200_OK,
    summary="Run one experiment",
    description="Observe, predict, select seeds and evaluate their spread on the true future"
)
def run_single(spec: ExperimentSpec, config: Settings = Depends(get_settings)):
    """
    Run one experiment.

    The dataset path is resolved inside the data directory; errors are
    reported as 400 (invalid spec), 404 (missing dataset) or 422 (unparsable file).
    """
    path = resolve_data_path(spec.dataset.path, config.data_root)
    try:
        network = load_temporal_network(spec.dataset.model_copy(update={"path": str(path)}))
        return run_experiment(spec, network=network)
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_error(e)


@router.post(
    "/sweep",
    response_model=SweepResponse,
    status_code=status.HTTP_200_OK,
    summary="Run a parameter sweep",
    description="Expand a grid of k, methods, lam, p and T and return the tidy result table"
)
def run_grid(grid: SweepGrid, config: Settings = Depends(get_settings)):
    """
    Run every combination of the grid over one dataset.

    Failed specs are returned in ``failures``; ``ok`` is false when any failed.
    """
    path = resolve_data_path(grid.dataset.path, config.data_root)
    try:
        specs = grid.expand()
        network = load_temporal_network(grid.dataset.model_copy(update={"path": str(path)}))
        result = run_sweep(specs, network=network)
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_error(e)

    table = summary_table(result)
    rows = table.astype(object).where(table.notna(), None).to_dict(orient="records")
    return SweepResponse(
        rows=rows,
        failures=[
            SweepFailureResponse(fingerprint=f.fingerprint, method=f.spec.method, k=f.spec.k, error=f.error)
            for f in result.failures
        ],
        ok=result.ok,
    )
