"""
Dataset API Routes
"""
from fastapi import APIRouter, Depends, HTTPException, status

from app.api.deps import get_settings, resolve_data_path, to_http_error
from app.config import Settings
from app.models.experiment import DatasetStats
from app.schemas.dataset_schema import StatsRequest
from app.services.datasets import dataset_stats

router = APIRouter()


@router.post(
    "/stats",
    response_model=DatasetStats,
    status_code=status.HTTP_200_OK,
    summary="Dataset statistics",
    description="Nodes, unique links, mean density, snapshots and temporal measures"
)
def get_stats(request: StatsRequest, config: Settings = Depends(get_settings)):
    """Summary statistics of a dataset under the data directory"""
    path = resolve_data_path(request.path, config.data_root)
    try:
        return dataset_stats(request.to_ref(str(path)))
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_error(e)
