"""
Dataset Schemas
"""
from typing import Optional

from pydantic import BaseModel, Field

from app.models.experiment import DatasetFormat, DatasetRef
from app.models.network import AggregationScheme


class StatsRequest(BaseModel):
    """Dataset to summarize; the path is relative to the data directory"""
    path: str = Field(..., min_length=1, description="Event or snapshot file")
    format: DatasetFormat = DatasetFormat.EVENTS
    n_bins: Optional[int] = Field(None, ge=1, description="Snapshots for event files")
    scheme: AggregationScheme = AggregationScheme.EQUAL_TIME

    def to_ref(self, path: str) -> DatasetRef:
        return DatasetRef(path=path, format=self.format, n_bins=self.n_bins, scheme=self.scheme)

    class Config:
        json_schema_extra = {
            "example": {
                "path": "office.txt",
                "format": "events",
                "n_bins": 7,
                "scheme": "equal-time"
            }
        }
