"""
Request/response schemas for the HTTP surface
"""
from .experiment_schema import SweepGrid, SweepResponse, SweepFailureResponse
from .dataset_schema import StatsRequest

__all__ = ["SweepGrid", "SweepResponse", "SweepFailureResponse", "StatsRequest"]
