"""
API dependencies: settings access, dataset path resolution and error mapping
"""
from pathlib import Path

from fastapi import HTTPException, status
from pydantic import ValidationError

from app.config import Settings, settings
from app.core.errors import DatasetParseError, ExAnteIMError


def get_settings() -> Settings:
    """Dependency returning the global settings"""
    return settings


def resolve_data_path(path: str, root: Path) -> Path:
    """
    Resolve a dataset path relative to the data directory

    Raises:
        HTTPException: 400 if the path escapes the data directory,
            404 if the file does not exist
    """
    root = root.resolve()
    candidate = (root / path).resolve()
    if candidate != root and root not in candidate.parents:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail="Dataset path must stay inside the data directory"
        )
    if not candidate.is_file():
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Dataset not found: {path}"
        )
    return candidate


def to_http_error(e: Exception) -> HTTPException:
    """Translate toolkit failures into HTTP errors"""
    if isinstance(e, HTTPException):
        return e
    if isinstance(e, FileNotFoundError):
        return HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(e))
    if isinstance(e, DatasetParseError):
        return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    if isinstance(e, (ExAnteIMError, ValidationError, ValueError)):
        return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    return HTTPException(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        detail=f"Experiment failed: {str(e)}"
    )
