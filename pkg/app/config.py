"""
Configuration settings for the Ex-Ante IM toolkit
Loads environment variables and provides application settings
"""
from pathlib import Path
from typing import List

import numpy as np
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables"""

    # Application
    PROJECT_NAME: str = "Ex-Ante IM Toolkit"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"
    API_V1_PREFIX: str = "/api/v1"

    # CORS
    ALLOWED_ORIGINS: str = "http://localhost:5173,http://localhost:3000"

    # Server
    HOST: str = "0.0.0.0"
    PORT: int = 8000

    # Storage
    DATA_DIR: str = "data"
    RESULTS_DIR: str = "results"
    CACHE_DIR: str = ""

    # Parallelism
    IM_WORKERS: int = 1
    MC_CHUNK_SIZE: int = 1000

    # Diffusion
    DEFAULT_MC_RUNS: int = 1000
    EXACT_MAX_NODES: int = 20
    EXACT_MAX_STEPS: int = 6

    # Link prediction
    DEFAULT_XI: float = 0.9
    DEFAULT_PHI: float = 0.9
    NMF_RESTARTS: int = 25
    NMF_MAX_ITER: int = 500
    NMF_TOL: float = 1e-4
    LASSO_TOL: float = 1e-6
    LASSO_MAX_SWEEPS: int = 10_000

    # JC baseline
    JC_ADD_FRAC: float = 0.05
    JC_REMOVE_FRAC: float = 0.05

    @property
    def allowed_origins_list(self) -> List[str]:
        """Convert ALLOWED_ORIGINS string to list"""
        return [origin.strip() for origin in self.ALLOWED_ORIGINS.split(",") if origin.strip()]

    @property
    def data_root(self) -> Path:
        """DATA_DIR resolved to an absolute path"""
        return Path(self.DATA_DIR).resolve()

    @property
    def cache_root(self) -> Path | None:
        """CACHE_DIR as a path, or None when model caching is disabled"""
        return Path(self.CACHE_DIR) if self.CACHE_DIR else None

    @property
    def default_alpha_grid(self) -> List[float]:
        """20 log-spaced LASSO penalties in [1e-4, 10]"""
        return [float(a) for a in np.logspace(-4, 1, 20)]

    class Config:
        env_file = ".env"
        case_sensitive = True


# Create global settings instance
settings = Settings()
