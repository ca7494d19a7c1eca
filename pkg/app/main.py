"""
Ex-Ante IM Toolkit - Main Application
HTTP surface over the ex-ante influence maximization harness
"""
import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.config import settings
from app.core.log import setup_logging

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Lifespan context manager for startup and shutdown events
    """
    setup_logging(settings.LOG_LEVEL)
    logger.info(f"Starting {settings.PROJECT_NAME} (data dir: {settings.data_root})")
    logger.info(f"Experiments: {settings.API_V1_PREFIX}/experiments, datasets: {settings.API_V1_PREFIX}/datasets")
    yield
    logger.info(f"Shutting down {settings.PROJECT_NAME}")


# Create FastAPI application
app = FastAPI(
    title=settings.PROJECT_NAME,
    description="Influence maximization on predicted temporal networks",
    version="1.0.0",
    lifespan=lifespan,
    docs_url="/docs",
    redoc_url="/redoc",
)


# Configure CORS
if settings.allowed_origins_list:
    app.add_middleware(
        CORSMiddleware,
        allow_origins=settings.allowed_origins_list,
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )


# ============================================================================
# ROOT & HEALTH ENDPOINTS
# ============================================================================

@app.get("/")
async def root():
    """Root endpoint - API health check"""
    return {
        "message": f"Welcome to {settings.PROJECT_NAME}",
        "status": "active",
        "version": "1.0.0",
        "docs": "/docs",
        "redoc": "/redoc"
    }


@app.get("/health")
async def health_check():
    """Health check endpoint"""
    return {
        "status": "healthy",
        "data_dir": "available" if settings.data_root.is_dir() else "missing",
        "workers": settings.IM_WORKERS,
        "environment": "development" if settings.DEBUG else "production"
    }


@app.get("/api/v1")
async def api_info():
    """API information endpoint"""
    return {
        "name": settings.PROJECT_NAME,
        "version": "1.0.0",
        "description": "Run ex-ante influence maximization experiments on temporal networks",
        "endpoints": {
            "docs": "/docs",
            "redoc": "/redoc",
            "health": "/health",
            "run": f"{settings.API_V1_PREFIX}/experiments/run",
            "sweep": f"{settings.API_V1_PREFIX}/experiments/sweep",
            "stats": f"{settings.API_V1_PREFIX}/datasets/stats"
        }
    }


# ============================================================================
# REGISTER ROUTERS
# ============================================================================

from app.api.routes import datasets, experiments  # noqa: E402

app.include_router(
    experiments.router,
    prefix=settings.API_V1_PREFIX + "/experiments",
    tags=["Experiments"]
)

app.include_router(
    datasets.router,
    prefix=settings.API_V1_PREFIX + "/datasets",
    tags=["Datasets"]
)
