"""Health, readiness, and cache endpoints."""

from fastapi import APIRouter, Request

from src.config import config
from src.models import CacheStatusResponse, HealthResponse, ReadinessResponse
from src.services.mudist import cache_status as distribution_cache_status


router = APIRouter()


@router.get(
    "/healthz",
    response_model=HealthResponse,
    summary="Health Check",
    description="Returns health status"
)
async def healthz():
    """Health check endpoint."""
    return HealthResponse(status="ok")


@router.get(
    "/readyz",
    response_model=ReadinessResponse,
    summary="Readiness Check",
    description="Returns readiness status with the worker configuration"
)
async def readyz(request: Request):
    """Readiness check endpoint."""
    executor = getattr(request.app.state, "executor", None)
    return ReadinessResponse(
        status="ready" if executor is not None else "starting",
        threads=config.get_threads(),
        version=config.VERSION,
    )


@router.get(
    "/cache",
    response_model=CacheStatusResponse,
    summary="Cache Status",
    description="Returns the cached digit-sum distributions and hit counters"
)
async def cache_status():
    """Cache status endpoint."""
    return CacheStatusResponse(**distribution_cache_status())
