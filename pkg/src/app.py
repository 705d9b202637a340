"""Main FastAPI application."""

from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from src.api.routes import distribution, numeration, observability
from src.config import config
from src.core.logging import logger
from src.exceptions import (
    DomainError,
    HorizonExhaustedError,
    InadmissibleWordError,
    InvariantBreachError,
    PathologicalSampleError,
    PreconditionError,
    VerificationError,
    ZeckendorfError,
)
from src.models import ErrorResponse


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan: startup and shutdown."""
    logger.info("Starting up zecklab service...")
    workers = config.get_threads()
    app.state.executor = ThreadPoolExecutor(max_workers=workers)
    logger.info(
        f"Executor initialized (workers={workers}), distribution cache size {config.MU_CACHE_SIZE}, "
        f"tower orders <= {config.TOWER_MAX_ORDER}",
        extra={"workers": workers},
    )

    yield

    logger.info("Shutting down zecklab service...")
    try:
        app.state.executor.shutdown(wait=False, cancel_futures=True)
    except Exception as e:
        logger.warning(f"Error shutting down executor: {e}")
    app.state.executor = None
    logger.info("zecklab service stopped")


app = FastAPI(
    title=config.TITLE,
    version=config.VERSION,
    lifespan=lifespan
)

app.include_router(observability.router, tags=["Observability"])
app.include_router(numeration.router, tags=["Numeration"])
app.include_router(distribution.router, tags=["Distribution"])


_STATUS = (
    (InadmissibleWordError, 422),
    (DomainError, 422),
    (HorizonExhaustedError, 400),
    (PathologicalSampleError, 400),
    (PreconditionError, 400),
    (InvariantBreachError, 500),
    (VerificationError, 500),
)


@app.exception_handler(ZeckendorfError)
async def zeckendorf_exception_handler(request: Request, exc: ZeckendorfError):
    """Map library errors to HTTP status codes."""
    status = next((code for cls, code in _STATUS if isinstance(exc, cls)), 400)
    if status >= 500:
        logger.error(f"{type(exc).__name__} on {request.url.path}: {exc}", exc_info=True)
    return JSONResponse(
        status_code=status,
        content=ErrorResponse(detail=str(exc), error=type(exc).__name__).model_dump(),
    )


@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    """Handle unexpected exceptions."""
    logger.error(f"Unhandled exception: {exc}", exc_info=True)
    return JSONResponse(
        status_code=500,
        content=ErrorResponse(detail="Internal server error", error=type(exc).__name__).model_dump(),
    )
