"""API layer for FastAPI application."""

import asyncio
from functools import partial
from typing import Any, Callable

from fastapi import Request


async def run_blocking(request: Request, fn: Callable[..., Any], *args: Any, **kwargs: Any) -> Any:
    """Run CPU-bound work on the application's executor."""
    loop = asyncio.get_running_loop()
    return await loop.run_in_executor(request.app.state.executor, partial(fn, *args, **kwargs))
