"""ASGI entry point for uvicorn: ``uvicorn app:app``.

All application logic is in the src/ package.
"""

from src.app import app

__all__ = ["app"]
