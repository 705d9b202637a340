"""Pytest configuration and fixtures."""

import os

import numpy as np
import pytest

# Set test environment variables before importing app code
os.environ["LOG_LEVEL"] = "ERROR"  # Suppress logs during tests
os.environ["ZECKLAB_THREADS"] = "1"
os.environ["ZECKLAB_PROGRESS"] = "0"
os.environ["ZECKLAB_MU_CACHE_SIZE"] = "64"


@pytest.fixture
def rng():
    """Seeded numpy generator."""
    return np.random.default_rng(np.random.SeedSequence([20240917, 99]))


@pytest.fixture
def app_client():
    """Create test client for the FastAPI app."""
    from fastapi.testclient import TestClient
    from src.app import app

    with TestClient(app) as client:
        yield client


@pytest.fixture
def fresh_cache():
    """Empty distribution cache before and after the test."""
    from src.services import mudist

    mudist.clear_cache()
    yield mudist
    mudist.clear_cache()
