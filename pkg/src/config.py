"""Configuration management for zecklab."""

import os
import sys
from typing import Optional

from src import __version__


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ("1", "true", "yes")


class Config:
    """Centralized configuration from environment variables."""

    # Application
    VERSION = __version__
    TITLE = "zecklab"

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO").upper()
    LOG_FORMAT: str = os.getenv("LOG_FORMAT", "plain").lower()  # plain|json
    LOG_TO_FILE: bool = _env_bool("LOG_TO_FILE", "0")
    LOG_FILE_PATH: str = os.getenv("LOG_FILE_PATH", "logs/zecklab.log")
    LOG_FILE_MAX_BYTES: int = int(os.getenv("LOG_FILE_MAX_BYTES", "10485760"))  # 10MB
    LOG_FILE_BACKUP_COUNT: int = int(os.getenv("LOG_FILE_BACKUP_COUNT", "5"))

    # Workers and randomness
    THREADS: int = max(1, int(os.getenv("ZECKLAB_THREADS", "1")))
    DEFAULT_SEED: int = int(os.getenv("ZECKLAB_SEED", "20240917"))

    # Sampler
    SAMPLER_MAX_DIGITS: int = int(os.getenv("ZECKLAB_SAMPLER_MAX_DIGITS", "1000000"))
    SAMPLER_CHUNK: int = max(2, int(os.getenv("ZECKLAB_SAMPLER_CHUNK", "16")))

    # Distribution algorithm
    MU_DEBUG_CHECK: bool = _env_bool("ZECKLAB_MU_DEBUG", "0")
    MU_CACHE_SIZE: int = max(1, int(os.getenv("ZECKLAB_MU_CACHE_SIZE", "256")))
    TOWER_MAX_ORDER: int = int(os.getenv("ZECKLAB_TOWER_MAX_ORDER", "20"))
    # Exact masses below the tail threshold grow about 0.42 digits per step
    MU_MAX_TAIL_DEPTH: int = max(0, int(os.getenv("ZECKLAB_MU_MAX_TAIL_DEPTH", "5000")))
    MU_MAX_WINDOW: int = max(1, int(os.getenv("ZECKLAB_MU_MAX_WINDOW", "1000")))

    # Mixing estimators
    MIXING_EVENT_DIGITS: int = min(6, max(1, int(os.getenv("ZECKLAB_MIXING_EVENT_DIGITS", "4"))))
    MIXING_BLOCK_COORDS: int = min(3, max(1, int(os.getenv("ZECKLAB_MIXING_BLOCK_COORDS", "3"))))
    MIXING_MIN_EVENT_COUNT: int = max(1, int(os.getenv("ZECKLAB_MIXING_MIN_EVENT_COUNT", "30")))

    # Output
    FLOAT_DIGITS: int = int(os.getenv("ZECKLAB_FLOAT_DIGITS", "12"))
    PROGRESS: str = os.getenv("ZECKLAB_PROGRESS", "auto").lower()  # auto|1|0

    def get_threads(self, override: Optional[int] = None) -> int:
        """Resolve the worker count.

        Args:
            override: Value from --threads, if given

        Returns:
            Number of worker threads, at least 1
        """
        if override is not None:
            return max(1, int(override))
        return self.THREADS

    def progress_enabled(self) -> bool:
        """Whether tqdm progress bars should be shown."""
        if self.PROGRESS in ("1", "true", "yes"):
            return True
        if self.PROGRESS in ("0", "false", "no"):
            return False
        try:
            return sys.stderr.isatty()
        except Exception:
            return False


# Global config instance
config = Config()
