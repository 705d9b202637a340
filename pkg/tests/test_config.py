"""Tests for configuration management and logging."""

import io
import json
import logging

from src.config import Config, config
from src.core.logging import JsonFormatter, logger


class TestConfig:
    """Tests for Config class."""

    def test_test_environment(self):
        """Test that the test environment variables were picked up."""
        assert Config.THREADS == 1
        assert Config.PROGRESS == "0"
        assert Config.MU_CACHE_SIZE == 64
        assert Config.LOG_LEVEL == "ERROR"

    def test_get_threads_default(self):
        """Test worker count falls back to ZECKLAB_THREADS."""
        assert config.get_threads() == Config.THREADS

    def test_get_threads_override(self):
        """Test --threads overrides and is clamped to 1."""
        assert config.get_threads(4) == 4
        assert config.get_threads(0) == 1
        assert config.get_threads(-3) == 1

    def test_progress_disabled(self):
        """Test ZECKLAB_PROGRESS=0 disables progress bars."""
        assert config.progress_enabled() is False

    def test_progress_forced(self, monkeypatch):
        """Test ZECKLAB_PROGRESS=1 enables progress bars."""
        monkeypatch.setattr(config, "PROGRESS", "1")
        assert config.progress_enabled() is True

    def test_progress_auto_without_tty(self, monkeypatch):
        """Test auto mode follows the terminal."""
        monkeypatch.setattr(config, "PROGRESS", "auto")
        monkeypatch.setattr("sys.stderr", io.StringIO())
        assert config.progress_enabled() is False

    def test_mixing_limits(self):
        """Test mixing event sizes are within their clamps."""
        assert 1 <= Config.MIXING_EVENT_DIGITS <= 6
        assert 1 <= Config.MIXING_BLOCK_COORDS <= 3
        assert Config.MIXING_MIN_EVENT_COUNT >= 1

    def test_defaults(self):
        """Test seed and output defaults."""
        assert isinstance(Config.DEFAULT_SEED, int)
        assert Config.FLOAT_DIGITS == 12
        assert Config.TOWER_MAX_ORDER >= 2


class TestLogging:
    """Tests for logging setup."""

    def test_logger_name(self):
        """Test the application logger."""
        assert logger.name == "zecklab"

    def test_json_formatter(self):
        """Test structured records carry the known extra fields."""
        record = logging.LogRecord("zecklab", logging.INFO, __file__, 1, "Computed mu^(4)", None, None)
        record.r = 4
        record.evaluations = 12
        record.unrelated = "x"
        data = json.loads(JsonFormatter().format(record))
        assert data["message"] == "Computed mu^(4)"
        assert data["level"] == "INFO"
        assert data["r"] == 4
        assert data["evaluations"] == 12
        assert "unrelated" not in data
