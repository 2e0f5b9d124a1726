"""
Centralized logging configuration.
Singleton pattern for consistent logging across the application.
"""

import logging
import os
import sys
from typing import Optional

from src.constants import Status

LOGGER_NAME = "intent-bench"

app_logger = logging.getLogger(LOGGER_NAME)
app_logger.propagate = False


class _BenchFormatter(logging.Formatter):
    """Renders `LEVEL [source] [correlation] message`."""

    def format(self, record: logging.LogRecord) -> str:
        source = getattr(record, "source", None) or "APP"
        correlation_id = getattr(record, "correlation_id", None)
        status = getattr(record, "status", None)
        parts = [f"{record.levelname}", f"[{source}]"]
        if correlation_id is not None:
            parts.append(f"[{correlation_id}]")
        if status is not None:
            parts.append(f"({status})")
        parts.append(record.getMessage())
        return " ".join(parts)


class BenchLogger:
    """
    Singleton logger for the benchmark.
    Writes to stderr so stdout stays reserved for machine-readable output.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._logger = app_logger
        self.configure()
        self._initialized = True

    @classmethod
    def get_instance(cls) -> "BenchLogger":
        """Returns the logger singleton instance."""
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance

    def configure(self, level: Optional[str] = None, log_file: Optional[str] = None):
        """
        (Re)attach handlers.

        Args:
            level: Level name; INTENT_BENCH_LOG_LEVEL wins when set
            log_file: Optional path of an extra plain-text log file
        """
        level_name = os.getenv("INTENT_BENCH_LOG_LEVEL") or level or "INFO"
        self._logger.setLevel(getattr(logging, level_name.upper(), logging.INFO))

        for existing in list(self._logger.handlers):
            self._logger.removeHandler(existing)
            existing.close()

        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setFormatter(_BenchFormatter())
        self._logger.addHandler(stream_handler)

        if log_file:
            file_handler = logging.FileHandler(log_file, encoding="utf-8")
            file_handler.setFormatter(_BenchFormatter())
            self._logger.addHandler(file_handler)

    def configure_from(self, config: dict):
        """Apply the `logging` section of a loaded config."""
        section = (config or {}).get("logging", {}) or {}
        self.configure(level=section.get("level"), log_file=section.get("file"))

    def _log(self, level: int, message: str, status=Status.Running,
             correlation_id=None, source=None):
        self._logger.log(
            level,
            message,
            extra={
                "source": source,
                "correlation_id": correlation_id,
                "status": status.value if isinstance(status, Status) else status,
            },
        )

    def log_debug(self, message, status=Status.Running, correlation_id=None, source=None):
        """Log debug message."""
        self._log(logging.DEBUG, message, status, correlation_id, source)

    def log_info(self, message, status=Status.Running, correlation_id=None, source=None):
        """Log info message."""
        self._log(logging.INFO, message, status, correlation_id, source)

    def log_warning(self, message, status=Status.Running, correlation_id=None, source=None):
        """Log warning message."""
        self._log(logging.WARNING, message, status, correlation_id, source)

    def log_error(self, message, status=Status.Failed, correlation_id=None, source=None):
        """Log error message."""
        self._log(logging.ERROR, message, status, correlation_id, source)
