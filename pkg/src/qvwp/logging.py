"""Logger setup and context-tagged logging for evaluations and identity checks."""

import logging
import sys
from typing import Any

from .config import LoggingConfig
from .types import SeriesValue


def setup_logger(
    name: str,
    config: LoggingConfig,
) -> logging.Logger:
    """Set up a named logger writing to stderr.

    Reports and evaluated values go to stdout, so log records never mix
    with them.

    Args:
        name: Logger name
        config: Logging configuration

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(config.get_logging_level())

    # Clear existing handlers to prevent duplicates
    logger.handlers.clear()

    formatter = logging.Formatter(
        fmt="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(formatter)
    logger.addHandler(handler)

    return logger


def get_logger(name: str) -> logging.Logger:
    """Get logger (create if necessary)."""
    return logging.getLogger(name)


def warn_if_unconverged(logger: logging.Logger, label: str, result: SeriesValue) -> bool:
    """Log a warning when a series stopped at term_cap.

    Args:
        logger: Logger to write to
        label: What was evaluated (e.g. "Phi(x, z)")
        result: The evaluated value

    Returns:
        True if the value converged
    """
    if not result.converged:
        logger.warning(
            f"{label} did not converge: terms_used={result.terms_used}, "
            f"tail_estimate={result.tail_estimate:.3e}"
        )
    return result.converged


class LogContext:
    """Logger wrapper that suffixes every message with fixed context fields."""

    def __init__(self, logger: logging.Logger, context: dict[str, Any]) -> None:
        """Initialize.

        Args:
            logger: Logger instance
            context: Context fields (identity id, seed, ...)
        """
        self.logger = logger
        self.context = context

    def child(self, **extra: Any) -> "LogContext":
        """Context with additional fields, e.g. a sample index."""
        return LogContext(self.logger, {**self.context, **extra})

    def debug(self, message: str) -> None:
        """Log at DEBUG level."""
        self.logger.debug(f"{message} | context: {self.context}")

    def info(self, message: str) -> None:
        """Log at INFO level."""
        self.logger.info(f"{message} | context: {self.context}")

    def warning(self, message: str) -> None:
        """Log at WARNING level."""
        self.logger.warning(f"{message} | context: {self.context}")

    def error(self, message: str) -> None:
        """Log at ERROR level."""
        self.logger.error(f"{message} | context: {self.context}")
