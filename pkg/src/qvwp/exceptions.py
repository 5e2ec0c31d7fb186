"""Exception class definitions and error handling."""

import logging
from typing import Any

logger = logging.getLogger(__name__)


class QVWPError(Exception):
    """Base exception for all qvwp errors."""

    kind = "error"

    def __init__(
        self,
        message: str,
        context: dict[str, Any] | None = None,
    ) -> None:
        """Initialize the exception.

        Args:
            message: Error message
            context: Error context (debug information)
        """
        self.message = message
        self.context = context or {}
        super().__init__(message)

    def __str__(self) -> str:
        """String representation."""
        return self.message

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary format."""
        return {
            "error": self.__class__.__name__,
            "kind": self.kind,
            "message": self.message,
            "context": self.context,
        }


class DomainError(QVWPError, ValueError):
    """Argument outside the domain of an operation."""

    kind = "domain"

    def __init__(self, message: str, argument: str | None = None, value: Any = None) -> None:
        """Initialize the exception.

        Args:
            message: Error message
            argument: Name of the offending argument
            value: Offending value (stringified into the context)
        """
        context: dict[str, Any] = {}
        if argument:
            context["argument"] = argument
        if value is not None:
            context["value"] = str(value)
        super().__init__(message, context)
        logger.debug(f"Domain error: {message}", extra={"context": context})


class ConvergenceRegionError(DomainError):
    """Non-terminating series evaluated outside its disc of convergence."""

    kind = "convergence_region"


class PoleError(QVWPError):
    """A denominator factor lies within pole_guard of zero."""

    kind = "pole"

    def __init__(self, message: str, quantity: str, value: complex | None = None) -> None:
        """Initialize the exception.

        Args:
            message: Error message
            quantity: Which denominator vanished (e.g. "St(x)", "(q a0/a1; q)_r")
            value: Parameter that produced the vanishing factor
        """
        context: dict[str, Any] = {"quantity": quantity}
        if value is not None:
            context["value"] = str(value)
        super().__init__(message, context)
        logger.debug(f"Pole hit in {quantity}: {message}")


class DegeneracyError(QVWPError):
    """Both series routes for Psi are pole-blocked."""

    kind = "degeneracy"

    def __init__(self, message: str, causes: list[QVWPError]) -> None:
        """Initialize the exception.

        Args:
            message: Error message
            causes: Errors raised by each attempted route
        """
        context: dict[str, Any] = {"causes": [cause.to_dict() for cause in causes]}
        super().__init__(message, context)
        logger.debug(f"Degenerate parameters: {message} ({len(causes)} route(s) blocked)")


class UnreachableRegionError(QVWPError):
    """No evaluation route of the Askey-Wilson function applies at the point."""

    kind = "unreachable"

    def __init__(self, message: str, attempts: list[str]) -> None:
        """Initialize the exception.

        Args:
            message: Error message
            attempts: Routes tried, in order
        """
        super().__init__(message, {"attempts": attempts})
        logger.debug(f"Unreachable region: {message}; tried {', '.join(attempts)}")


class ConfigError(QVWPError):
    """Configuration error."""

    kind = "config"

    def __init__(self, message: str, config_key: str | None = None) -> None:
        """Initialize the exception.

        Args:
            message: Error message
            config_key: Configuration key that caused the issue
        """
        context: dict[str, Any] = {}
        if config_key:
            context["config_key"] = config_key
        super().__init__(message, context)
