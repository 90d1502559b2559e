"""
Error hierarchy and centralized error handling
"""

import logging
import traceback
from datetime import datetime, timezone
from typing import Any, Dict, Optional, Tuple

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class QStarError(Exception):
    """Base class for every error raised by the package"""

    exit_code = EXIT_FAILURE
    title = "Computation Error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class NotInvertible(QStarError):
    """Series (or series matrix) with a singular leading coefficient"""

    title = "Not Invertible"


class NoRealSqrt(QStarError):
    """Square root requested of a series whose leading coefficient is not positive"""

    title = "No Real Square Root"


class NegativeFactorial(QStarError):
    title = "Negative Factorial"


class DegenerateKernel(QStarError):
    """Highest-weight kernel of unexpected dimension; signals an implementation fault"""

    title = "Degenerate Kernel"


class DimensionMismatch(QStarError):
    title = "Dimension Mismatch"


class MissingBlockFactor(QStarError):
    title = "Missing Block Factor"


class VerificationFailure(QStarError):
    title = "Verification Failure"


class UsageError(QStarError):
    """Malformed command line, label or JSON input"""

    exit_code = EXIT_USAGE
    title = "Usage Error"


class InvalidSpin(UsageError):
    title = "Invalid Spin"


class DegreeLimitExceeded(UsageError):
    """Product would exceed the configured degree cap (2j)"""

    title = "Degree Limit Exceeded"


class ErrorHandler:
    """Centralized error handling"""

    @staticmethod
    def _payload(error: str, message: str, command: Optional[str]) -> Dict[str, Any]:
        return {
            "error": error,
            "message": message,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "command": command,
        }

    @staticmethod
    def handle_usage_error(error_msg: str, command: Optional[str] = None, field=None):
        """Handle usage errors with structured response"""
        response = ErrorHandler._payload("Usage Error", error_msg, command)
        if field:
            response["field"] = field
        return response, EXIT_USAGE

    @staticmethod
    def handle_package_error(error: QStarError, command: Optional[str] = None):
        """Handle errors raised deliberately by the package"""
        response = ErrorHandler._payload(error.title, error.message, command)
        if error.details:
            response["details"] = error.details
        return response, error.exit_code

    @staticmethod
    def handle_unexpected_error(error: Exception, command: Optional[str] = None, include_trace=False):
        """Handle errors nobody anticipated"""
        response = ErrorHandler._payload("Internal Error", str(error), command)
        if include_trace:
            response["trace"] = traceback.format_exc()
        return response, EXIT_FAILURE

    @staticmethod
    def handle_exception(error: Exception, command: Optional[str] = None, debug: bool = False) -> Tuple[Dict[str, Any], int]:
        """Map any exception to (payload, exit code)"""
        if isinstance(error, UsageError):
            logger.warning(f"{command or 'command'}: {error.message}")
            return ErrorHandler.handle_package_error(error, command)
        if isinstance(error, QStarError):
            logger.error(f"{command or 'command'} failed: {error.title}: {error.message}")
            return ErrorHandler.handle_package_error(error, command)
        logger.exception(f"Unexpected error in {command or 'command'}: {error}")
        return ErrorHandler.handle_unexpected_error(error, command, include_trace=debug)
