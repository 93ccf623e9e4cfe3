# src/utils/errors.py
"""
Exception hierarchy for the toolkit.
The CLI maps ConfigError/DataError to exit code 1 and NumericalError to exit code 2.
"""

from typing import Any, Dict, Optional


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(ToolkitError, ValueError):
    """Invalid run configuration or command-line usage."""


class DataError(ToolkitError, ValueError):
    """Dataset file that cannot be parsed or used."""


class DomainError(ToolkitError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class NumericalError(ToolkitError, ArithmeticError):
    """Non-finite values, singular matrices or loss of positive-definiteness."""

    def __init__(
        self,
        message: str,
        step: Optional[int] = None,
        state: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message)
        self.step = step
        self.state = state
