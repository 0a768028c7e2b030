"""
Typed errors shared by every analysis app.

All errors carry a human-readable message, an optional field -> message
dict and an optional stage label. The pipeline attaches the stage label
when it re-raises a sub-error; management commands turn any TailDepError
into a non-zero exit with that label.

Usage:
    from common.exceptions import DataValidationError

    raise DataValidationError("Price must be positive", errors={"line": 7})
"""

from typing import Any, Dict, Optional


class TailDepError(Exception):
    """Base exception for analysis errors."""

    def __init__(
        self,
        message: str,
        errors: Optional[Dict[str, Any]] = None,
        stage: Optional[str] = None,
    ):
        super().__init__(message)
        self.message = message
        self.errors = errors or {}
        self.stage = stage

    def with_stage(self, stage: str) -> "TailDepError":
        """Attach a pipeline stage label (keeps the first label set)."""
        if self.stage is None:
            self.stage = stage
        return self

    def __str__(self) -> str:
        if self.stage:
            return f"[{self.stage}] {self.message}"
        return self.message


class DataValidationError(TailDepError):
    """Raised when input data is malformed (bad rows, NaNs, length mismatch)."""

    def __init__(
        self,
        message: str,
        errors: Optional[Dict[str, Any]] = None,
        stage: Optional[str] = None,
        line: Optional[int] = None,
    ):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, errors=errors, stage=stage)
        self.line = line


class DegenerateDataError(TailDepError):
    """Raised when data carries no information (zero variance, singular regression)."""

    pass


class ParameterError(TailDepError):
    """Raised for parameters outside their documented domain."""

    pass


class DomainError(ParameterError):
    """Raised when a special function is evaluated outside its domain."""

    pass


class EvaluationError(TailDepError):
    """Raised when a recursion or likelihood cannot be evaluated (overflow, non-finite)."""

    pass


class ConvergenceError(TailDepError):
    """Raised when no optimizer start produced a finite objective."""

    pass


class InfeasibleFitError(TailDepError):
    """Raised when a copula family cannot represent the sample dependence."""

    pass


class StandardizationError(TailDepError):
    """Raised when a GH parameter set cannot be standardized to mean 0, variance 1."""

    pass


class ConfigurationError(TailDepError):
    """Raised when a pipeline config fails validation."""

    pass
