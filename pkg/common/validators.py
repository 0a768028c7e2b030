# common/validators.py
"""
Centralized validation classes for series inputs.

Provides reusable, class-based validators used by the service layer of
every analysis app. Validators either return an error dict (collect mode)
or raise the typed error from common.exceptions.

Usage:
    from common.validators import SeriesValidator

    x = SeriesValidator.as_finite_array(raw, name="returns")
    SeriesValidator.validate_min_length(x, 50, name="returns")
"""

from typing import Any, Dict, Sequence

import numpy as np

from common.exceptions import DataValidationError, DegenerateDataError


class BaseValidator:
    """
    Base class for all validators.

    Provides common validation patterns and error formatting.
    """

    @classmethod
    def create_error(cls, field: str, message: str) -> Dict[str, str]:
        """Create a standardized error dict."""
        return {field: message}

    @classmethod
    def merge_errors(cls, *error_dicts: Dict[str, str]) -> Dict[str, str]:
        """Merge multiple error dicts into one."""
        merged = {}
        for error_dict in error_dicts:
            if error_dict:
                merged.update(error_dict)
        return merged


class SeriesValidator(BaseValidator):
    """
    Validator for numeric series.

    Provides validation for:
        - Finiteness (no NaN / inf)
        - Minimum length
        - Non-zero variance
        - Equal lengths of paired series
        - Values inside the unit interval
    """

    # Relative variance below which a series is treated as constant
    ZERO_VARIANCE_TOL = 1e-14

    @classmethod
    def as_finite_array(cls, values: Any, name: str = "series") -> np.ndarray:
        """
        Convert to a 1-d float array and reject non-finite entries.

        Raises:
            DataValidationError: If the input is not 1-d, empty or has NaN/inf
        """
        x = np.asarray(values, dtype=float)
        if x.ndim != 1:
            raise DataValidationError(
                f"{name} must be one-dimensional, got shape {x.shape}",
                errors=cls.create_error(name, "not 1-d"),
            )
        if x.size == 0:
            raise DataValidationError(f"{name} is empty", errors=cls.create_error(name, "empty"))
        bad = ~np.isfinite(x)
        if bad.any():
            first = int(np.flatnonzero(bad)[0])
            raise DataValidationError(
                f"{name} has {int(bad.sum())} non-finite values (first at index {first})",
                errors=cls.create_error(name, "non-finite values"),
            )
        return x

    @classmethod
    def validate_min_length(cls, x: Sequence[float], minimum: int, name: str = "series") -> None:
        if len(x) < minimum:
            raise DegenerateDataError(
                f"{name} has {len(x)} observations, at least {minimum} required",
                errors=cls.create_error(name, "too short"),
            )

    @classmethod
    def validate_nonconstant(cls, x: np.ndarray, name: str = "series") -> None:
        """Raise DegenerateDataError when the series has (numerically) zero variance."""
        scale = max(float(np.max(np.abs(x))), 1.0)
        if float(np.var(x)) <= cls.ZERO_VARIANCE_TOL * scale * scale:
            raise DegenerateDataError(
                f"{name} has zero variance",
                errors=cls.create_error(name, "zero variance"),
            )

    @classmethod
    def validate_same_length(cls, x: Sequence[Any], y: Sequence[Any], names=("x", "y")) -> None:
        if len(x) != len(y):
            raise DataValidationError(
                f"length mismatch: {names[0]} has {len(x)}, {names[1]} has {len(y)}",
                errors=cls.create_error(names[1], "length mismatch"),
            )

    @classmethod
    def validate_unit_interval(cls, x: np.ndarray, name: str = "series", closed: bool = True) -> None:
        if closed:
            ok = np.all((x >= 0.0) & (x <= 1.0))
        else:
            ok = np.all((x > 0.0) & (x < 1.0))
        if not ok:
            interval = "[0, 1]" if closed else "(0, 1)"
            raise DataValidationError(
                f"{name} has values outside {interval}",
                errors=cls.create_error(name, f"outside {interval}"),
            )

    @classmethod
    def clean_returns(cls, values: Any, name: str = "returns", minimum: int = 50) -> np.ndarray:
        """Full boundary check for a return series fed to a marginal model."""
        x = cls.as_finite_array(values, name=name)
        cls.validate_min_length(x, minimum, name=name)
        cls.validate_nonconstant(x, name=name)
        return x
