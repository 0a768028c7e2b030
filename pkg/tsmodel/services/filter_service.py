"""
Filter Service - Standardized residuals from returns and model parameters.

Runs the (fractionally differenced) ARMA recursion and the GARCH variance
recursion, then evaluates the log-likelihood
    loglik = Σ_t [ln pdf(eps_t) - ln sigma_t].

Usage:
    from tsmodel.services import filter_returns, pit_series

    out = filter_returns(spec, params, returns)
    u = pit_series(params.dist, out.eps)
"""

import logging
from typing import Optional, Tuple

import numpy as np

from common.exceptions import DataValidationError, EvaluationError
from common.validators import SeriesValidator
from dists.distributions import InnovationDist

from ..fracdiff import fracdiff
from ..recursions import arma_garch_filter
from ..types import ArmaGarchParams, FilterOutput, ModelSpec

logger = logging.getLogger(__name__)


def _as_lags(values) -> np.ndarray:
    return np.asarray(values, dtype=np.float64).reshape(-1)


def run_recursion(
    spec: ModelSpec,
    params: ArmaGarchParams,
    r: np.ndarray,
    sigma2_init: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Shocks and conditional variances for an already validated series.

    Raises:
        EvaluationError: If the variance recursion overflows or turns non-positive
    """
    deviation = r - params.mu
    x = fracdiff(deviation, params.d) if spec.fractional else deviation
    if sigma2_init is None:
        sigma2_init = float(np.var(r))

    n = len(r)
    a = np.zeros(n, dtype=np.float64)
    sigma2 = np.zeros(n, dtype=np.float64)
    ok = arma_garch_filter(
        np.ascontiguousarray(x, dtype=np.float64),
        _as_lags(params.phi),
        _as_lags(params.theta),
        float(params.gamma),
        _as_lags(params.alpha),
        _as_lags(params.beta),
        float(sigma2_init),
        a,
        sigma2,
    )
    if not ok:
        raise EvaluationError(f"variance recursion exploded for {spec.label}")
    return a, sigma2


def loglik_of(spec: ModelSpec, params: ArmaGarchParams, r: np.ndarray, sigma2_init: Optional[float] = None) -> float:
    """Log-likelihood only (used inside the optimizer)."""
    a, sigma2 = run_recursion(spec, params, r, sigma2_init)
    sigma = np.sqrt(sigma2)
    value = float(np.sum(params.dist.logpdf(a / sigma) - np.log(sigma)))
    if not np.isfinite(value):
        raise EvaluationError(f"non-finite log-likelihood for {spec.label}")
    return value


class FilterService:
    """Service for residual extraction"""

    @staticmethod
    def filter(spec: ModelSpec, params: ArmaGarchParams, r) -> FilterOutput:
        """
        Filter a return series with fixed parameters.

        Args:
            spec: Lag orders and innovation family
            params: Parameters matching the spec
            r: Return series

        Returns:
            FilterOutput with eps * sigma == a elementwise

        Raises:
            DataValidationError: Non-finite input or series too short
            EvaluationError: Explosive recursion or non-finite likelihood
        """
        r = SeriesValidator.as_finite_array(r, name="returns")
        if len(r) <= spec.max_order:
            raise DataValidationError(
                f"series length {len(r)} must exceed the largest lag order {spec.max_order}"
            )
        params.check_spec(spec)

        a, sigma2 = run_recursion(spec, params, r)
        sigma = np.sqrt(sigma2)
        eps = a / sigma
        # shocks re-derived from eps so that eps * sigma == a bitwise
        a = eps * sigma
        loglik = float(np.sum(params.dist.logpdf(eps) - np.log(sigma)))
        if not np.isfinite(loglik):
            raise EvaluationError(f"non-finite log-likelihood for {spec.label}")
        return FilterOutput(a=a, sigma=sigma, eps=eps, loglik=loglik)

    @staticmethod
    def pit_series(d: InnovationDist, eps) -> np.ndarray:
        """Probability integral transform y_t = F(eps_t)."""
        eps = SeriesValidator.as_finite_array(eps, name="residuals")
        return np.asarray(d.cdf(eps), dtype=float).reshape(-1)


def filter_returns(spec: ModelSpec, params: ArmaGarchParams, r) -> FilterOutput:
    return FilterService.filter(spec, params, r)


def pit_series(d: InnovationDist, eps) -> np.ndarray:
    return FilterService.pit_series(d, eps)
