"""
Estimation Service - Maximum likelihood for ARMA(FARIMA)-GARCH models.

Fits run on the series rescaled to unit variance; mean and intercept are
mapped back afterwards (mu * s, gamma * s^2, loglik - T ln s). Each fit uses
the documented starting points in FitDefaults.STARTS with SLSQP under box
bounds and the stationarity constraint Σα + Σβ < 1. The best start wins by
log-likelihood, ties by the smaller parameter norm. Standard errors come
from the inverse numerical Hessian of the negative log-likelihood.

Usage:
    from tsmodel.services import fit, long_memory_test

    fitted = fit(ModelSpec(p=1, q=1, k=1, l=1, dist="std"), returns)
    fitted.param_table()
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from scipy import optimize, stats
from statsmodels.tools.numdiff import approx_hess

from common.exceptions import ConvergenceError, DataValidationError, TailDepError
from common.utils import taildep_setting
from common.validators import SeriesValidator
from dists.constants import DistributionFamily

from ..constants import FitDefaults, ParameterBounds
from ..types import ArmaGarchParams, FittedModel, ModelSpec
from .filter_service import FilterService, loglik_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LongMemoryResult:
    """Wald test of H0: d = 0 in a FARIMA(1,d,1)-GARCH(1,1) fit."""

    d: float
    stderr: float
    statistic: float
    p_value: float
    fitted: FittedModel

    def to_dict(self) -> Dict[str, float]:
        return {"d": self.d, "stderr": self.stderr, "statistic": self.statistic, "p_value": self.p_value}


@dataclass
class _StartResult:
    fun: float
    x: np.ndarray
    success: bool
    message: str


class EstimationService:
    """Service for marginal model estimation"""

    @staticmethod
    def start_vectors(spec: ModelSpec, z: np.ndarray) -> List[np.ndarray]:
        """Documented starting points on the unit-variance scale."""
        bounds = spec.bounds()
        starts = []
        for arch_total, garch_total, ar_start, d_start in FitDefaults.STARTS:
            alpha = [arch_total / spec.l] * spec.l if spec.l else []
            beta = [garch_total / spec.k] * spec.k if spec.k else []
            persistence = sum(alpha) + sum(beta)
            values = [float(np.mean(z))]
            values += [ar_start] + [0.0] * (spec.p - 1) if spec.p else []
            values += [0.0] * spec.q
            if spec.fractional:
                values.append(d_start)
            values.append(max(1.0 - persistence, ParameterBounds.GAMMA[0]) * float(np.var(z)))
            values += alpha + beta
            values += list(spec.dist_class.start_values())
            vec = np.array(values, dtype=float)
            lo = np.array([b[0] for b in bounds])
            hi = np.array([b[1] for b in bounds])
            starts.append(np.clip(vec, lo, hi))
        return starts

    @staticmethod
    def _dist_fixed(spec: ModelSpec, sghyd_index: Optional[float]) -> Dict[str, float]:
        if spec.dist != DistributionFamily.SGHYD:
            return {}
        index = sghyd_index if sghyd_index is not None else float(taildep_setting("SGHYD_INDEX"))
        return {"index": float(index)}

    @staticmethod
    def fit(
        spec: ModelSpec,
        r,
        sghyd_index: Optional[float] = None,
        tol: Optional[float] = None,
    ) -> FittedModel:
        """
        Maximum likelihood fit.

        Args:
            spec: Lag orders, fractional flag and innovation family
            r: Return series (T >= MIN_OBSERVATIONS, finite, non-constant)
            sghyd_index: Fixed GH index for SGHYD innovations
            tol: Optimizer tolerance (TAILDEP['OPTIMIZER_TOL'] by default)

        Returns:
            FittedModel on the original scale; converged=False if the best
            start did not meet the tolerance

        Raises:
            DataValidationError: Non-finite input
            DegenerateDataError: Constant or too-short series
            ConvergenceError: No start produced a finite likelihood
        """
        r = SeriesValidator.clean_returns(r, minimum=int(taildep_setting("MIN_OBSERVATIONS")))
        if len(r) <= spec.max_order:
            raise DataValidationError(f"series length {len(r)} must exceed lag order {spec.max_order}")
        tol = float(tol if tol is not None else taildep_setting("OPTIMIZER_TOL"))

        scale = float(np.std(r))
        z = r / scale
        sigma2_init = float(np.var(z))
        fixed = EstimationService._dist_fixed(spec, sghyd_index)
        n_mean = 1 + spec.p + spec.q + (1 if spec.fractional else 0)
        garch_slice = slice(n_mean + 1, n_mean + 1 + spec.l + spec.k)

        def negloglik(vec, strict=True):
            try:
                params = ArmaGarchParams.from_vector(spec, vec, **fixed)
                if strict:
                    params.validate()
                return -loglik_of(spec, params, z, sigma2_init)
            except TailDepError:
                return FitDefaults.PENALTY

        constraints = []
        if spec.k + spec.l > 0:
            constraints.append({
                "type": "ineq",
                "fun": lambda v: 1.0 - ParameterBounds.STATIONARITY_MARGIN - float(np.sum(v[garch_slice])),
            })

        results: List[_StartResult] = []
        for x0 in EstimationService.start_vectors(spec, z):
            res = optimize.minimize(
                negloglik,
                x0,
                method="SLSQP",
                bounds=spec.bounds(),
                constraints=constraints,
                options={"ftol": tol, "maxiter": FitDefaults.MAX_ITER},
            )
            results.append(_StartResult(float(res.fun), np.asarray(res.x, dtype=float), bool(res.success), str(res.message)))

        feasible = [res for res in results if res.fun < FitDefaults.PENALTY]
        if not feasible:
            raise ConvergenceError(
                f"no starting point gave a finite likelihood for {spec.label}",
                errors={"starts": len(results)},
            )
        best = min(feasible, key=lambda res: (res.fun, float(np.linalg.norm(res.x))))
        if not best.success:
            logger.warning(f"{spec.label}: optimizer stopped without convergence ({best.message})")

        stderr_scaled = EstimationService._stderr(negloglik, best.x, spec)
        estimate = ArmaGarchParams.from_vector(spec, best.x, **fixed)
        params = EstimationService._rescale(estimate, scale)

        filtered = FilterService.filter(spec, params, r)
        stderr = dict(zip(spec.param_names, stderr_scaled))
        stderr["mu"] *= scale
        stderr["gamma"] *= scale * scale

        logger.debug(f"Fitted {spec.label}: loglik={filtered.loglik:.4f}, converged={best.success}")
        return FittedModel(
            spec=spec,
            params=params,
            loglik=filtered.loglik,
            stderr=stderr,
            filtered=filtered,
            converged=best.success,
            message=best.message,
            n_starts=len(results),
        )

    @staticmethod
    def _rescale(params: ArmaGarchParams, scale: float) -> ArmaGarchParams:
        return ArmaGarchParams(
            mu=params.mu * scale,
            phi=params.phi,
            theta=params.theta,
            gamma=params.gamma * scale * scale,
            alpha=params.alpha,
            beta=params.beta,
            d=params.d,
            dist=params.dist,
        )

    @staticmethod
    def _stderr(negloglik, x: np.ndarray, spec: ModelSpec) -> List[float]:
        """Square roots of the inverse Hessian diagonal; NaN where unavailable."""
        nan = [float("nan")] * len(x)
        try:
            hessian = approx_hess(x, lambda v: negloglik(v, strict=False))
            if not np.all(np.isfinite(hessian)):
                raise np.linalg.LinAlgError("non-finite Hessian")
            cov = np.linalg.inv(hessian)
        except np.linalg.LinAlgError as exc:
            logger.warning(f"{spec.label}: standard errors unavailable ({exc})")
            return nan
        diag = np.diag(cov)
        out = [math.sqrt(v) if np.isfinite(v) and v > 0 else float("nan") for v in diag]
        if any(math.isnan(v) for v in out):
            logger.warning(f"{spec.label}: Hessian not positive definite, some standard errors are NaN")
        return out

    @staticmethod
    def long_memory_test(r, dist: str = DistributionFamily.STUDENT_T, sghyd_index: Optional[float] = None) -> LongMemoryResult:
        """
        FARIMA(1,d,1)-GARCH(1,1) fit with a Wald test of d = 0.

        The p value is two-sided from the normal approximation d / se(d).
        """
        spec = ModelSpec(p=1, q=1, k=1, l=1, fractional=True, dist=dist)
        fitted = EstimationService.fit(spec, r, sghyd_index=sghyd_index)
        d = fitted.params.d
        se = fitted.stderr.get("d", float("nan"))
        statistic = d / se if math.isfinite(se) and se > 0 else float("nan")
        p_value = float(2.0 * stats.norm.sf(abs(statistic))) if math.isfinite(statistic) else float("nan")
        return LongMemoryResult(d=d, stderr=se, statistic=statistic, p_value=p_value, fitted=fitted)


def fit(spec: ModelSpec, r, **kwargs) -> FittedModel:
    return EstimationService.fit(spec, r, **kwargs)


def long_memory_test(r, dist: str = DistributionFamily.STUDENT_T, **kwargs) -> LongMemoryResult:
    return EstimationService.long_memory_test(r, dist=dist, **kwargs)
