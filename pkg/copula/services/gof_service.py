"""
Goodness-of-Fit Service - Cramer-von Mises statistic, parametric bootstrap
p values, the permutation independence test and fit ranking.

Bootstrap replicates run on independent child seeds spawned from one
SeedSequence and are merged by counting, so the p value does not depend on
the number of workers or their completion order.

Usage:
    from copula.services import gof_bootstrap_pvalue

    result = gof_bootstrap_pvalue(CopulaFamily.GAUSSIAN, sample, n_boot=200, seed=7)
    result.p_value
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed

from common.exceptions import ParameterError, TailDepError
from common.utils import SeedLike, make_rng, resolve_n_jobs, spawn_seeds, taildep_setting
from stattests.constants import TestMethod
from stattests.services import TestResult

from ..constants import EstimationMethod
from ..empirical import empirical_copula, kendall_tau, pseudo_obs
from ..families import copula_cdf, copula_sample
from ..types import CopulaModel, GofResult, PseudoSample, TailEstimate
from .fitting_service import CopulaFittingService

logger = logging.getLogger(__name__)


def _fit_model(family: str, s: PseudoSample, method: str) -> CopulaModel:
    if method == EstimationMethod.MLE:
        return CopulaFittingService.fit_mle(family, s)
    return CopulaFittingService.fit_inverse_tau(family, s)


def _bootstrap_replicate(family: str, model: CopulaModel, n: int, method: str, seed) -> Optional[float]:
    """One parametric bootstrap draw of S*; None when the refit fails."""
    draw = copula_sample(model, n, seed=seed)
    s_star = pseudo_obs(draw.u, draw.v)
    try:
        refit = _fit_model(family, s_star, method)
        return GofService.cvm_statistic(s_star, refit)
    except TailDepError as exc:
        logger.debug(f"bootstrap replicate failed for {family}: {exc}")
        return None


class GofService:
    """Service for copula goodness-of-fit and independence testing"""

    @staticmethod
    def cvm_statistic(s: PseudoSample, m: CopulaModel) -> float:
        """S = Σ_t (C_T(u_t, v_t) - C_m(u_t, v_t))^2 over the sample points."""
        empirical = np.asarray(empirical_copula(s, s.u, s.v), dtype=float)
        fitted = np.asarray(copula_cdf(m, s.u, s.v), dtype=float)
        return float(np.sum((empirical - fitted) ** 2))

    @staticmethod
    def gof_bootstrap_pvalue(
        family: str,
        s: PseudoSample,
        n_boot: Optional[int] = None,
        method: str = EstimationMethod.ITAU,
        seed: SeedLike = None,
        n_jobs: Optional[int] = None,
        model: Optional[CopulaModel] = None,
    ) -> GofResult:
        """
        Parametric bootstrap p value of the Cramer-von Mises statistic.

        p = (1 + #{S* >= S_obs}) / (n_valid + 1), where n_valid excludes
        replicates whose refit was infeasible; the number of failures is
        reported on the result.

        Args:
            family: Copula family tested
            s: Pseudo-observations
            n_boot: Bootstrap replicates (TAILDEP['N_BOOTSTRAP'] by default)
            method: Estimator used for the fit and every refit
            seed: Seed for the replicate streams
            n_jobs: joblib workers (TAILDEP['THREADS'] by default)
            model: Already fitted model; fitted here when omitted

        Raises:
            InfeasibleFitError: The family cannot be fitted to the sample
        """
        n_boot = int(n_boot if n_boot is not None else taildep_setting("N_BOOTSTRAP"))
        if n_boot < 1:
            raise ParameterError(f"n_boot must be >= 1, got {n_boot}")
        if seed is None:
            seed = int(taildep_setting("MASTER_SEED"))
        fitted = model if model is not None else _fit_model(family, s, method)
        s_obs = GofService.cvm_statistic(s, fitted)

        children = spawn_seeds(seed, n_boot)
        results = Parallel(n_jobs=resolve_n_jobs(n_jobs))(
            delayed(_bootstrap_replicate)(family, fitted, s.n, method, child) for child in children
        )
        valid = np.array([r for r in results if r is not None], dtype=float)
        n_failed = n_boot - len(valid)
        if n_failed:
            logger.warning(f"{family}: {n_failed} of {n_boot} bootstrap refits failed and were excluded")
        exceed = int(np.count_nonzero(valid >= s_obs))
        p_value = (1.0 + exceed) / (len(valid) + 1.0)
        return GofResult(
            statistic=s_obs,
            p_value=p_value,
            n_bootstrap=n_boot,
            n_failed=n_failed,
            family=family,
            method=method,
            bootstrap_statistics=valid,
        )

    @staticmethod
    def independence_permutation_test(s: PseudoSample, n_perm: Optional[int] = None, seed: SeedLike = None) -> TestResult:
        """
        Permutation test of independence on |Kendall's tau|.

        The v ranks are permuted n_perm times; p = (1 + #{|tau*| >= |tau|}) / (n_perm + 1).
        """
        n_perm = int(n_perm if n_perm is not None else taildep_setting("N_PERMUTATIONS"))
        if n_perm < 1:
            raise ParameterError(f"n_perm must be >= 1, got {n_perm}")
        rng = make_rng(seed if seed is not None else int(taildep_setting("MASTER_SEED")))
        observed = kendall_tau(s)
        exceed = 0
        for _ in range(n_perm):
            permuted = PseudoSample(u=s.u, v=rng.permutation(s.v))
            tau_star = kendall_tau(permuted)
            # ties within 1e-12 count as exceedances
            if abs(tau_star) >= abs(observed) - 1e-12:
                exceed += 1
        p_value = (1.0 + exceed) / (n_perm + 1.0)
        return TestResult(
            statistic=observed,
            p_value=p_value,
            lag=n_perm,
            method=TestMethod.PERMUTATION_TAU,
            extra={"n_obs": s.n},
        )

    @staticmethod
    def rank_copula_fits(rows: Sequence[Dict[str, Any]]) -> List[Dict[str, Any]]:
        """
        Order fits by GoF p value (descending), then AIC, then BIC (ascending).

        Rows with a missing p value sort after rows that have one.
        """

        def key(row):
            p = row.get("gof_p_value")
            p = float("nan") if p is None else float(p)
            missing = not math.isfinite(p)
            return (missing, -p if not missing else 0.0, float(row.get("aic", math.inf)), float(row.get("bic", math.inf)))

        return sorted(rows, key=key)

    @staticmethod
    def tail_agreement(analytic: TailEstimate, empirical: TailEstimate) -> float:
        """Euclidean distance between parametric and empirical (lambda_lower, lambda_upper)."""
        return float(math.hypot(
            analytic.lambda_lower - empirical.lambda_lower,
            analytic.lambda_upper - empirical.lambda_upper,
        ))


def cvm_statistic(s: PseudoSample, m: CopulaModel) -> float:
    return GofService.cvm_statistic(s, m)


def gof_bootstrap_pvalue(family: str, s: PseudoSample, n_boot: Optional[int] = None, **kwargs) -> GofResult:
    return GofService.gof_bootstrap_pvalue(family, s, n_boot=n_boot, **kwargs)


def independence_permutation_test(s: PseudoSample, n_perm: Optional[int] = None, seed: SeedLike = None) -> TestResult:
    return GofService.independence_permutation_test(s, n_perm=n_perm, seed=seed)


def rank_copula_fits(rows: Sequence[Dict[str, Any]]) -> List[Dict[str, Any]]:
    return GofService.rank_copula_fits(rows)


def tail_agreement(analytic: TailEstimate, empirical: TailEstimate) -> float:
    return GofService.tail_agreement(analytic, empirical)
