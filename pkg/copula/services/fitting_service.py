"""
Copula Fitting Service - inverse-tau and maximum pseudo-likelihood estimation.

Inverse tau:
    Gaussian, t   rho = sin(pi tau / 2)   (t: nu by profile likelihood)
    Clayton       theta = 2 tau / (1 - tau)
    Gumbel        theta = 1 / (1 - tau)
    Frank, Joe    bracketed root of tau(theta) = tau_hat

Maximum likelihood uses bounded scalar minimization for one-parameter
families and L-BFGS-B from documented starts for the t copula.

Usage:
    from copula.services import fit_copula

    fit = fit_copula(CopulaFamily.GUMBEL, sample, method=EstimationMethod.ITAU)
    fit.model.theta, fit.aic
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy import optimize

from common.exceptions import EvaluationError, InfeasibleFitError, ParameterError

from ..constants import CopulaFamily, CopulaLimits, EstimationMethod
from ..empirical import kendall_tau
from ..families import FrankKernel, JoeKernel, copula_loglik_values
from ..types import CopulaFit, CopulaModel, PseudoSample

logger = logging.getLogger(__name__)

# Large finite value returned for infeasible parameters during optimization
_PENALTY = 1e12

# (rho start scale, nu start) pairs for the t copula likelihood
T_COPULA_STARTS = ((1.0, 4.0), (1.0, 15.0))


class CopulaFittingService:
    """Service for copula parameter estimation"""

    # ==== Likelihood ====

    @staticmethod
    def loglik(m: CopulaModel, s: PseudoSample) -> float:
        """
        Σ ln c(u_t, v_t).

        Raises:
            EvaluationError: Non-finite log density at some sample point
        """
        values = copula_loglik_values(m, s)
        total = float(np.sum(values))
        if not math.isfinite(total):
            raise EvaluationError(f"non-finite copula log-likelihood for {m.label}")
        return total

    @staticmethod
    def aic_bic(m: CopulaModel, s: PseudoSample, loglik: Optional[float] = None) -> Tuple[float, float]:
        """(2k - 2 ln L, k ln T - 2 ln L) with k = 0, 1 or 2 per family."""
        ll = CopulaFittingService.loglik(m, s) if loglik is None else loglik
        k = m.n_params
        return 2.0 * k - 2.0 * ll, k * math.log(s.n) - 2.0 * ll

    @staticmethod
    def _negloglik(family: str, s: PseudoSample, theta: float, nu: Optional[float] = None) -> float:
        if family == CopulaFamily.FRANK and abs(theta) < CopulaLimits.FRANK_ZERO:
            return 0.0
        try:
            model = CopulaModel(family=family, theta=theta, nu=nu)
            value = -float(np.sum(copula_loglik_values(model, s)))
        except ParameterError:
            return _PENALTY
        return value if math.isfinite(value) else _PENALTY

    # ==== Inverse tau ====

    @staticmethod
    def _root(tau_fn, tau_hat: float, lo: float, hi: float, family: str) -> float:
        f_lo = tau_fn(lo) - tau_hat
        f_hi = tau_fn(hi) - tau_hat
        if f_lo * f_hi > 0.0:
            raise InfeasibleFitError(
                f"tau={tau_hat:.6f} outside the range of the {family} copula on theta in [{lo}, {hi}]",
                errors={"tau": tau_hat, "family": family},
            )
        return float(optimize.brentq(lambda t: tau_fn(t) - tau_hat, lo, hi, xtol=CopulaLimits.TAU_XTOL, rtol=4 * np.finfo(float).eps))

    @staticmethod
    def _infeasible(family: str, tau_hat: float, reason: str) -> InfeasibleFitError:
        return InfeasibleFitError(
            f"{CopulaFamily.get_display(family)} copula cannot represent tau={tau_hat:.6f}: {reason}",
            errors={"tau": tau_hat, "family": family},
        )

    @staticmethod
    def _cap(family: str, theta: float, bounds: Tuple[float, float]) -> float:
        if theta > bounds[1]:
            logger.warning(f"{family}: theta={theta:.4g} capped at {bounds[1]}")
            return bounds[1]
        return theta

    @staticmethod
    def fit_inverse_tau(family: str, s: PseudoSample, tau_hat: Optional[float] = None) -> CopulaModel:
        """
        Invert the family's Kendall-tau relation at the sample tau.

        Raises:
            InfeasibleFitError: tau_hat outside the family's attainable range
        """
        if family not in CopulaFamily.values():
            raise ParameterError(f"unknown copula family '{family}'")
        if family == CopulaFamily.INDEPENDENT:
            return CopulaModel(family)
        tau = kendall_tau(s) if tau_hat is None else float(tau_hat)

        if family in CopulaFamily.ELLIPTICAL:
            rho = math.sin(math.pi * tau / 2.0)
            if family == CopulaFamily.GAUSSIAN:
                return CopulaModel.capped_rho(family, rho)
            rho = float(np.clip(rho, -CopulaLimits.RHO_MAX, CopulaLimits.RHO_MAX))
            res = optimize.minimize_scalar(
                lambda nu: CopulaFittingService._negloglik(family, s, rho, nu),
                bounds=CopulaLimits.T_NU,
                method="bounded",
                options={"xatol": 1e-6},
            )
            return CopulaModel(family, theta=rho, nu=float(res.x))

        if family == CopulaFamily.CLAYTON:
            if tau <= 0.0:
                raise CopulaFittingService._infeasible(family, tau, "requires tau > 0")
            if tau >= 1.0:
                raise CopulaFittingService._infeasible(family, tau, "requires tau < 1")
            theta = CopulaFittingService._cap(family, 2.0 * tau / (1.0 - tau), CopulaLimits.CLAYTON_THETA)
            return CopulaModel(family, theta=theta)

        if family == CopulaFamily.GUMBEL:
            if tau < 0.0:
                raise CopulaFittingService._infeasible(family, tau, "requires tau >= 0")
            if tau >= 1.0:
                raise CopulaFittingService._infeasible(family, tau, "requires tau < 1")
            theta = CopulaFittingService._cap(family, 1.0 / (1.0 - tau), CopulaLimits.GUMBEL_THETA)
            return CopulaModel(family, theta=theta)

        if family == CopulaFamily.FRANK:
            if tau == 0.0:
                raise CopulaFittingService._infeasible(family, tau, "theta = 0 is excluded")
            lo, hi = (CopulaLimits.FRANK_ZERO, CopulaLimits.FRANK_THETA[1]) if tau > 0 else (CopulaLimits.FRANK_THETA[0], -CopulaLimits.FRANK_ZERO)
            theta = CopulaFittingService._root(FrankKernel.tau, tau, lo, hi, family)
            return CopulaModel(family, theta=theta)

        # Joe
        if tau < 0.0:
            raise CopulaFittingService._infeasible(family, tau, "requires tau >= 0")
        if tau == 0.0:
            return CopulaModel(family, theta=1.0)
        theta = CopulaFittingService._root(JoeKernel.tau, tau, *CopulaLimits.JOE_THETA, family)
        return CopulaModel(family, theta=theta)

    # ==== Maximum likelihood ====

    @staticmethod
    def _scalar_bounds(family: str) -> Tuple[float, float]:
        return {
            CopulaFamily.GAUSSIAN: (-CopulaLimits.RHO_MAX, CopulaLimits.RHO_MAX),
            CopulaFamily.CLAYTON: CopulaLimits.CLAYTON_THETA,
            CopulaFamily.GUMBEL: CopulaLimits.GUMBEL_THETA,
            CopulaFamily.FRANK: CopulaLimits.FRANK_THETA,
            CopulaFamily.JOE: CopulaLimits.JOE_THETA,
        }[family]

    @staticmethod
    def fit_mle(family: str, s: PseudoSample) -> CopulaModel:
        """
        Maximize Σ ln c(u_t, v_t) over the family's parameter box.

        Gaussian rho is capped at |rho| <= 1 - 1e-6 so comonotone ranks give
        a boundary estimate instead of an error.
        """
        if family not in CopulaFamily.values():
            raise ParameterError(f"unknown copula family '{family}'")
        if family == CopulaFamily.INDEPENDENT:
            return CopulaModel(family)

        if family == CopulaFamily.STUDENT_T:
            rho0 = math.sin(math.pi * kendall_tau(s) / 2.0)
            best = None
            bounds = [(-CopulaLimits.RHO_MAX, CopulaLimits.RHO_MAX), CopulaLimits.T_NU]
            for scale, nu0 in T_COPULA_STARTS:
                x0 = np.array([np.clip(scale * rho0, -0.99, 0.99), nu0])
                res = optimize.minimize(
                    lambda p: CopulaFittingService._negloglik(family, s, p[0], p[1]),
                    x0,
                    method="L-BFGS-B",
                    bounds=bounds,
                )
                if best is None or res.fun < best.fun:
                    best = res
            if best.fun >= _PENALTY:
                raise InfeasibleFitError("t copula likelihood is not finite at any start", errors={"family": family})
            return CopulaModel(family, theta=float(best.x[0]), nu=float(best.x[1]))

        lo, hi = CopulaFittingService._scalar_bounds(family)
        res = optimize.minimize_scalar(
            lambda t: CopulaFittingService._negloglik(family, s, t),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-10},
        )
        theta = float(res.x)
        if res.fun >= _PENALTY:
            raise InfeasibleFitError(f"{family} copula likelihood is not finite on its domain", errors={"family": family})
        if family == CopulaFamily.FRANK and abs(theta) < CopulaLimits.FRANK_ZERO:
            theta = math.copysign(CopulaLimits.FRANK_ZERO, theta if theta != 0.0 else 1.0)
        return CopulaModel(family, theta=theta)

    # ==== Combined ====

    @staticmethod
    def fit(family: str, s: PseudoSample, method: str = EstimationMethod.ITAU) -> CopulaFit:
        """Fit one family by the chosen estimator and score it."""
        if method == EstimationMethod.ITAU:
            model = CopulaFittingService.fit_inverse_tau(family, s)
        elif method == EstimationMethod.MLE:
            model = CopulaFittingService.fit_mle(family, s)
        else:
            raise ParameterError(f"unknown estimation method '{method}'", errors={"method": method})
        ll = CopulaFittingService.loglik(model, s)
        aic, bic = CopulaFittingService.aic_bic(model, s, loglik=ll)
        logger.debug(f"{model.label} by {method}: loglik={ll:.4f}, aic={aic:.4f}")
        return CopulaFit(model=model, method=method, loglik=ll, aic=aic, bic=bic, n_obs=s.n, sample_tau=kendall_tau(s))


def fit_inverse_tau(family: str, s: PseudoSample) -> CopulaModel:
    return CopulaFittingService.fit_inverse_tau(family, s)


def fit_mle(family: str, s: PseudoSample) -> CopulaModel:
    return CopulaFittingService.fit_mle(family, s)


def fit_copula(family: str, s: PseudoSample, method: str = EstimationMethod.ITAU) -> CopulaFit:
    return CopulaFittingService.fit(family, s, method=method)


def copula_loglik(m: CopulaModel, s: PseudoSample) -> float:
    return CopulaFittingService.loglik(m, s)


def copula_aic_bic(m: CopulaModel, s: PseudoSample) -> Tuple[float, float]:
    return CopulaFittingService.aic_bic(m, s)
