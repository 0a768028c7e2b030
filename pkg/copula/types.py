"""
Domain types for bivariate copula analysis.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
import pandas as pd

from common.exceptions import DataValidationError, ParameterError

from .constants import CopulaFamily, CopulaLimits, EstimationMethod, TailSource


@dataclass(frozen=True)
class PseudoSample:
    """Paired pseudo-observations (u_t, v_t) in the open unit square."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        v = np.array(self.v, dtype=float)
        if u.ndim != 1 or v.ndim != 1 or len(u) != len(v):
            raise DataValidationError(f"u and v must be 1-d and of equal length, got {u.shape} and {v.shape}")
        if len(u) < 2:
            raise DataValidationError("a pseudo sample needs at least 2 observations")
        for name, values in (("u", u), ("v", v)):
            if not np.all((values > 0.0) & (values < 1.0)):
                raise DataValidationError(f"{name} has values outside (0, 1)", errors={name: "outside (0, 1)"})
            values.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return len(self.u)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"u": self.u, "v": self.v})


@dataclass(frozen=True)
class CopulaModel:
    """
    A parametric copula.

    `theta` holds the dependence parameter: the correlation rho for the
    Gaussian and t families, the generator parameter for Archimedean
    families. `nu` is the t degrees of freedom.
    """

    family: str
    theta: Optional[float] = None
    nu: Optional[float] = None

    def __post_init__(self):
        family = self.family
        if family not in CopulaFamily.values():
            raise ParameterError(f"unknown copula family '{family}'", errors={"family": "unknown"})
        if family == CopulaFamily.INDEPENDENT:
            if self.theta is not None or self.nu is not None:
                raise ParameterError("the independence copula has no parameters")
            return

        if self.theta is None or not math.isfinite(self.theta):
            raise ParameterError(f"{family} copula needs a finite parameter", errors={"theta": "missing"})
        object.__setattr__(self, "theta", float(self.theta))
        theta = self.theta
        errors = {}
        if family in CopulaFamily.ELLIPTICAL and not -1.0 < theta < 1.0:
            errors["theta"] = "rho must be in (-1, 1)"
        elif family == CopulaFamily.CLAYTON and not theta > 0.0:
            errors["theta"] = "must be > 0"
        elif family in (CopulaFamily.GUMBEL, CopulaFamily.JOE) and not theta >= 1.0:
            errors["theta"] = "must be >= 1"
        elif family == CopulaFamily.FRANK and theta == 0.0:
            errors["theta"] = "must be non-zero"

        if family == CopulaFamily.STUDENT_T:
            if self.nu is None or not (math.isfinite(self.nu) and self.nu > 0.0):
                errors["nu"] = "must be > 0"
            else:
                object.__setattr__(self, "nu", float(self.nu))
        elif self.nu is not None:
            errors["nu"] = f"not a parameter of the {family} copula"

        if errors:
            raise ParameterError(f"invalid {family} copula parameters", errors=errors)

    @property
    def rho(self) -> float:
        return self.theta

    @property
    def n_params(self) -> int:
        return CopulaFamily.N_PARAMS[self.family]

    def params(self) -> Dict[str, float]:
        if self.family == CopulaFamily.INDEPENDENT:
            return {}
        if self.family == CopulaFamily.GAUSSIAN:
            return {"rho": self.theta}
        if self.family == CopulaFamily.STUDENT_T:
            return {"rho": self.theta, "nu": self.nu}
        return {"theta": self.theta}

    @property
    def label(self) -> str:
        values = ", ".join(f"{k}={v:.4g}" for k, v in self.params().items())
        return f"{CopulaFamily.get_display(self.family)}({values})"

    @classmethod
    def capped_rho(cls, family: str, rho: float, nu: Optional[float] = None) -> "CopulaModel":
        """Elliptical model with |rho| pulled inside the documented cap."""
        rho = float(np.clip(rho, -CopulaLimits.RHO_MAX, CopulaLimits.RHO_MAX))
        return cls(family=family, theta=rho, nu=nu)


@dataclass(frozen=True)
class TailEstimate:
    """Lower and upper tail-dependence coefficients."""

    lambda_lower: float
    lambda_upper: float
    k: Optional[int] = None
    source: str = TailSource.ANALYTIC

    def __post_init__(self):
        for name in ("lambda_lower", "lambda_upper"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ParameterError(f"{name}={value} must be finite and non-negative")

    def as_dict(self) -> Dict[str, object]:
        return {"lambda_lower": self.lambda_lower, "lambda_upper": self.lambda_upper, "k": self.k, "source": self.source}


@dataclass(frozen=True)
class CopulaFit:
    """One fitted family with its information criteria."""

    model: CopulaModel
    method: str
    loglik: float
    aic: float
    bic: float
    n_obs: int
    sample_tau: float

    @property
    def family(self) -> str:
        return self.model.family

    def as_dict(self) -> Dict[str, object]:
        params = self.model.params()
        return {
            "family": self.family,
            "method": self.method,
            "method_display": EstimationMethod.get_display(self.method),
            "theta": params.get("theta", params.get("rho")),
            "nu": params.get("nu"),
            "loglik": self.loglik,
            "aic": self.aic,
            "bic": self.bic,
            "n_obs": self.n_obs,
            "sample_tau": self.sample_tau,
        }


@dataclass(frozen=True)
class GofResult:
    """Cramer-von Mises statistic with its parametric-bootstrap p value."""

    statistic: float
    p_value: float
    n_bootstrap: int
    n_failed: int = 0
    family: str = ""
    method: str = EstimationMethod.ITAU
    bootstrap_statistics: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False, compare=False)

    def __post_init__(self):
        if self.statistic < 0.0:
            raise ParameterError(f"CvM statistic {self.statistic} must be non-negative")
        if not 0.0 <= self.p_value <= 1.0:
            raise ParameterError(f"p value {self.p_value} outside [0, 1]")

    @property
    def n_valid(self) -> int:
        return self.n_bootstrap - self.n_failed

    def as_dict(self) -> Dict[str, object]:
        return {
            "family": self.family,
            "method": self.method,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "n_bootstrap": self.n_bootstrap,
            "n_failed": self.n_failed,
        }
