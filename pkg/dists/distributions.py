"""
Standardized innovation distributions for ARMA-GARCH models.

Every family has mean 0 and variance 1. Distribution objects are frozen
dataclasses: construct once, share freely. Sampling always takes an
explicit seed or Generator.

Families:
    Normal                       standard normal
    StudentT(nu)                 t_nu rescaled to unit variance, nu > 2
    GED(shape)                   generalized error distribution, shape > 0
    SGHYD(shape, skew, index)    standardized generalized hyperbolic

SGHYD convention (shape, skew) -> classical GH (lambda, alpha, beta, delta, mu):
    lambda = index (fixed, not estimated)
    zeta   = delta * sqrt(alpha^2 - beta^2) = exp(shape)
    beta/alpha = tanh(skew)
    delta and mu solve variance = 1 and mean = 0 in closed form.

Usage:
    from dists.distributions import StudentT, cdf, quantile

    d = StudentT(nu=3.3629)
    quantile(d, 0.5)  # 0.0
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import ClassVar, Dict, List, Sequence, Tuple, Type

import numpy as np
from scipy import integrate, optimize, stats

from common.exceptions import EvaluationError, ParameterError, StandardizationError
from common.utils import SeedLike, make_rng, taildep_setting

from .constants import DistributionFamily, DistributionLimits
from .special import bessel_k_ratio, ln_gamma, log_bessel_k

logger = logging.getLogger(__name__)

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class InnovationDist(ABC):
    """Base class for unit-variance innovation laws."""

    family: ClassVar[str]
    param_names: ClassVar[Tuple[str, ...]] = ()

    @abstractmethod
    def logpdf(self, x) -> np.ndarray:
        ...

    @abstractmethod
    def cdf(self, x) -> np.ndarray:
        ...

    @abstractmethod
    def ppf(self, p) -> np.ndarray:
        ...

    @abstractmethod
    def rvs(self, n: int, rng: np.random.Generator) -> np.ndarray:
        ...

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.logpdf(x))

    # ----- estimation helpers -------------------------------------------------

    @property
    def n_params(self) -> int:
        return len(self.param_names)

    def params(self) -> Dict[str, float]:
        return {name: float(getattr(self, name)) for name in self.param_names}

    def param_vector(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in self.param_names], dtype=float)

    @classmethod
    def bounds(cls) -> List[Tuple[float, float]]:
        return []

    @classmethod
    def start_values(cls) -> Tuple[float, ...]:
        return ()

    @classmethod
    def from_vector(cls, values: Sequence[float], **fixed) -> "InnovationDist":
        kwargs = dict(zip(cls.param_names, (float(v) for v in values)))
        kwargs.update(fixed)
        return cls(**kwargs)

    def fixed_params(self) -> Dict[str, float]:
        """Parameters held fixed during estimation."""
        return {}

    @property
    def label(self) -> str:
        if not self.param_names:
            return self.family
        inner = ", ".join(f"{k}={v:.4g}" for k, v in self.params().items())
        return f"{self.family}({inner})"


# ==============================================================================
# NORMAL
# ==============================================================================

@dataclass(frozen=True)
class Normal(InnovationDist):
    family: ClassVar[str] = DistributionFamily.NORMAL

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        return -_LOG_SQRT_2PI - 0.5 * x * x

    def cdf(self, x):
        return stats.norm.cdf(x)

    def ppf(self, p):
        return stats.norm.ppf(p)

    def rvs(self, n, rng):
        return rng.standard_normal(n)


# ==============================================================================
# STUDENT T
# ==============================================================================

@dataclass(frozen=True)
class StudentT(InnovationDist):
    """t_nu scaled by sqrt((nu-2)/nu) so the variance is 1."""

    nu: float
    family: ClassVar[str] = DistributionFamily.STUDENT_T
    param_names: ClassVar[Tuple[str, ...]] = ("nu",)

    def __post_init__(self):
        if not (math.isfinite(self.nu) and self.nu > 2.0):
            raise ParameterError(f"Student t requires nu > 2, got {self.nu}", errors={"nu": "must exceed 2"})

    @cached_property
    def _scale(self) -> float:
        # multiply a unit-variance value by this to get a t_nu value
        return math.sqrt(self.nu / (self.nu - 2.0))

    @cached_property
    def _log_norm(self) -> float:
        nu = self.nu
        return (
            ln_gamma(0.5 * (nu + 1.0))
            - ln_gamma(0.5 * nu)
            - 0.5 * math.log(math.pi * (nu - 2.0))
        )

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        nu = self.nu
        return self._log_norm - 0.5 * (nu + 1.0) * np.log1p(x * x / (nu - 2.0))

    def cdf(self, x):
        return stats.t.cdf(np.asarray(x, dtype=float) * self._scale, self.nu)

    def ppf(self, p):
        return stats.t.ppf(p, self.nu) / self._scale

    def rvs(self, n, rng):
        return rng.standard_t(self.nu, size=n) / self._scale

    @classmethod
    def bounds(cls):
        return [DistributionLimits.STUDENT_T_NU]

    @classmethod
    def start_values(cls):
        return (8.0,)


# ==============================================================================
# GED
# ==============================================================================

@dataclass(frozen=True)
class GED(InnovationDist):
    """
    Generalized error distribution with unit variance.

    Uses scipy's gennorm (density proportional to exp(-|x/s|^shape)) with
    s = sqrt(Γ(1/shape) / Γ(3/shape)). shape=2 is the standard normal.
    """

    shape: float
    family: ClassVar[str] = DistributionFamily.GED
    param_names: ClassVar[Tuple[str, ...]] = ("shape",)

    def __post_init__(self):
        if not (math.isfinite(self.shape) and self.shape > 0.0):
            raise ParameterError(f"GED requires shape > 0, got {self.shape}", errors={"shape": "must be positive"})

    @cached_property
    def _scale(self) -> float:
        return math.exp(0.5 * (ln_gamma(1.0 / self.shape) - ln_gamma(3.0 / self.shape)))

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        b, s = self.shape, self._scale
        return math.log(b) - math.log(2.0 * s) - ln_gamma(1.0 / b) - np.abs(x / s) ** b

    def cdf(self, x):
        return stats.gennorm.cdf(x, self.shape, scale=self._scale)

    def ppf(self, p):
        return stats.gennorm.ppf(p, self.shape, scale=self._scale)

    def rvs(self, n, rng):
        return stats.gennorm.rvs(self.shape, scale=self._scale, size=n, random_state=rng)

    @classmethod
    def bounds(cls):
        return [DistributionLimits.GED_SHAPE]

    @classmethod
    def start_values(cls):
        return (1.5,)


# ==============================================================================
# GENERALIZED HYPERBOLIC
# ==============================================================================

@dataclass(frozen=True)
class GHParams:
    """Classical generalized hyperbolic parameters (lambda, alpha, beta, delta, mu)."""

    lam: float
    alpha: float
    beta: float
    delta: float
    mu: float

    def __post_init__(self):
        if not (self.delta > 0.0):
            raise ParameterError(f"GH requires delta > 0, got {self.delta}")
        if not (self.alpha > abs(self.beta)):
            raise ParameterError(f"GH requires alpha > |beta|, got alpha={self.alpha}, beta={self.beta}")

    @property
    def gamma(self) -> float:
        return math.sqrt(self.alpha * self.alpha - self.beta * self.beta)

    @property
    def zeta(self) -> float:
        return self.delta * self.gamma

    def mean(self) -> float:
        r = bessel_k_ratio(self.lam, 1.0, self.zeta)
        return self.mu + self.beta * self.delta * r / self.gamma

    def variance(self) -> float:
        z = self.zeta
        r1 = bessel_k_ratio(self.lam, 1.0, z)
        r2 = bessel_k_ratio(self.lam, 2.0, z)
        mixing_mean = self.delta * r1 / self.gamma
        mixing_var = (self.delta / self.gamma) ** 2 * (r2 - r1 * r1)
        return mixing_mean + self.beta * self.beta * mixing_var

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        lam, a, b, dl, mu = self.lam, self.alpha, self.beta, self.delta, self.mu
        g = self.gamma
        dx = x - mu
        q = np.sqrt(dl * dl + dx * dx)
        return (
            lam * math.log(g / dl)
            - _LOG_SQRT_2PI
            - log_bessel_k(lam, dl * g)
            + b * dx
            + log_bessel_k(lam - 0.5, a * q)
            - (0.5 - lam) * np.log(q / a)
        )


def standardize_gh(shape: float, skew: float, index: float = None) -> GHParams:
    """
    Map (shape, skew) to GH parameters with mean 0 and variance 1.

    Args:
        shape: log of zeta = delta*sqrt(alpha^2 - beta^2); any real
        skew: beta/alpha = tanh(skew); any real, 0 is symmetric
        index: GH lambda, defaults to TAILDEP['SGHYD_INDEX']

    Returns:
        GHParams with analytic mean 0 and variance 1

    Raises:
        StandardizationError: If the moment equations have no finite solution
    """
    if index is None:
        index = float(taildep_setting("SGHYD_INDEX"))
    if not all(math.isfinite(v) for v in (shape, skew, index)):
        raise StandardizationError(f"non-finite GH input shape={shape}, skew={skew}, index={index}")

    try:
        zeta = math.exp(shape)
        r1 = bessel_k_ratio(index, 1.0, zeta)
        r2 = bessel_k_ratio(index, 2.0, zeta)
        sinh_skew = math.sinh(skew)
        cosh_skew = math.cosh(skew)
    except (OverflowError, ValueError) as exc:
        raise StandardizationError(f"GH standardization overflow at shape={shape}, skew={skew}") from exc

    # variance / delta^2, with beta/gamma = sinh(skew)
    var_factor = r1 / zeta + sinh_skew * sinh_skew * (r2 - r1 * r1)
    if not (math.isfinite(var_factor) and var_factor > 0.0):
        raise StandardizationError(
            f"GH standardization has no solution at shape={shape}, skew={skew}",
            errors={"variance_factor": var_factor},
        )

    delta = 1.0 / math.sqrt(var_factor)
    gamma = zeta / delta
    alpha = gamma * cosh_skew
    beta = gamma * sinh_skew
    mu = -beta * delta * delta * r1 / zeta
    return GHParams(lam=float(index), alpha=alpha, beta=beta, delta=delta, mu=mu)


@dataclass(frozen=True)
class SGHYD(InnovationDist):
    """Standardized generalized hyperbolic distribution (see module docstring)."""

    shape: float
    skew: float
    index: float = field(default_factory=lambda: float(taildep_setting("SGHYD_INDEX")))
    family: ClassVar[str] = DistributionFamily.SGHYD
    param_names: ClassVar[Tuple[str, ...]] = ("shape", "skew")

    def __post_init__(self):
        if not (math.isfinite(self.shape) and math.isfinite(self.skew)):
            raise ParameterError(f"SGHYD requires finite shape and skew, got {self.shape}, {self.skew}")

    @cached_property
    def gh(self) -> GHParams:
        return standardize_gh(self.shape, self.skew, self.index)

    def fixed_params(self):
        return {"index": self.index}

    def logpdf(self, x):
        return self.gh.logpdf(x)

    @cached_property
    def _mode(self) -> float:
        result = optimize.minimize_scalar(lambda t: -float(self.logpdf(t)), bracket=(-1.0, 0.0, 1.0))
        return float(result.x)

    def _integrate(self, a: float, b: float) -> float:
        value, _ = integrate.quad(lambda t: float(self.pdf(t)), a, b, epsabs=1e-13, epsrel=1e-12, limit=200)
        return value

    @cached_property
    def _cdf_at_mode(self) -> float:
        return self._integrate(-np.inf, self._mode)

    def cdf(self, x):
        """
        CDF by adaptive quadrature from the mode.

        Points are visited in order moving away from the mode so each
        quadrature covers only the gap to the previous point.
        """
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        out = np.full_like(flat, np.nan)
        mode, f_mode = self._mode, self._cdf_at_mode

        out[np.isneginf(flat)] = 0.0
        out[np.isposinf(flat)] = 1.0

        finite = np.isfinite(flat)
        above = np.flatnonzero(finite & (flat >= mode))
        below = np.flatnonzero(finite & (flat < mode))

        acc, prev = f_mode, mode
        for i in above[np.argsort(flat[above], kind="stable")]:
            acc += self._integrate(prev, flat[i])
            prev = flat[i]
            out[i] = acc

        acc, prev = f_mode, mode
        for i in below[np.argsort(-flat[below], kind="stable")]:
            acc -= self._integrate(flat[i], prev)
            prev = flat[i]
            out[i] = acc

        out = np.clip(out, 0.0, 1.0).reshape(x.shape)
        return float(out) if out.ndim == 0 else out

    def ppf(self, p):
        """Quantile by bracketed root finding on the CDF."""
        p = np.asarray(p, dtype=float)
        out = np.array([self._ppf_scalar(float(pi)) for pi in p.ravel()]).reshape(p.shape)
        return float(out) if out.ndim == 0 else out

    def _ppf_scalar(self, p: float) -> float:
        if p <= 0.0:
            return -np.inf
        if p >= 1.0:
            return np.inf

        def gap(t):
            return float(self.cdf(t)) - p

        lo, hi = self._mode - 1.0, self._mode + 1.0
        while gap(lo) > 0.0:
            lo = self._mode - 2.0 * (self._mode - lo)
            if lo < -DistributionLimits.QUANTILE_MAX_BRACKET:
                raise EvaluationError(f"{self.label}: quantile at p={p!r} lies below {-DistributionLimits.QUANTILE_MAX_BRACKET:g}")
        while gap(hi) < 0.0:
            hi = self._mode + 2.0 * (hi - self._mode)
            if hi > DistributionLimits.QUANTILE_MAX_BRACKET:
                raise EvaluationError(f"{self.label}: quantile at p={p!r} lies above {DistributionLimits.QUANTILE_MAX_BRACKET:g}")
        return optimize.brentq(gap, lo, hi, xtol=DistributionLimits.QUANTILE_XTOL, rtol=4 * np.finfo(float).eps)

    def rvs(self, n, rng):
        """Normal variance-mean mixture with a GIG mixing variable."""
        gh = self.gh
        mixing = stats.geninvgauss.rvs(gh.lam, gh.zeta, size=n, random_state=rng) * (gh.delta / gh.gamma)
        normals = rng.standard_normal(n)
        return gh.mu + gh.beta * mixing + np.sqrt(mixing) * normals

    @classmethod
    def bounds(cls):
        return [DistributionLimits.SGHYD_SHAPE, DistributionLimits.SGHYD_SKEW]

    @classmethod
    def start_values(cls):
        return (0.0, 0.0)


# ==============================================================================
# REGISTRY AND MODULE-LEVEL OPERATIONS
# ==============================================================================

DISTRIBUTIONS: Dict[str, Type[InnovationDist]] = {
    DistributionFamily.NORMAL: Normal,
    DistributionFamily.STUDENT_T: StudentT,
    DistributionFamily.GED: GED,
    DistributionFamily.SGHYD: SGHYD,
}


def distribution_class(family: str) -> Type[InnovationDist]:
    try:
        return DISTRIBUTIONS[family]
    except KeyError:
        raise ParameterError(
            f"Unknown distribution family '{family}'",
            errors={"family": f"expected one of {DistributionFamily.values()}"},
        ) from None


def make_distribution(family: str, params: Dict[str, float] = None) -> InnovationDist:
    """
    Build a distribution from its family tag and parameter dict.

    Example:
        make_distribution("std", {"nu": 5.0})
    """
    return distribution_class(family)(**(params or {}))


def logpdf(d: InnovationDist, x):
    return d.logpdf(x)


def pdf(d: InnovationDist, x):
    return d.pdf(x)


def cdf(d: InnovationDist, x):
    return d.cdf(x)


def quantile(d: InnovationDist, p):
    arr = np.asarray(p, dtype=float)
    if np.any((arr <= 0.0) | (arr >= 1.0)):
        raise ParameterError(f"quantile requires p in (0, 1), got {p!r}")
    return d.ppf(p)


def sample(d: InnovationDist, n: int, seed: SeedLike = None) -> np.ndarray:
    """Draw n innovations; identical seeds give identical draws."""
    if n < 0:
        raise ParameterError(f"sample size must be non-negative, got {n}")
    return np.asarray(d.rvs(int(n), make_rng(seed)), dtype=float)
