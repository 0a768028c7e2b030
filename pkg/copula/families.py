"""
Bivariate copula families.

Each family is a kernel class of static methods taking the model parameter
(theta, plus nu for the t copula):

    cdf(u, v)        C(u, v) = P(U <= u, V <= v)
    logpdf(u, v)     log copula density
    h(u, v)          P(V <= v | U = u) = dC/du
    h_inverse(u, p)  v with h(u, v) = p
    tau              Kendall's tau of the family
    tails            (lambda_lower, lambda_upper)

The module-level functions dispatch on CopulaModel.family, enforce the
margin conditions C(u,0) = C(0,v) = 0, C(u,1) = u, C(1,v) = v exactly and
clip to the Frechet bounds.

Usage:
    from copula.families import copula_cdf, copula_sample

    m = CopulaModel(CopulaFamily.CLAYTON, theta=2.0)
    copula_cdf(m, 0.5, 0.5)   # 7 ** -0.5
"""

import logging
import math
from typing import Callable, Dict, Tuple, Type

import numpy as np
from scipy import integrate, special

from common.exceptions import ParameterError
from common.utils import SeedLike, make_rng

from .bivariate import bvn_cdf, bvt_cdf, t_logpdf
from .constants import CopulaFamily, CopulaLimits, TailSource
from .types import CopulaModel, PseudoSample, TailEstimate

logger = logging.getLogger(__name__)

_LOWER = np.finfo(float).tiny
_UPPER = float(np.nextafter(1.0, 0.0))
_BISECT_ITERATIONS = 64


def _clip_open(x: np.ndarray) -> np.ndarray:
    return np.clip(x, CopulaLimits.UNIT_EPS, 1.0 - CopulaLimits.UNIT_EPS)


def _bisect_h_inverse(h: Callable[[np.ndarray, np.ndarray], np.ndarray], u: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Vectorized bisection for v in (0, 1) with h(u, v) = p; h is increasing in v."""
    lo = np.zeros_like(p)
    hi = np.ones_like(p)
    for _ in range(_BISECT_ITERATIONS):
        mid = 0.5 * (lo + hi)
        below = h(u, _clip_open(mid)) < p
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


# ==============================================================================
# KERNELS
# ==============================================================================

class CopulaKernel:
    """Interface shared by every family kernel"""

    family: str = ""

    @staticmethod
    def cdf(u, v, theta, nu=None):
        raise NotImplementedError

    @staticmethod
    def logpdf(u, v, theta, nu=None):
        raise NotImplementedError

    @staticmethod
    def h(u, v, theta, nu=None):
        raise NotImplementedError

    @classmethod
    def h_inverse(cls, u, p, theta, nu=None):
        return _bisect_h_inverse(lambda a, b: cls.h(a, b, theta, nu), u, p)

    @staticmethod
    def tau(theta, nu=None) -> float:
        raise NotImplementedError

    @staticmethod
    def tails(theta, nu=None) -> Tuple[float, float]:
        return 0.0, 0.0

    @classmethod
    def sample(cls, n: int, theta, nu, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        """Conditional-distribution method: u uniform, v = h^{-1}(u, p)."""
        u = rng.uniform(size=n)
        p = rng.uniform(size=n)
        return u, cls.h_inverse(_clip_open(u), p, theta, nu)


class IndependentKernel(CopulaKernel):
    family = CopulaFamily.INDEPENDENT

    @staticmethod
    def cdf(u, v, theta=None, nu=None):
        return u * v

    @staticmethod
    def logpdf(u, v, theta=None, nu=None):
        return np.zeros(np.broadcast(u, v).shape)

    @staticmethod
    def h(u, v, theta=None, nu=None):
        return np.broadcast_to(v, np.broadcast(u, v).shape).astype(float)

    @classmethod
    def h_inverse(cls, u, p, theta=None, nu=None):
        return np.broadcast_to(p, np.broadcast(u, p).shape).astype(float)

    @staticmethod
    def tau(theta=None, nu=None) -> float:
        return 0.0


class GaussianKernel(CopulaKernel):
    family = CopulaFamily.GAUSSIAN

    @staticmethod
    def cdf(u, v, theta, nu=None):
        return bvn_cdf(special.ndtri(_clip_open(u)), special.ndtri(_clip_open(v)), theta)

    @staticmethod
    def logpdf(u, v, theta, nu=None):
        x = special.ndtri(_clip_open(u))
        y = special.ndtri(_clip_open(v))
        r2 = theta * theta
        return -0.5 * np.log1p(-r2) - (r2 * (x * x + y * y) - 2.0 * theta * x * y) / (2.0 * (1.0 - r2))

    @staticmethod
    def h(u, v, theta, nu=None):
        x = special.ndtri(_clip_open(u))
        y = special.ndtri(_clip_open(v))
        return special.ndtr((y - theta * x) / np.sqrt(1.0 - theta * theta))

    @classmethod
    def h_inverse(cls, u, p, theta, nu=None):
        x = special.ndtri(_clip_open(u))
        return special.ndtr(theta * x + np.sqrt(1.0 - theta * theta) * special.ndtri(_clip_open(p)))

    @staticmethod
    def tau(theta, nu=None) -> float:
        return 2.0 * math.asin(theta) / math.pi

    @classmethod
    def sample(cls, n, theta, nu, rng):
        z = rng.standard_normal(size=(n, 2))
        y = theta * z[:, 0] + math.sqrt(1.0 - theta * theta) * z[:, 1]
        return special.ndtr(z[:, 0]), special.ndtr(y)


class StudentTKernel(CopulaKernel):
    family = CopulaFamily.STUDENT_T

    @staticmethod
    def cdf(u, v, theta, nu=None):
        x = special.stdtrit(nu, _clip_open(u))
        y = special.stdtrit(nu, _clip_open(v))
        return bvt_cdf(x, y, theta, nu)

    @staticmethod
    def logpdf(u, v, theta, nu=None):
        x = special.stdtrit(nu, _clip_open(u))
        y = special.stdtrit(nu, _clip_open(v))
        r2 = theta * theta
        const = (
            special.gammaln((nu + 2.0) / 2.0) + special.gammaln(nu / 2.0)
            - 2.0 * special.gammaln((nu + 1.0) / 2.0) - 0.5 * math.log1p(-r2)
        )
        quad = (x * x - 2.0 * theta * x * y + y * y) / (nu * (1.0 - r2))
        return (
            const
            - (nu + 2.0) / 2.0 * np.log1p(quad)
            + (nu + 1.0) / 2.0 * (np.log1p(x * x / nu) + np.log1p(y * y / nu))
        )

    @staticmethod
    def h(u, v, theta, nu=None):
        x = special.stdtrit(nu, _clip_open(u))
        y = special.stdtrit(nu, _clip_open(v))
        scale = np.sqrt((nu + x * x) * (1.0 - theta * theta) / (nu + 1.0))
        return special.stdtr(nu + 1.0, (y - theta * x) / scale)

    @classmethod
    def h_inverse(cls, u, p, theta, nu=None):
        x = special.stdtrit(nu, _clip_open(u))
        scale = np.sqrt((nu + x * x) * (1.0 - theta * theta) / (nu + 1.0))
        return special.stdtr(nu, theta * x + scale * special.stdtrit(nu + 1.0, _clip_open(p)))

    @staticmethod
    def tau(theta, nu=None) -> float:
        return 2.0 * math.asin(theta) / math.pi

    @staticmethod
    def tails(theta, nu=None) -> Tuple[float, float]:
        lam = 2.0 * float(special.stdtr(nu + 1.0, -math.sqrt((nu + 1.0) * (1.0 - theta) / (1.0 + theta))))
        return lam, lam

    @classmethod
    def sample(cls, n, theta, nu, rng):
        z = rng.standard_normal(size=(n, 2))
        w = np.sqrt(rng.chisquare(nu, size=n) / nu)
        x = z[:, 0] / w
        y = (theta * z[:, 0] + math.sqrt(1.0 - theta * theta) * z[:, 1]) / w
        return special.stdtr(nu, x), special.stdtr(nu, y)


class ClaytonKernel(CopulaKernel):
    """C = (u^-θ + v^-θ - 1)^(-1/θ), θ > 0, evaluated in logs"""

    family = CopulaFamily.CLAYTON

    @staticmethod
    def _log_a(u, v, theta):
        with np.errstate(over="ignore"):
            return np.log(np.expm1(-theta * np.log(u)) + np.expm1(-theta * np.log(v)) + 1.0)

    @staticmethod
    def cdf(u, v, theta, nu=None):
        return np.exp(-ClaytonKernel._log_a(_clip_open(u), _clip_open(v), theta) / theta)

    @staticmethod
    def logpdf(u, v, theta, nu=None):
        u = _clip_open(u)
        v = _clip_open(v)
        log_a = ClaytonKernel._log_a(u, v, theta)
        return math.log1p(theta) - (1.0 + theta) * (np.log(u) + np.log(v)) - (2.0 + 1.0 / theta) * log_a

    @staticmethod
    def h(u, v, theta, nu=None):
        u = _clip_open(u)
        v = _clip_open(v)
        log_a = ClaytonKernel._log_a(u, v, theta)
        return np.exp(-(1.0 + theta) * np.log(u) - (1.0 + 1.0 / theta) * log_a)

    @classmethod
    def h_inverse(cls, u, p, theta, nu=None):
        u = _clip_open(u)
        p = _clip_open(p)
        with np.errstate(over="ignore"):
            inner = np.expm1(-theta / (1.0 + theta) * np.log(p)) * np.exp(-theta * np.log(u))
        return np.exp(-np.log1p(inner) / theta)

    @staticmethod
    def tau(theta, nu=None) -> float:
        return theta / (theta + 2.0)

    @staticmethod
    def tails(theta, nu=None) -> Tuple[float, float]:
        return 2.0 ** (-1.0 / theta), 0.0


class GumbelKernel(CopulaKernel):
    """C = exp(-((-ln u)^θ + (-ln v)^θ)^(1/θ)), θ >= 1"""

    family = CopulaFamily.GUMBEL

    @staticmethod
    def _parts(u, v, theta):
        lu = -np.log(_clip_open(u))
        lv = -np.log(_clip_open(v))
        log_w = np.logaddexp(theta * np.log(lu), theta * np.log(lv)) / theta
        return lu, lv, log_w

    @staticmethod
    def cdf(u, v, theta, nu=None):
        _, _, log_w = GumbelKernel._parts(u, v, theta)
        return np.exp(-np.exp(log_w))

    @staticmethod
    def logpdf(u, v, theta, nu=None):
        lu, lv, log_w = GumbelKernel._parts(u, v, theta)
        w = np.exp(log_w)
        return (
            -w
            + (theta - 1.0) * (np.log(lu) + np.log(lv))
            + lu + lv
            + (1.0 - 2.0 * theta) * log_w
            + np.log(w + theta - 1.0)
        )

    @staticmethod
    def h(u, v, theta, nu=None):
        lu, _, log_w = GumbelKernel._parts(u, v, theta)
        return np.exp(-np.exp(log_w) + (1.0 - theta) * log_w + (theta - 1.0) * np.log(lu) + lu)

    @staticmethod
    def tau(theta, nu=None) -> float:
        return 1.0 - 1.0 / theta

    @staticmethod
    def tails(theta, nu=None) -> Tuple[float, float]:
        return 0.0, 2.0 - 2.0 ** (1.0 / theta)


class FrankKernel(CopulaKernel):
    """C = -(1/θ) ln(1 + (e^-θu - 1)(e^-θv - 1)/(e^-θ - 1)), θ != 0"""

    family = CopulaFamily.FRANK

    @staticmethod
    def cdf(u, v, theta, nu=None):
        eu = np.expm1(-theta * u)
        ev = np.expm1(-theta * v)
        return -np.log1p(eu * ev / math.expm1(-theta)) / theta

    @staticmethod
    def logpdf(u, v, theta, nu=None):
        g = math.expm1(-theta)
        denom = g + np.expm1(-theta * u) * np.expm1(-theta * v)
        return math.log(-theta * g) - theta * (u + v) - 2.0 * np.log(np.abs(denom))

    @staticmethod
    def h(u, v, theta, nu=None):
        eu = np.expm1(-theta * u)
        ev = np.expm1(-theta * v)
        return np.exp(-theta * u) * ev / (math.expm1(-theta) + eu * ev)

    @classmethod
    def h_inverse(cls, u, p, theta, nu=None):
        denom = p + (1.0 - p) * np.exp(-theta * u)
        return -np.log1p(p * math.expm1(-theta) / denom) / theta

    @staticmethod
    def debye(theta: float, order: int) -> float:
        """D_n(θ) = n/θ^n ∫_0^θ t^n / (e^t - 1) dt"""

        def integrand(t):
            return 1.0 if t == 0.0 else t ** order / math.expm1(t)

        value, _ = integrate.quad(integrand, 0.0, theta, epsabs=1e-14, epsrel=1e-13)
        return order * value / theta ** order

    @staticmethod
    def tau(theta, nu=None) -> float:
        if abs(theta) < 1e-4:
            return theta / 9.0 - theta ** 3 / 900.0
        return 1.0 - 4.0 / theta * (1.0 - FrankKernel.debye(theta, 1))


class JoeKernel(CopulaKernel):
    """C = 1 - (ū^θ + v̄^θ - ū^θ v̄^θ)^(1/θ), θ >= 1, ū = 1 - u"""

    family = CopulaFamily.JOE

    @staticmethod
    def _parts(u, v, theta):
        log_ub = np.log1p(-_clip_open(u))
        log_vb = np.log1p(-_clip_open(v))
        ma = -np.expm1(theta * log_ub)
        mb = -np.expm1(theta * log_vb)
        log_s = np.log1p(-ma * mb)
        return log_ub, log_vb, mb, log_s

    @staticmethod
    def cdf(u, v, theta, nu=None):
        _, _, _, log_s = JoeKernel._parts(u, v, theta)
        return -np.expm1(log_s / theta)

    @staticmethod
    def logpdf(u, v, theta, nu=None):
        log_ub, log_vb, _, log_s = JoeKernel._parts(u, v, theta)
        return (1.0 / theta - 2.0) * log_s + (theta - 1.0) * (log_ub + log_vb) + np.log(theta - 1.0 + np.exp(log_s))

    @staticmethod
    def h(u, v, theta, nu=None):
        log_ub, _, mb, log_s = JoeKernel._parts(u, v, theta)
        return np.exp((1.0 / theta - 1.0) * log_s + (theta - 1.0) * log_ub) * mb

    @staticmethod
    def tau(theta, nu=None) -> float:
        if abs(theta - 2.0) < 1e-6:
            return 2.0 - math.pi ** 2 / 6.0
        return 1.0 + 2.0 / (2.0 - theta) * (special.digamma(2.0) - special.digamma(2.0 / theta + 1.0))

    @staticmethod
    def tails(theta, nu=None) -> Tuple[float, float]:
        return 0.0, 2.0 - 2.0 ** (1.0 / theta)


KERNELS: Dict[str, Type[CopulaKernel]] = {
    kernel.family: kernel
    for kernel in (
        IndependentKernel,
        GaussianKernel,
        StudentTKernel,
        ClaytonKernel,
        GumbelKernel,
        FrankKernel,
        JoeKernel,
    )
}


def kernel_for(m: CopulaModel) -> Type[CopulaKernel]:
    return KERNELS[m.family]


# ==============================================================================
# OPERATIONS
# ==============================================================================

def _as_pair(u, v) -> Tuple[np.ndarray, np.ndarray, bool]:
    u_arr, v_arr = np.broadcast_arrays(np.atleast_1d(np.asarray(u, dtype=float)), np.atleast_1d(np.asarray(v, dtype=float)))
    scalar = np.ndim(u) == 0 and np.ndim(v) == 0
    return u_arr, v_arr, scalar


def _finish(values: np.ndarray, scalar: bool):
    return float(values[0]) if scalar else values


def copula_cdf(m: CopulaModel, u, v):
    """C(u, v) with the margin conditions enforced exactly."""
    u, v, scalar = _as_pair(u, v)
    kernel = kernel_for(m)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.asarray(kernel.cdf(u, v, m.theta, m.nu), dtype=float)
    out = np.clip(out, np.maximum(u + v - 1.0, 0.0), np.minimum(u, v))
    out = np.where(v >= 1.0, u, out)
    out = np.where(u >= 1.0, v, out)
    out = np.where((u <= 0.0) | (v <= 0.0), 0.0, out)
    return _finish(out, scalar)


def copula_logpdf(m: CopulaModel, u, v):
    u, v, scalar = _as_pair(u, v)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.asarray(kernel_for(m).logpdf(u, v, m.theta, m.nu), dtype=float)
    return _finish(out, scalar)


def copula_pdf(m: CopulaModel, u, v):
    """Copula density c(u, v) >= 0."""
    u, v, scalar = _as_pair(u, v)
    return _finish(np.exp(np.asarray(copula_logpdf(m, u, v))), scalar)


def copula_h(m: CopulaModel, u, v):
    """Conditional CDF P(V <= v | U = u)."""
    u, v, scalar = _as_pair(u, v)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.clip(np.asarray(kernel_for(m).h(u, v, m.theta, m.nu), dtype=float), 0.0, 1.0)
    out = np.where(v <= 0.0, 0.0, np.where(v >= 1.0, 1.0, out))
    return _finish(out, scalar)


def copula_h_inverse(m: CopulaModel, u, p):
    """v such that P(V <= v | U = u) = p."""
    u, p, scalar = _as_pair(u, p)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.asarray(kernel_for(m).h_inverse(u, p, m.theta, m.nu), dtype=float)
    return _finish(np.clip(out, 0.0, 1.0), scalar)


def survival_copula_cdf(m: CopulaModel, u, v):
    """Survival copula: u + v - 1 + C(1 - u, 1 - v)."""
    u, v, scalar = _as_pair(u, v)
    out = u + v - 1.0 + np.asarray(copula_cdf(m, 1.0 - u, 1.0 - v))
    return _finish(np.clip(out, 0.0, 1.0), scalar)


def copula_sample(m: CopulaModel, n: int, seed: SeedLike = None) -> PseudoSample:
    """
    Draw n pairs with uniform margins.

    Elliptical families use the correlation transform; Archimedean families
    use the conditional-distribution method. Draws are clipped into the
    open unit square.
    """
    if n < 2:
        raise ParameterError(f"need at least 2 draws, got {n}")
    rng = make_rng(seed)
    u, v = kernel_for(m).sample(int(n), m.theta, m.nu, rng)
    return PseudoSample(u=np.clip(u, _LOWER, _UPPER), v=np.clip(v, _LOWER, _UPPER))


def copula_tau(m: CopulaModel) -> float:
    """Kendall's tau implied by the model."""
    return float(kernel_for(m).tau(m.theta, m.nu))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


def copula_spearman(m: CopulaModel) -> float:
    """Spearman's rho implied by the model: 12 ∫∫ C(u,v) du dv - 3."""
    if m.family == CopulaFamily.INDEPENDENT:
        return 0.0
    if m.family == CopulaFamily.GAUSSIAN:
        return 6.0 / math.pi * math.asin(m.theta / 2.0)
    if m.family == CopulaFamily.FRANK:
        theta = m.theta
        return 1.0 - 12.0 / theta * (FrankKernel.debye(theta, 1) - FrankKernel.debye(theta, 2))
    nodes = 0.5 * (_GL_NODES + 1.0)
    weights = 0.5 * _GL_WEIGHTS
    uu, vv = np.meshgrid(nodes, nodes, indexing="ij")
    values = np.asarray(copula_cdf(m, uu.ravel(), vv.ravel())).reshape(uu.shape)
    return float(12.0 * weights @ values @ weights - 3.0)


def tail_coeffs_analytic(m: CopulaModel) -> TailEstimate:
    """Closed-form (lambda_lower, lambda_upper) at the model parameters."""
    lower, upper = kernel_for(m).tails(m.theta, m.nu)
    return TailEstimate(lambda_lower=float(lower), lambda_upper=float(upper), k=None, source=TailSource.ANALYTIC)


def copula_loglik_values(m: CopulaModel, s: PseudoSample) -> np.ndarray:
    """Pointwise log densities at the sample."""
    return np.asarray(copula_logpdf(m, s.u, s.v), dtype=float)
