"""
Bivariate normal and Student t distribution functions.

bvn_cdf uses Owen's T function:

    Phi2(h, k; rho) = (Phi(h) + Phi(k)) / 2 - T(h, a_h) - T(k, a_k) - beta
    a_h = (k - rho h) / (h sqrt(1 - rho^2)),  a_k = (h - rho k) / (k sqrt(1 - rho^2))
    beta = 1/2 when h and k have opposite signs, else 0

scipy's owens_t is accurate to double precision, so the absolute error is
well below 1e-10. bvt_cdf integrates the conditional t representation

    T2(h, k; rho, nu) = ∫_{-inf}^{h} t_nu(s) T_{nu+1}((k - rho s) c(s)) ds,
    c(s) = sqrt((nu + 1) / ((nu + s^2)(1 - rho^2)))

with adaptive vector quadrature.
"""

import numpy as np
from scipy import integrate, special

from common.exceptions import ParameterError

# Exact zeros are nudged to this value; Phi2 is continuous so the error is O(_TINY).
_TINY = 1e-300
# Owen's T at |a| > 1e15 equals its a -> inf limit to double precision
_A_MAX = 1e15

BVT_EPSABS = 1e-12
BVT_EPSREL = 1e-10


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not -1.0 < rho < 1.0:
        raise ParameterError(f"correlation {rho} must be in (-1, 1)")
    return rho


def _nudge_zero(x: np.ndarray) -> np.ndarray:
    return np.where(x == 0.0, _TINY, x)


def bvn_cdf(x, y, rho: float) -> np.ndarray:
    """P(X <= x, Y <= y) for standard bivariate normal with correlation rho."""
    rho = _check_rho(rho)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    out = np.empty(x.shape, dtype=float)

    finite = np.isfinite(x) & np.isfinite(y)
    xi, yi = x[~finite], y[~finite]
    out[~finite] = np.where(
        np.isneginf(xi) | np.isneginf(yi),
        0.0,
        np.where(np.isposinf(xi), special.ndtr(yi), special.ndtr(xi)),
    )

    h = _nudge_zero(x[finite])
    k = _nudge_zero(y[finite])
    root = np.sqrt(1.0 - rho * rho)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a_h = np.clip((k - rho * h) / (h * root), -_A_MAX, _A_MAX)
        a_k = np.clip((h - rho * k) / (k * root), -_A_MAX, _A_MAX)
    beta = np.where(np.sign(h) * np.sign(k) < 0.0, 0.5, 0.0)
    value = 0.5 * (special.ndtr(h) + special.ndtr(k)) - special.owens_t(h, a_h) - special.owens_t(k, a_k) - beta
    out[finite] = np.clip(value, 0.0, 1.0)
    return out


def t_logpdf(s, nu: float) -> np.ndarray:
    """Log density of the (non-standardized) Student t with nu degrees of freedom."""
    s = np.asarray(s, dtype=float)
    const = special.gammaln((nu + 1.0) / 2.0) - special.gammaln(nu / 2.0) - 0.5 * np.log(nu * np.pi)
    return const - (nu + 1.0) / 2.0 * np.log1p(s * s / nu)


def bvt_cdf(x, y, rho: float, nu: float) -> np.ndarray:
    """P(X <= x, Y <= y) for the standard bivariate t with correlation rho."""
    rho = _check_rho(rho)
    nu = float(nu)
    if not nu > 0.0:
        raise ParameterError(f"degrees of freedom {nu} must be > 0")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    out = np.empty(x.shape, dtype=float)

    finite = np.isfinite(x) & np.isfinite(y)
    xi, yi = x[~finite], y[~finite]
    out[~finite] = np.where(
        np.isneginf(xi) | np.isneginf(yi),
        0.0,
        np.where(np.isposinf(xi), special.stdtr(nu, yi), special.stdtr(nu, xi)),
    )
    if not finite.any():
        return out

    h = x[finite]
    k = y[finite]
    scale = np.sqrt((nu + 1.0) / (1.0 - rho * rho))

    def integrand(r):
        s = h - r
        z = (k - rho * s) * scale / np.sqrt(nu + s * s)
        return np.exp(t_logpdf(s, nu)) * special.stdtr(nu + 1.0, z)

    value, _ = integrate.quad_vec(integrand, 0.0, np.inf, epsabs=BVT_EPSABS, epsrel=BVT_EPSREL, norm="max")
    out[finite] = np.clip(value, 0.0, 1.0)
    return out
