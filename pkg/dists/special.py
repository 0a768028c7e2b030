"""
Special functions used by the t, GED and generalized hyperbolic densities.

Thin domain-checked wrappers over scipy.special, so that density code
reports a DomainError instead of silently returning NaN.
"""

import numpy as np
from scipy import special

from common.exceptions import DomainError


def ln_gamma(x):
    """
    Natural log of the Gamma function for positive arguments.

    Args:
        x: Positive real or array of positive reals

    Returns:
        ln Γ(x), same shape as the input

    Raises:
        DomainError: If any x <= 0 or is not finite

    Example:
        ln_gamma(10.0)  # 12.8018274800814...
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"ln_gamma requires finite x > 0, got {x!r}")
    out = special.gammaln(arr)
    return float(out) if out.ndim == 0 else out


def bessel_k(nu, x):
    """
    Modified Bessel function of the second kind, K_nu(x).

    Raises:
        DomainError: If any x <= 0
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"bessel_k requires finite x > 0, got {x!r}")
    out = special.kv(nu, arr)
    return float(out) if np.ndim(out) == 0 else out


def log_bessel_k(nu, x):
    """ln K_nu(x) via the exponentially scaled kve, stable for large x."""
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"log_bessel_k requires finite x > 0, got {x!r}")
    out = np.log(special.kve(nu, arr)) - arr
    return float(out) if np.ndim(out) == 0 else out


def bessel_k_ratio(nu, shift, x):
    """K_{nu+shift}(x) / K_nu(x) without overflow."""
    return float(np.exp(log_bessel_k(nu + shift, x) - log_bessel_k(nu, x)))
