"""
Fractional differencing (1 - B)^d.

Weights follow the recursion pi_0 = 1, pi_j = pi_{j-1} * (j - 1 - d) / j and
the operator is applied with the full expansion back to the first
observation (no truncation window).
"""

import numpy as np

from common.exceptions import ParameterError


def fracdiff_coeffs(d: float, n: int) -> np.ndarray:
    """
    Coefficients pi_0..pi_{n-1} of (1 - B)^d.

    Example:
        fracdiff_coeffs(1.0, 4)  # array([ 1., -1.,  0.,  0.])
    """
    if not abs(d) <= 1.0:
        raise ParameterError(f"fractional order must satisfy |d| <= 1, got {d}")
    if n < 1:
        raise ParameterError(f"number of coefficients must be >= 1, got {n}")
    w = np.empty(n, dtype=float)
    w[0] = 1.0
    for j in range(1, n):
        w[j] = w[j - 1] * (j - 1 - d) / j
    return w


def fracdiff(x: np.ndarray, d: float) -> np.ndarray:
    """Apply (1 - B)^d to x; d = 0 returns an exact copy."""
    x = np.asarray(x, dtype=float)
    if d == 0.0:
        return x.copy()
    w = fracdiff_coeffs(d, len(x))
    return np.convolve(x, w)[: len(x)]


def fracintegrate(x: np.ndarray, d: float) -> np.ndarray:
    """Apply (1 - B)^{-d}, the inverse of fracdiff on a finite sample."""
    return fracdiff(x, -d)
