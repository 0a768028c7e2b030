"""
Compiled ARMA-GARCH recursions.

Both kernels work on plain float64 arrays and return a status flag instead
of raising, so they can run inside numba's nopython mode. Pre-sample shocks
and pre-sample ARMA values are 0; pre-sample variances take the value passed
as `sigma2_init`.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def arma_garch_filter(x, phi, theta, gamma, alpha, beta, sigma2_init, a, sigma2):
    """
    Fill a (shocks) and sigma2 (conditional variances) from x.

    Returns:
        True on success, False if a variance is non-finite or non-positive
    """
    n = x.shape[0]
    p = phi.shape[0]
    q = theta.shape[0]
    l_ = alpha.shape[0]
    k = beta.shape[0]
    for t in range(n):
        mean = 0.0
        for i in range(p):
            if t - 1 - i >= 0:
                mean += phi[i] * x[t - 1 - i]
        for j in range(q):
            if t - 1 - j >= 0:
                mean += theta[j] * a[t - 1 - j]
        a[t] = x[t] - mean

        s2 = gamma
        for m in range(l_):
            if t - 1 - m >= 0:
                s2 += alpha[m] * a[t - 1 - m] * a[t - 1 - m]
        for m in range(k):
            if t - 1 - m >= 0:
                s2 += beta[m] * sigma2[t - 1 - m]
            else:
                s2 += beta[m] * sigma2_init
        if not (s2 > 0.0) or not np.isfinite(s2):
            return False
        sigma2[t] = s2
    return True


@njit(cache=True)
def arma_garch_simulate(z, phi, theta, gamma, alpha, beta, sigma2_init, x, a, sigma2):
    """
    Run the model forward from standardized innovations z.

    Fills x (ARMA output before the mean and fractional integration),
    a (shocks) and sigma2.
    """
    n = z.shape[0]
    p = phi.shape[0]
    q = theta.shape[0]
    l_ = alpha.shape[0]
    k = beta.shape[0]
    for t in range(n):
        s2 = gamma
        for m in range(l_):
            if t - 1 - m >= 0:
                s2 += alpha[m] * a[t - 1 - m] * a[t - 1 - m]
        for m in range(k):
            if t - 1 - m >= 0:
                s2 += beta[m] * sigma2[t - 1 - m]
            else:
                s2 += beta[m] * sigma2_init
        if not (s2 > 0.0) or not np.isfinite(s2):
            return False
        sigma2[t] = s2
        a[t] = np.sqrt(s2) * z[t]

        value = a[t]
        for i in range(p):
            if t - 1 - i >= 0:
                value += phi[i] * x[t - 1 - i]
        for j in range(q):
            if t - 1 - j >= 0:
                value += theta[j] * a[t - 1 - j]
        x[t] = value
    return True
