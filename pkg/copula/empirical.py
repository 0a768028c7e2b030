"""
Rank statistics, empirical copulas and nonparametric tail copulas.

Inequality conventions are part of the contract and keep counts
bit-reproducible:

    empirical copula      1(U_t <  u, V_t <  v)
    empirical survival    1(U_t >= u, V_t >= v)
    lower tail copula     1(u_t <= kx/(T+1), v_t <= ky/(T+1))
    upper tail copula     1(u_t >  (T-kx)/(T+1), v_t > (T-ky)/(T+1))
"""

import logging
import math
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from common.exceptions import DataValidationError, DegenerateDataError, ParameterError
from common.utils import taildep_setting
from common.validators import SeriesValidator

from .constants import TailSource
from .types import PseudoSample, TailEstimate

logger = logging.getLogger(__name__)

# Query points are processed in blocks of this many rows
_BLOCK = 1024


# ==============================================================================
# PSEUDO-OBSERVATIONS AND RANK CORRELATION
# ==============================================================================

def pseudo_obs(x, y) -> PseudoSample:
    """
    Normalized ranks u_t = rank(x_t)/(T+1), v_t = rank(y_t)/(T+1).

    Ties receive the average rank.

    Raises:
        DataValidationError: Length mismatch, T < 2 or non-finite input
    """
    x = SeriesValidator.as_finite_array(x, name="x")
    y = SeriesValidator.as_finite_array(y, name="y")
    SeriesValidator.validate_same_length(x, y, names=("x", "y"))
    if len(x) < 2:
        raise DataValidationError(f"pseudo observations need T >= 2, got {len(x)}")
    denom = len(x) + 1.0
    return PseudoSample(
        u=stats.rankdata(x, method="average") / denom,
        v=stats.rankdata(y, method="average") / denom,
    )


def kendall_tau(s: PseudoSample) -> float:
    """Sample Kendall's tau with tie correction (tau-b)."""
    tau = stats.kendalltau(s.u, s.v, variant="b").statistic
    if not math.isfinite(tau):
        raise DegenerateDataError("Kendall's tau undefined (a margin is constant)")
    return float(tau)


def spearman_rho(s: PseudoSample) -> float:
    """Pearson correlation of the rank vectors."""
    if np.ptp(s.u) == 0.0 or np.ptp(s.v) == 0.0:
        raise DegenerateDataError("Spearman's rho undefined (a margin is constant)")
    return float(np.corrcoef(s.u, s.v)[0, 1])


def _check_correlation(value: float, name: str) -> float:
    value = float(value)
    if not -1.0 <= value <= 1.0:
        raise ParameterError(f"{name}={value} outside [-1, 1]")
    return value


def tau_to_rho(tau: float) -> float:
    """rho = sin(pi tau / 2)."""
    return math.sin(math.pi * _check_correlation(tau, "tau") / 2.0)


def rho_s_to_rho(rho_s: float) -> float:
    """rho = 2 sin(pi rho_s / 6), the Gaussian relation between Spearman's and Pearson's rho."""
    return 2.0 * math.sin(math.pi * _check_correlation(rho_s, "rho_s") / 6.0)


# ==============================================================================
# EMPIRICAL COPULAS
# ==============================================================================

def _count_blocks(s: PseudoSample, u, v, inside) -> np.ndarray:
    uq, vq = np.broadcast_arrays(np.atleast_1d(np.asarray(u, dtype=float)), np.atleast_1d(np.asarray(v, dtype=float)))
    flat_u = uq.ravel()
    flat_v = vq.ravel()
    out = np.empty(flat_u.shape, dtype=float)
    for start in range(0, len(flat_u), _BLOCK):
        stop = start + _BLOCK
        mask = inside(s.u[None, :], s.v[None, :], flat_u[start:stop, None], flat_v[start:stop, None])
        out[start:stop] = np.count_nonzero(mask, axis=1)
    return out.reshape(uq.shape)


def _maybe_scalar(values: np.ndarray, u, v):
    if np.ndim(u) == 0 and np.ndim(v) == 0:
        return float(values.ravel()[0])
    return values


def empirical_copula(s: PseudoSample, u, v):
    """(1/T) Σ 1(U_t < u, V_t < v)."""
    counts = _count_blocks(s, u, v, lambda su, sv, qu, qv: (su < qu) & (sv < qv))
    return _maybe_scalar(counts / s.n, u, v)


def empirical_survival(s: PseudoSample, u, v):
    """(1/T) Σ 1(U_t >= u, V_t >= v)."""
    counts = _count_blocks(s, u, v, lambda su, sv, qu, qv: (su >= qu) & (sv >= qv))
    return _maybe_scalar(counts / s.n, u, v)


# ==============================================================================
# TAIL COPULAS
# ==============================================================================

def default_k(n: int) -> int:
    """Default scaling factor floor(sqrt(T))."""
    return max(1, math.isqrt(int(n)))


def _check_tail_args(s: PseudoSample, x, y, k: int):
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= s.n:
        raise ParameterError(f"scaling factor k={k!r} out of range 1..{s.n}", errors={"k": "out of range"})
    x, y = np.broadcast_arrays(np.atleast_1d(np.asarray(x, dtype=float)), np.atleast_1d(np.asarray(y, dtype=float)))
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise ParameterError("tail copula arguments x, y must be positive")
    if np.any(k * x > s.n + 1) or np.any(k * y > s.n + 1):
        raise ParameterError(f"k*x/(T+1) and k*y/(T+1) must not exceed 1 (k={k}, T={s.n})")
    return x, y


def tail_copula_lower(s: PseudoSample, x, y, k: int):
    """(1/k) Σ 1(u_t <= kx/(T+1), v_t <= ky/(T+1))."""
    xa, ya = _check_tail_args(s, x, y, k)
    denom = s.n + 1.0
    counts = _count_blocks(s, k * xa / denom, k * ya / denom, lambda su, sv, qu, qv: (su <= qu) & (sv <= qv))
    return _maybe_scalar(counts / k, x, y)


def tail_copula_upper(s: PseudoSample, x, y, k: int):
    """(1/k) Σ 1(u_t > (T-kx)/(T+1), v_t > (T-ky)/(T+1))."""
    xa, ya = _check_tail_args(s, x, y, k)
    denom = s.n + 1.0
    counts = _count_blocks(
        s, (s.n - k * xa) / denom, (s.n - k * ya) / denom, lambda su, sv, qu, qv: (su > qu) & (sv > qv)
    )
    return _maybe_scalar(counts / k, x, y)


def tail_coeff_estimates(s: PseudoSample, k: Optional[int] = None) -> TailEstimate:
    """Both tail copulas at (1, 1); k defaults to floor(sqrt(T))."""
    k = default_k(s.n) if k is None else k
    lower = tail_copula_lower(s, 1.0, 1.0, k)
    upper = tail_copula_upper(s, 1.0, 1.0, k)
    return TailEstimate(lambda_lower=lower, lambda_upper=upper, k=int(k), source=TailSource.EMPIRICAL)


def tail_copula_grid(s: PseudoSample, xs: Sequence[float], ys: Sequence[float], k: Optional[int] = None) -> pd.DataFrame:
    """Lower and upper tail copulas on the grid xs × ys."""
    k = default_k(s.n) if k is None else k
    gx, gy = np.meshgrid(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float), indexing="ij")
    gx = gx.ravel()
    gy = gy.ravel()
    return pd.DataFrame({
        "x": gx,
        "y": gy,
        "k": int(k),
        "lower": tail_copula_lower(s, gx, gy, k),
        "upper": tail_copula_upper(s, gx, gy, k),
    })


def tail_k_sweep(s: PseudoSample, exponents: Optional[Iterable[float]] = None) -> pd.DataFrame:
    """Tail coefficient estimates at k = floor(T^e) for each exponent e."""
    exponents = tuple(exponents if exponents is not None else taildep_setting("TAIL_K_EXPONENTS"))
    rows = []
    for exponent in exponents:
        if not 0.0 < exponent < 1.0:
            raise ParameterError(f"k exponent {exponent} must be in (0, 1)")
        k = max(1, int(math.floor(s.n ** exponent)))
        estimate = tail_coeff_estimates(s, k)
        rows.append({
            "exponent": float(exponent),
            "k": k,
            "lambda_lower": estimate.lambda_lower,
            "lambda_upper": estimate.lambda_upper,
        })
    logger.debug(f"Tail k sweep over {len(rows)} exponents at T={s.n}")
    return pd.DataFrame(rows, columns=["exponent", "k", "lambda_lower", "lambda_upper"])
