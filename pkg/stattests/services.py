"""
Statistical test services.

Autocorrelation, Ljung-Box, Kolmogorov-Smirnov uniformity, augmented
Dickey-Fuller and Engle-Granger tests. All functions are pure and return a
TestResult. Critical values and p-values for the unit-root and
cointegration tests come from the MacKinnon response-surface tables shipped
with statsmodels.

Usage:
    from stattests.services import ljung_box, ks_uniform

    ljung_box(returns, 10).p_value
    ljung_box(returns ** 2, 10).p_value  # heteroskedasticity check
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, ClassVar, Dict, List, Mapping, Tuple

import numpy as np
from scipy import stats
from statsmodels.stats.diagnostic import acorr_ljungbox
from statsmodels.tsa.stattools import acf as sm_acf
from statsmodels.tsa.stattools import adfuller, coint

from common.exceptions import DataValidationError, DegenerateDataError, ParameterError
from common.validators import SeriesValidator

from .constants import TestMethod, TrendOption

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TestResult:
    """Statistic, p value and the lag or degrees of freedom used."""

    __test__: ClassVar[bool] = False

    statistic: float
    p_value: float
    lag: int
    method: str
    extra: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not (0.0 <= self.p_value <= 1.0):
            raise ParameterError(f"p value {self.p_value} outside [0, 1] for {self.method}")

    def rejects(self, alpha: float = 0.05) -> bool:
        return self.p_value < alpha

    def to_dict(self) -> Dict[str, Any]:
        out = {"method": self.method, "statistic": self.statistic, "p_value": self.p_value, "lag": self.lag}
        out.update(self.extra)
        return out


def _clip_probability(p: float) -> float:
    return float(min(1.0, max(0.0, p)))


class StatTestService:
    """Service for diagnostic tests"""

    @staticmethod
    def acf(x, max_lag: int) -> np.ndarray:
        """
        Sample autocorrelations rho_0..rho_max_lag (rho_0 = 1).

        Raises:
            DegenerateDataError: Zero-variance series
            DataValidationError: max_lag >= T
        """
        x = SeriesValidator.as_finite_array(x, name="series")
        if not 0 <= max_lag < len(x):
            raise DataValidationError(f"max_lag={max_lag} must be in [0, {len(x) - 1}]")
        SeriesValidator.validate_nonconstant(x, name="series")
        return np.asarray(sm_acf(x, nlags=max_lag, fft=False, adjusted=False), dtype=float)

    @staticmethod
    def ljung_box(x, lags: int) -> TestResult:
        """Q = T(T+2) Σ rho_h^2 / (T-h) with a chi-square(lags) p value."""
        x = SeriesValidator.as_finite_array(x, name="series")
        if not 1 <= lags < len(x):
            raise DataValidationError(f"lags={lags} must be in [1, {len(x) - 1}]")
        SeriesValidator.validate_nonconstant(x, name="series")
        table = acorr_ljungbox(x, lags=[lags], return_df=True)
        q = float(table["lb_stat"].iloc[-1])
        p = _clip_probability(float(table["lb_pvalue"].iloc[-1]))
        return TestResult(statistic=q, p_value=p, lag=lags, method=TestMethod.LJUNG_BOX)

    @staticmethod
    def ks_uniform(y) -> TestResult:
        """Two-sided KS distance to U(0,1) with the asymptotic Kolmogorov p value."""
        y = SeriesValidator.as_finite_array(y, name="pit")
        SeriesValidator.validate_unit_interval(y, name="pit")
        result = stats.kstest(y, "uniform", method="asymp")
        return TestResult(
            statistic=float(result.statistic),
            p_value=_clip_probability(result.pvalue),
            lag=len(y),
            method=TestMethod.KS_UNIFORM,
        )

    @staticmethod
    def adf(x, lags: int = 1, trend: str = TrendOption.CONSTANT) -> TestResult:
        """
        Augmented Dickey-Fuller t test with a fixed number of lagged differences.

        A series whose first differences are constant (a deterministic ramp)
        is rejected as degenerate for either trend option, since the test
        regression fits it exactly.

        Raises:
            DataValidationError: T <= lags + 10 or unknown trend option
            DegenerateDataError: Exact-fit or singular regression
        """
        x = SeriesValidator.as_finite_array(x, name="series")
        if trend not in (TrendOption.CONSTANT, TrendOption.CONSTANT_TREND):
            raise DataValidationError(f"unknown trend option '{trend}'")
        if len(x) <= lags + 10:
            raise DataValidationError(f"ADF needs more than {lags + 10} observations, got {len(x)}")
        diffs = np.diff(x)
        if np.ptp(diffs) <= 1e-12 * max(1.0, float(np.max(np.abs(diffs)))):
            raise DegenerateDataError("series has constant first differences (deterministic ramp)")

        try:
            out = adfuller(x, maxlag=lags, regression=trend, autolag=None)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise DegenerateDataError(f"singular ADF regression: {exc}") from exc
        statistic, p_value, used_lag, n_obs, critical = out[0], out[1], out[2], out[3], out[4]
        if not np.isfinite(statistic):
            raise DegenerateDataError("singular ADF regression (non-finite statistic)")
        return TestResult(
            statistic=float(statistic),
            p_value=_clip_probability(p_value),
            lag=int(used_lag),
            method=TestMethod.ADF,
            extra={"trend": trend, "n_obs": int(n_obs), **{f"crit_{k}": float(v) for k, v in critical.items()}},
        )

    @staticmethod
    def engle_granger(x, y, lags: int = 1, trend: str = TrendOption.CONSTANT) -> TestResult:
        """
        Residual-based cointegration test of y on x (OLS with intercept).

        Raises:
            DataValidationError: Length mismatch
            DegenerateDataError: Residuals identically zero
        """
        x = SeriesValidator.as_finite_array(x, name="x")
        y = SeriesValidator.as_finite_array(y, name="y")
        SeriesValidator.validate_same_length(x, y, names=("x", "y"))
        if len(x) <= lags + 10:
            raise DataValidationError(f"Engle-Granger needs more than {lags + 10} observations, got {len(x)}")
        SeriesValidator.validate_nonconstant(x, name="x")

        design = np.column_stack([np.ones_like(x), x])
        coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
        if rank < 2:
            raise DegenerateDataError("singular cointegrating regression")
        resid = y - design @ coef
        if float(np.std(resid)) <= 1e-10 * max(1.0, float(np.std(y))):
            raise DegenerateDataError("cointegrating regression residuals are identically zero")

        try:
            statistic, p_value, critical = coint(y, x, trend=trend, maxlag=lags, autolag=None)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise DegenerateDataError(f"singular Engle-Granger regression: {exc}") from exc
        return TestResult(
            statistic=float(statistic),
            p_value=_clip_probability(p_value),
            lag=lags,
            method=TestMethod.ENGLE_GRANGER,
            extra={
                "intercept": float(coef[0]),
                "slope": float(coef[1]),
                "crit_1%": float(critical[0]),
                "crit_5%": float(critical[1]),
                "crit_10%": float(critical[2]),
            },
        )

    @staticmethod
    def pairwise_engle_granger(series: Mapping[str, np.ndarray], lags: int = 1) -> List[Tuple[str, str, TestResult]]:
        """Engle-Granger for every unordered pair, regressing the second label on the first."""
        out = []
        for first, second in combinations(list(series), 2):
            result = StatTestService.engle_granger(series[first], series[second], lags=lags)
            logger.debug(f"Engle-Granger {second} on {first}: stat={result.statistic:.4f}, p={result.p_value:.4f}")
            out.append((first, second, result))
        return out


def acf(x, max_lag: int) -> np.ndarray:
    return StatTestService.acf(x, max_lag)


def ljung_box(x, lags: int) -> TestResult:
    return StatTestService.ljung_box(x, lags)


def ks_uniform(y) -> TestResult:
    return StatTestService.ks_uniform(y)


def adf(x, lags: int = 1, trend: str = TrendOption.CONSTANT) -> TestResult:
    return StatTestService.adf(x, lags=lags, trend=trend)


def engle_granger(x, y, lags: int = 1, trend: str = TrendOption.CONSTANT) -> TestResult:
    return StatTestService.engle_granger(x, y, lags=lags, trend=trend)


def pairwise_engle_granger(series: Mapping[str, np.ndarray], lags: int = 1) -> List[Tuple[str, str, TestResult]]:
    return StatTestService.pairwise_engle_granger(series, lags=lags)
