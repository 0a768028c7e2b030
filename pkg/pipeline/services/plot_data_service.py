"""
Plot Data Service - Numbers behind the residual diagnostic figures.

QQ data pairs fitted-law quantiles with the ordered standardized
residuals; pointwise 95% bands map the Beta(i, n + 1 - i) quantiles of the
i-th uniform order statistic through the fitted quantile function. ACF
data holds the autocorrelations of eps and eps^2 with the +/- 2/sqrt(T)
band. Nothing is rendered.
"""

import logging
import math
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
import pandas as pd
from scipy import stats

from common.exceptions import DataValidationError
from common.utils import ensure_dir, write_csv
from common.validators import SeriesValidator
from dists.distributions import InnovationDist
from stattests.services import acf
from tsmodel.types import FittedModel

logger = logging.getLogger(__name__)

# Long residual series are thinned to this many evenly spaced order statistics
QQ_MAX_POINTS = 500
ACF_MAX_LAG = 20


class PlotDataService:
    """Service for residual QQ and correlogram data"""

    @staticmethod
    def qq_data(d: InnovationDist, eps, level: float = 0.95, max_points: int = QQ_MAX_POINTS) -> pd.DataFrame:
        """
        Theoretical vs empirical quantiles with pointwise bands.

        Columns: order, probability, theoretical, empirical, lower, upper.
        """
        eps = np.sort(SeriesValidator.as_finite_array(eps, name="residuals"))
        n = len(eps)
        order = np.arange(1, n + 1)
        if n > max_points:
            order = np.unique(np.linspace(1, n, max_points).round().astype(int))
        tail = (1.0 - level) / 2.0
        a = order.astype(float)
        b = n + 1.0 - a
        probability = (a - 0.5) / n
        lower_p = stats.beta.ppf(tail, a, b)
        upper_p = stats.beta.ppf(1.0 - tail, a, b)
        return pd.DataFrame({
            "order": order,
            "probability": probability,
            "theoretical": np.asarray(d.ppf(probability), dtype=float),
            "empirical": eps[order - 1],
            "lower": np.asarray(d.ppf(lower_p), dtype=float),
            "upper": np.asarray(d.ppf(upper_p), dtype=float),
        })

    @staticmethod
    def acf_data(eps, max_lag: int = ACF_MAX_LAG) -> pd.DataFrame:
        """Columns: lag, acf_eps, acf_eps_sq, band (= 2/sqrt(T))."""
        eps = SeriesValidator.as_finite_array(eps, name="residuals")
        max_lag = min(int(max_lag), len(eps) - 1)
        levels = acf(eps, max_lag)
        squares = acf(eps ** 2, max_lag)
        lags = np.arange(1, max_lag + 1)
        return pd.DataFrame({
            "lag": lags,
            "acf_eps": levels[1:],
            "acf_eps_sq": squares[1:],
            "band": np.full(max_lag, 2.0 / math.sqrt(len(eps))),
        })

    @staticmethod
    def emit_plot_data(
        fitted_models: Dict[str, FittedModel],
        output_dir: Union[str, Path],
        max_lag: int = ACF_MAX_LAG,
    ) -> List[Path]:
        """
        Write qq_<asset>.csv and acf_<asset>.csv for every fitted model.

        Raises:
            DataValidationError: No fitted models
        """
        if not fitted_models:
            raise DataValidationError("no fitted models to emit plot data for")
        output_dir = ensure_dir(output_dir)
        paths = []
        for label in sorted(fitted_models):
            fitted = fitted_models[label]
            eps = np.asarray(fitted.filtered.eps)
            paths.append(write_csv(PlotDataService.qq_data(fitted.dist, eps), output_dir / f"qq_{label}.csv"))
            paths.append(write_csv(PlotDataService.acf_data(eps, max_lag), output_dir / f"acf_{label}.csv"))
        logger.info(f"Wrote plot data for {len(fitted_models)} assets to {output_dir}")
        return paths


def qq_data(d: InnovationDist, eps, level: float = 0.95) -> pd.DataFrame:
    return PlotDataService.qq_data(d, eps, level=level)


def acf_data(eps, max_lag: int = ACF_MAX_LAG) -> pd.DataFrame:
    return PlotDataService.acf_data(eps, max_lag)


def emit_plot_data(fitted_models: Dict[str, FittedModel], output_dir: Union[str, Path], max_lag: int = ACF_MAX_LAG) -> List[Path]:
    return PlotDataService.emit_plot_data(fitted_models, output_dir, max_lag=max_lag)
