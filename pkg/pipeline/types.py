"""
Domain types for ingestion, run configuration and reports.
"""

import datetime
from dataclasses import dataclass, field, replace
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from common.exceptions import DataValidationError
from tsmodel.types import FittedModel, ModelSpec

from .constants import Calendar, ReportTable


@dataclass(frozen=True)
class PriceSeries:
    """Dated positive prices of one asset, strictly increasing in date."""

    label: str
    dates: Tuple[datetime.date, ...]
    prices: np.ndarray

    def __post_init__(self):
        prices = np.array(self.prices, dtype=float)
        dates = tuple(self.dates)
        if len(dates) != len(prices):
            raise DataValidationError(f"{self.label}: {len(dates)} dates for {len(prices)} prices")
        if not np.all(np.isfinite(prices) & (prices > 0.0)):
            raise DataValidationError(f"{self.label}: prices must be finite and positive")
        if any(b <= a for a, b in zip(dates, dates[1:])):
            raise DataValidationError(f"{self.label}: dates must be strictly increasing")
        prices.setflags(write=False)
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "prices", prices)

    @property
    def n(self) -> int:
        return len(self.prices)

    def to_series(self) -> pd.Series:
        return pd.Series(self.prices, index=pd.Index(self.dates, name="date"), name=self.label)


@dataclass(frozen=True)
class AlignedPanel:
    """
    Prices on the common dates of all assets and the log returns between
    consecutive common dates. A return row exists only where the previous
    common date is every asset's previous raw observation.
    """

    prices: pd.DataFrame
    returns: pd.DataFrame

    @property
    def labels(self) -> List[str]:
        return list(self.returns.columns)

    @property
    def n_obs(self) -> int:
        return len(self.returns)

    def returns_of(self, label: str) -> np.ndarray:
        return self.returns[label].to_numpy(dtype=float)

    def log_prices_of(self, label: str) -> np.ndarray:
        return np.log(self.prices[label].to_numpy(dtype=float))

    def pairs(self) -> List[Tuple[str, str]]:
        return list(combinations(self.labels, 2))


def pair_label(a: str, b: str) -> str:
    return f"{a}|{b}"


@dataclass(frozen=True)
class AssetSource:
    """One price file and how to read it."""

    label: str
    path: Path
    date_column: str = "date"
    price_column: str = "price"
    calendar: str = Calendar.GREGORIAN
    date_format: str = ""


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration of one pipeline run (see pipeline.config)."""

    assets: Tuple[AssetSource, ...]
    ar_orders: Tuple[int, ...] = (0, 1)
    ma_orders: Tuple[int, ...] = (0, 1)
    garch_orders: Tuple[Tuple[int, int], ...] = ((1, 1),)
    distributions: Tuple[str, ...] = ("norm", "std")
    long_memory: bool = True
    long_memory_dist: str = "std"
    sghyd_index: float = 0.25
    ljung_box_lags: Tuple[int, ...] = (5, 10)
    adf_lags: int = 1
    gate_alpha: float = 0.05
    copula_families: Tuple[str, ...] = ("gaussian", "t", "clayton", "gumbel", "frank", "joe")
    copula_method: str = "both"
    n_bootstrap: int = 200
    n_permutations: int = 999
    tail_k: Optional[int] = None
    tail_k_exponents: Tuple[float, ...] = (0.4, 0.5, 0.6)
    master_seed: int = 20181114
    threads: int = 1
    output_dir: Path = Path("output")
    report_formats: Tuple[str, ...] = ("csv", "json")

    def candidate_specs(self) -> List[ModelSpec]:
        """Every (p, q, k, l, dist) combination of the model grid, in a fixed order."""
        specs = []
        for dist in self.distributions:
            for k, l in self.garch_orders:
                for p in self.ar_orders:
                    for q in self.ma_orders:
                        specs.append(ModelSpec(p=p, q=q, k=k, l=l, dist=dist))
        return specs

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Copy with the non-None overrides applied (command-line flags win)."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def as_dict(self) -> Dict[str, Any]:
        return {
            "assets": [source.label for source in self.assets],
            "ar_orders": list(self.ar_orders),
            "ma_orders": list(self.ma_orders),
            "garch_orders": [list(order) for order in self.garch_orders],
            "distributions": list(self.distributions),
            "long_memory": self.long_memory,
            "long_memory_dist": self.long_memory_dist,
            "sghyd_index": self.sghyd_index,
            "ljung_box_lags": list(self.ljung_box_lags),
            "adf_lags": self.adf_lags,
            "gate_alpha": self.gate_alpha,
            "copula_families": list(self.copula_families),
            "copula_method": self.copula_method,
            "n_bootstrap": self.n_bootstrap,
            "n_permutations": self.n_permutations,
            "tail_k": self.tail_k,
            "tail_k_exponents": list(self.tail_k_exponents),
            "master_seed": self.master_seed,
        }


@dataclass
class ReportTables:
    """All report tables of one run, plus the fitted marginal models."""

    long_memory: pd.DataFrame
    model_params: pd.DataFrame
    rank_correlations: pd.DataFrame
    copula_fits: pd.DataFrame
    tail_coefficients: pd.DataFrame
    diagnostics: pd.DataFrame
    cointegration: pd.DataFrame
    model_selection: pd.DataFrame
    independence: pd.DataFrame
    tail_sensitivity: pd.DataFrame
    fitted_models: Dict[str, FittedModel] = field(default_factory=dict, repr=False)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def tables(self) -> Dict[str, pd.DataFrame]:
        """Tables by name, in report order."""
        return {name: getattr(self, name) for name in ReportTable.ALL}

    @classmethod
    def empty(cls) -> "ReportTables":
        frames = {name: pd.DataFrame(columns=ReportTable.COLUMNS[name]) for name in ReportTable.ALL}
        return cls(**frames)
