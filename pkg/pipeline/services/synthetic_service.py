"""
Synthetic Data Service - Price panels with known margins and dependence.

Each asset follows an ARMA-GARCH model driven by innovations
eps = F^{-1}(U), where U comes from a copula: an equicorrelated Gaussian
copula for any number of assets, or any bivariate family for two assets.
Used for test fixtures and by the simulate_data command.

Usage:
    from pipeline.services import simulate_panel, write_price_files

    panel = simulate_panel(n_obs=1500, n_assets=3, rho=0.3, seed=11)
    write_price_files(panel, "fixtures/")
"""

import datetime
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy import special

from common.exceptions import ParameterError
from common.utils import SeedLike, derive_seed, ensure_dir, make_rng, taildep_setting, write_csv
from copula.constants import CopulaFamily, CopulaLimits
from copula.families import copula_sample
from copula.types import CopulaModel
from dists.constants import DistributionFamily
from dists.distributions import Normal
from tsmodel.services import simulate_path
from tsmodel.types import ArmaGarchParams, ModelSpec

from ..constants import Calendar
from ..jalali import gregorian_to_jalali
from ..types import PriceSeries

logger = logging.getLogger(__name__)

DEFAULT_START = datetime.date(2005, 3, 21)
DEFAULT_PRICE = 100.0


def default_margin() -> ArmaGarchParams:
    """GARCH(1,1) with Normal innovations and about 1% daily volatility."""
    return ArmaGarchParams(mu=3e-4, gamma=5e-6, alpha=(0.05,), beta=(0.90,), dist=Normal())


def default_spec() -> ModelSpec:
    return ModelSpec(p=0, q=0, k=1, l=1, dist=DistributionFamily.NORMAL)


@dataclass(frozen=True)
class SyntheticPanel:
    """Simulated prices per asset and the copula draws that coupled them."""

    series: List[PriceSeries]
    uniforms: np.ndarray
    truth: Dict[str, object] = field(default_factory=dict)

    @property
    def labels(self) -> List[str]:
        return [s.label for s in self.series]


class SyntheticService:
    """Service for synthetic price panels"""

    @staticmethod
    def draw_uniforms(n: int, n_assets: int, family: str, rho: float, theta: Optional[float], nu: Optional[float], seed: SeedLike) -> np.ndarray:
        """n x n_assets copula draws in the open unit square."""
        rng = make_rng(seed)
        if family == CopulaFamily.GAUSSIAN:
            if not -1.0 / (n_assets - 1) < rho < 1.0:
                raise ParameterError(f"equicorrelation rho={rho} is not positive definite for {n_assets} assets")
            corr = np.full((n_assets, n_assets), rho)
            np.fill_diagonal(corr, 1.0)
            z = rng.standard_normal((n, n_assets)) @ np.linalg.cholesky(corr).T
            u = special.ndtr(z)
        elif family == CopulaFamily.INDEPENDENT:
            u = rng.uniform(size=(n, n_assets))
        else:
            if n_assets != 2:
                raise ParameterError(f"the {family} copula couples exactly 2 assets, got {n_assets}")
            draw = copula_sample(CopulaModel(family, theta=theta, nu=nu), n, seed=rng)
            u = np.column_stack([draw.u, draw.v])
        return np.clip(u, CopulaLimits.UNIT_EPS, 1.0 - CopulaLimits.UNIT_EPS)

    @staticmethod
    def simulate_panel(
        n_obs: int,
        n_assets: int = 3,
        family: str = CopulaFamily.GAUSSIAN,
        rho: float = 0.3,
        theta: Optional[float] = None,
        nu: Optional[float] = None,
        spec: Optional[ModelSpec] = None,
        params: Optional[ArmaGarchParams] = None,
        labels: Optional[Sequence[str]] = None,
        seed: SeedLike = None,
        burn_in: Optional[int] = None,
        start: datetime.date = DEFAULT_START,
    ) -> SyntheticPanel:
        """
        Simulate n_obs returns (n_obs + 1 prices) per asset on business days.

        For elliptical families theta defaults to rho.

        Raises:
            ParameterError: Invalid sizes, copula or margin parameters
        """
        if n_assets < 2:
            raise ParameterError(f"a panel needs at least 2 assets, got {n_assets}")
        labels = list(labels) if labels is not None else [f"asset{i + 1}" for i in range(n_assets)]
        if len(labels) != n_assets:
            raise ParameterError(f"{len(labels)} labels for {n_assets} assets")
        spec = spec if spec is not None else default_spec()
        params = params if params is not None else default_margin()
        burn_in = int(burn_in if burn_in is not None else taildep_setting("BURN_IN"))
        if seed is None:
            seed = int(taildep_setting("MASTER_SEED"))
        if family == CopulaFamily.STUDENT_T and theta is None:
            theta = rho

        total = burn_in + int(n_obs)
        u = SyntheticService.draw_uniforms(total, n_assets, family, rho, theta, nu, derive_seed(_entropy(seed), "copula"))
        dates = tuple(d.date() for d in pd.bdate_range(start=start, periods=int(n_obs) + 1))

        series = []
        for j, label in enumerate(labels):
            innovations = np.asarray(params.dist.ppf(u[:, j]), dtype=float)
            path = simulate_path(spec, params, int(n_obs), burn_in=burn_in, innovations=innovations)
            log_prices = np.log(DEFAULT_PRICE) + np.concatenate([[0.0], np.cumsum(path.returns)])
            series.append(PriceSeries(label=label, dates=dates, prices=np.exp(log_prices)))

        truth = {"family": family, "rho": rho, "theta": theta, "nu": nu, "margin": params.as_dict(spec), "spec": spec.label}
        logger.info(f"Simulated {n_assets} assets x {n_obs} returns coupled by a {family} copula")
        return SyntheticPanel(series=series, uniforms=u[burn_in:], truth=truth)

    @staticmethod
    def write_price_files(
        panel: SyntheticPanel,
        output_dir: Union[str, Path],
        calendars: Optional[Dict[str, str]] = None,
    ) -> List[Path]:
        """
        Write one date,price file per asset.

        calendars maps a label to Calendar.JALALI to write that file's
        dates as Jalali YYYY/MM/DD.
        """
        output_dir = ensure_dir(output_dir)
        calendars = calendars or {}
        paths = []
        for s in panel.series:
            if calendars.get(s.label, Calendar.GREGORIAN) == Calendar.JALALI:
                dates = ["{:04d}/{:02d}/{:02d}".format(*gregorian_to_jalali(d)) for d in s.dates]
            else:
                dates = [d.isoformat() for d in s.dates]
            frame = pd.DataFrame({"date": dates, "price": s.prices})
            paths.append(write_csv(frame, output_dir / f"{s.label}.csv"))
        return paths


def _entropy(seed: SeedLike) -> int:
    if isinstance(seed, (int, np.integer)):
        return int(seed)
    return int(make_rng(seed).integers(0, 2**63 - 1))


def simulate_panel(n_obs: int, **kwargs) -> SyntheticPanel:
    return SyntheticService.simulate_panel(n_obs, **kwargs)


def write_price_files(panel: SyntheticPanel, output_dir: Union[str, Path], calendars: Optional[Dict[str, str]] = None) -> List[Path]:
    return SyntheticService.write_price_files(panel, output_dir, calendars=calendars)
