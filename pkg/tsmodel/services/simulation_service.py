"""
Simulation Service - Run ARMA(FARIMA)-GARCH models forward.

Used to generate synthetic return series with known parameters, both as
fit oracles and as fixture data for the command line tools.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from common.exceptions import EvaluationError, ParameterError
from common.utils import SeedLike, taildep_setting
from dists.distributions import sample

from ..fracdiff import fracintegrate
from ..recursions import arma_garch_simulate
from ..types import ArmaGarchParams, ModelSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimulatedPath:
    """Returns with the shocks, volatilities and innovations that produced them."""

    returns: np.ndarray
    a: np.ndarray
    sigma: np.ndarray
    innovations: np.ndarray


class SimulationService:
    """Service for forward simulation"""

    @staticmethod
    def simulate_path(
        spec: ModelSpec,
        params: ArmaGarchParams,
        n_obs: int,
        seed: SeedLike = None,
        burn_in: Optional[int] = None,
        innovations: Optional[np.ndarray] = None,
    ) -> SimulatedPath:
        """
        Simulate n_obs returns after discarding a burn-in.

        Args:
            spec: Lag orders and innovation family
            params: Valid parameters for the spec
            n_obs: Number of returned observations
            seed: Seed or Generator for the innovations
            burn_in: Discarded leading observations (TAILDEP['BURN_IN'] by default)
            innovations: Pre-drawn standardized innovations of length burn_in + n_obs

        Raises:
            ParameterError: Invalid parameters or sizes
            EvaluationError: Variance recursion failure
        """
        if n_obs < 1:
            raise ParameterError(f"number of observations must be >= 1, got {n_obs}")
        params.check_spec(spec)
        params.validate()
        if burn_in is None:
            burn_in = int(taildep_setting("BURN_IN"))
        total = burn_in + int(n_obs)

        if innovations is None:
            z = sample(params.dist, total, seed)
        else:
            z = np.asarray(innovations, dtype=float)
            if len(z) != total:
                raise ParameterError(f"expected {total} innovations, got {len(z)}")

        sigma2_init = params.unconditional_variance()
        x = np.zeros(total)
        a = np.zeros(total)
        sigma2 = np.zeros(total)
        ok = arma_garch_simulate(
            np.ascontiguousarray(z, dtype=np.float64),
            np.asarray(params.phi, dtype=np.float64).reshape(-1),
            np.asarray(params.theta, dtype=np.float64).reshape(-1),
            float(params.gamma),
            np.asarray(params.alpha, dtype=np.float64).reshape(-1),
            np.asarray(params.beta, dtype=np.float64).reshape(-1),
            float(sigma2_init),
            x,
            a,
            sigma2,
        )
        if not ok:
            raise EvaluationError(f"simulation variance recursion failed for {spec.label}")

        deviation = fracintegrate(x, params.d) if spec.fractional else x
        returns = params.mu + deviation
        keep = slice(burn_in, total)
        logger.debug(f"Simulated {n_obs} observations of {spec.label} (burn-in {burn_in})")
        return SimulatedPath(
            returns=returns[keep].copy(),
            a=a[keep].copy(),
            sigma=np.sqrt(sigma2[keep]),
            innovations=z[keep].copy(),
        )

    @staticmethod
    def simulate(spec: ModelSpec, params: ArmaGarchParams, n_obs: int, seed: SeedLike = None) -> np.ndarray:
        return SimulationService.simulate_path(spec, params, n_obs, seed).returns


def simulate(spec: ModelSpec, params: ArmaGarchParams, n_obs: int, seed: SeedLike = None) -> np.ndarray:
    return SimulationService.simulate(spec, params, n_obs, seed)


def simulate_path(spec: ModelSpec, params: ArmaGarchParams, n_obs: int, seed: SeedLike = None, **kwargs) -> SimulatedPath:
    return SimulationService.simulate_path(spec, params, n_obs, seed, **kwargs)
