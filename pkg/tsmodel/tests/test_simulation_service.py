"""
Unit Tests for SimulationService
"""

import numpy as np
import pytest
from django.test import SimpleTestCase
from scipy import stats

from common.exceptions import ParameterError
from tsmodel.services import simulate, simulate_path
from tsmodel.types import ArmaGarchParams, ModelSpec


class SimulationServiceTest(SimpleTestCase):
    """Test suite for simulate"""

    def setUp(self):
        self.spec = ModelSpec(k=1, l=1)
        self.params = ArmaGarchParams(mu=0.0, gamma=0.05, alpha=(0.05,), beta=(0.90,))

    def test_fixed_seed_is_deterministic(self):
        """Same seed twice gives the identical series"""
        np.testing.assert_array_equal(simulate(self.spec, self.params, 500, seed=1),
                                      simulate(self.spec, self.params, 500, seed=1))

    def test_length_and_path_fields(self):
        """Burn-in is discarded and all fields align"""
        path = simulate_path(self.spec, self.params, 300, seed=2)
        for series in (path.returns, path.a, path.sigma, path.innovations):
            self.assertEqual(len(series), 300)
        np.testing.assert_allclose(path.a, path.sigma * path.innovations, rtol=1e-14)

    def test_invalid_params(self):
        """Non-stationary parameters are rejected"""
        params = ArmaGarchParams(gamma=0.05, alpha=(0.3,), beta=(0.8,))
        with self.assertRaises(ParameterError):
            simulate(self.spec, params, 100, seed=0)

    def test_unconditional_variance(self):
        """Sample variance of a long path is close to gamma / (1 - alpha - beta)"""
        r = simulate(self.spec, self.params, 400_000, seed=3)
        target = 0.05 / (1.0 - 0.95)
        self.assertLess(abs(r.var() - target) / target, 0.05)

    @pytest.mark.slow
    def test_degenerate_garch_is_iid_normal(self):
        """alpha=beta=0, gamma=1 produces N(0,1) draws"""
        spec = ModelSpec(k=0, l=0)
        params = ArmaGarchParams(mu=0.0, gamma=1.0)
        passes = sum(
            stats.kstest(simulate(spec, params, 1000, seed=seed), "norm").pvalue >= 0.05
            for seed in range(100)
        )
        self.assertGreaterEqual(passes, 90)
