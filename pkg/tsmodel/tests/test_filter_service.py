"""
Unit Tests for FilterService
Tests residual extraction, likelihood evaluation and the PIT
"""

import math

import numpy as np
import pytest
from django.test import SimpleTestCase
from scipy import stats

from common.exceptions import DataValidationError, EvaluationError
from dists.distributions import Normal, StudentT
from tsmodel.services import filter_returns, pit_series, simulate_path
from tsmodel.types import ArmaGarchParams, ModelSpec


class FilterServiceTest(SimpleTestCase):
    """Test suite for filter_returns"""

    def setUp(self):
        self.rng = np.random.default_rng(11)
        self.returns = 0.01 * self.rng.standard_t(5, size=800)
        self.spec = ModelSpec(p=1, q=1, k=1, l=1, dist="std")
        self.params = ArmaGarchParams(
            mu=0.0003, phi=(0.87,), theta=(-0.78,), gamma=2e-6, alpha=(0.035,), beta=(0.954,), dist=StudentT(nu=3.363),
        )

    def naive_loglik(self, r, params):
        """Helper: straightforward Python loop over the recursions"""
        s2_prev = float(np.var(r))
        x_prev = 0.0
        a_prev = 0.0
        total = 0.0
        for t, value in enumerate(r):
            x_t = value - params.mu
            a_t = x_t - (params.phi[0] * x_prev + params.theta[0] * a_prev if t > 0 else 0.0)
            s2 = params.gamma + params.beta[0] * s2_prev + (params.alpha[0] * a_prev ** 2 if t > 0 else 0.0)
            sigma = math.sqrt(s2)
            total += float(params.dist.logpdf(a_t / sigma)) - math.log(sigma)
            x_prev, a_prev, s2_prev = x_t, a_t, s2
        return total

    # ==== Test recursion ====

    def test_constant_volatility_degenerate_case(self):
        """p=q=k=l=0 with gamma=1 gives sigma=1 and eps=r"""
        spec = ModelSpec(p=0, q=0, k=0, l=0)
        out = filter_returns(spec, ArmaGarchParams(mu=0.0, gamma=1.0), self.returns)
        np.testing.assert_array_equal(out.sigma, np.ones_like(self.returns))
        np.testing.assert_array_equal(out.eps, self.returns)

    def test_eps_times_sigma_is_shock(self):
        """eps * sigma == a exactly and sigma > 0"""
        out = filter_returns(self.spec, self.params, self.returns)
        np.testing.assert_array_equal(out.eps * out.sigma, out.a)
        self.assertTrue(np.all(out.sigma > 0.0))

    def test_loglik_matches_naive_loop(self):
        """Vectorized likelihood equals a plain loop"""
        out = filter_returns(self.spec, self.params, self.returns)
        expected = self.naive_loglik(self.returns, self.params)
        self.assertAlmostEqual(out.loglik, expected, delta=1e-9 * abs(expected))

    def test_zero_d_fractional_path_identical(self):
        """d=0 on the fractional path reproduces the plain path"""
        plain = filter_returns(self.spec, self.params, self.returns)
        frac_spec = ModelSpec(p=1, q=1, k=1, l=1, fractional=True, dist="std")
        frac = filter_returns(frac_spec, self.params, self.returns)
        np.testing.assert_array_equal(plain.eps, frac.eps)
        np.testing.assert_array_equal(plain.sigma, frac.sigma)
        self.assertEqual(plain.loglik, frac.loglik)

    def test_outputs_are_read_only(self):
        """FilterOutput arrays cannot be modified"""
        out = filter_returns(self.spec, self.params, self.returns)
        with self.assertRaises(ValueError):
            out.eps[0] = 1.0

    # ==== Test errors ====

    def test_explosive_recursion_is_evaluation_error(self):
        """Variance overflow is reported, not raised as a crash"""
        params = ArmaGarchParams(mu=0.0, gamma=1.0, alpha=(1e300,), beta=(0.0,))
        r = np.full(50, 1e10)
        r[::2] = -1e10
        with self.assertRaises(EvaluationError):
            filter_returns(ModelSpec(k=1, l=1), params, r)

    def test_non_finite_input(self):
        """NaN in the series is rejected"""
        r = self.returns.copy()
        r[5] = np.nan
        with self.assertRaises(DataValidationError):
            filter_returns(self.spec, self.params, r)

    def test_simulate_then_filter_round_trip(self):
        """Re-filtering a simulated GARCH path recovers its innovations"""
        spec = ModelSpec(k=1, l=1)
        params = ArmaGarchParams(mu=0.001, gamma=0.05, alpha=(0.05,), beta=(0.90,))
        path = simulate_path(spec, params, 3000, seed=5)
        out = filter_returns(spec, params, path.returns)
        np.testing.assert_allclose(out.eps[500:], path.innovations[500:], rtol=0, atol=1e-10)


class PitSeriesTest(SimpleTestCase):
    """Test suite for pit_series"""

    def test_zero_maps_to_half(self):
        """Normal PIT of 0 is 0.5"""
        np.testing.assert_array_equal(pit_series(Normal(), [0.0]), [0.5])

    def test_correct_model_is_uniform(self):
        """PIT of correctly specified residuals passes KS"""
        eps = StudentT(nu=5.0).rvs(3000, np.random.default_rng(8))
        p_value = stats.kstest(pit_series(StudentT(nu=5.0), eps), "uniform").pvalue
        self.assertGreater(p_value, 0.001)

    @pytest.mark.slow
    def test_misspecified_law_is_rejected(self):
        """t_3 residuals through the Normal CDF fail KS at T=5000"""
        rejections = 0
        for seed in range(20):
            eps = StudentT(nu=3.0).rvs(5000, np.random.default_rng(seed))
            if stats.kstest(pit_series(Normal(), eps), "uniform").pvalue < 0.05:
                rejections += 1
        self.assertGreaterEqual(rejections, 19)
