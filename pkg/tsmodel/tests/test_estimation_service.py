"""
Unit Tests for EstimationService
Tests maximum likelihood fits, information criteria and the long-memory test
"""

import math

import numpy as np
import pytest
from django.test import SimpleTestCase

from common.exceptions import DegenerateDataError
from tsmodel.services import fit, long_memory_test, simulate
from tsmodel.types import ArmaGarchParams, ModelSpec


class EstimationServiceTest(SimpleTestCase):
    """Test suite for fit"""

    def setUp(self):
        self.spec = ModelSpec(k=1, l=1)
        self.true_params = ArmaGarchParams(mu=0.0, gamma=0.05, alpha=(0.05,), beta=(0.90,))
        self.returns = simulate(self.spec, self.true_params, 2000, seed=42)

    # ==== Test fit() ====

    def test_information_criteria_identities(self):
        """aic and bic follow from loglik and parameter count"""
        fitted = fit(self.spec, self.returns)
        k = fitted.n_params
        self.assertEqual(fitted.aic, 2 * k - 2 * fitted.loglik)
        self.assertEqual(fitted.bic, k * math.log(len(self.returns)) - 2 * fitted.loglik)

    def test_fit_is_deterministic(self):
        """Same data and spec give the same estimates"""
        first = fit(self.spec, self.returns)
        second = fit(self.spec, self.returns)
        self.assertEqual(first.estimates(), second.estimates())

    def test_loglik_matches_filter(self):
        """Reported loglik is the filter likelihood at the estimates"""
        from tsmodel.services import filter_returns
        fitted = fit(self.spec, self.returns)
        self.assertEqual(fitted.loglik, filter_returns(self.spec, fitted.params, self.returns).loglik)

    def test_constraints_hold_at_optimum(self):
        """Estimates satisfy positivity and stationarity"""
        fitted = fit(self.spec, self.returns)
        fitted.params.validate()
        self.assertLess(fitted.params.persistence, 1.0)

    def test_param_table(self):
        """Parameter table lists every parameter with Wald statistics"""
        fitted = fit(ModelSpec(k=1, l=1, dist="std"), self.returns)
        table = fitted.param_table()
        self.assertEqual(list(table["parameter"]), ["mu", "gamma", "alpha1", "beta1", "nu"])
        self.assertEqual(list(table.columns), ["parameter", "estimate", "stderr", "t_value", "p_value"])

    def test_constant_series_is_degenerate(self):
        """Zero variance input fails with a degenerate-data error"""
        with self.assertRaises(DegenerateDataError):
            fit(self.spec, np.full(500, 0.01))

    def test_short_series_is_degenerate(self):
        """Fewer than the minimum observations are rejected"""
        with self.assertRaises(DegenerateDataError):
            fit(self.spec, self.returns[:20])

    # ==== Test recovery ====

    @pytest.mark.slow
    def test_garch_recovery(self):
        """Median (alpha, beta) over 10 seeds within 0.03 of the truth"""
        alphas, betas = [], []
        for seed in range(10):
            r = simulate(self.spec, self.true_params, 5000, seed=1000 + seed)
            fitted = fit(self.spec, r)
            alphas.append(fitted.params.alpha[0])
            betas.append(fitted.params.beta[0])
        self.assertLess(abs(np.median(alphas) - 0.05), 0.03)
        self.assertLess(abs(np.median(betas) - 0.90), 0.03)

    def test_ar_recovery(self):
        """AR(1) coefficient recovered at T=5000"""
        spec = ModelSpec(p=1, k=0, l=0)
        r = simulate(spec, ArmaGarchParams(mu=0.0, phi=(0.5,), gamma=1.0), 5000, seed=9)
        fitted = fit(spec, r)
        self.assertLess(abs(fitted.params.phi[0] - 0.5), 0.05)
        self.assertTrue(fitted.all_significant())


class LongMemoryTest(SimpleTestCase):
    """Test suite for long_memory_test"""

    def test_fractional_series(self):
        """d is estimated inside its domain with a valid p value"""
        spec = ModelSpec(p=1, q=1, k=1, l=1, fractional=True, dist="std")
        from dists.distributions import StudentT
        params = ArmaGarchParams(
            mu=0.0, phi=(0.2,), theta=(-0.1,), gamma=0.05, alpha=(0.05,), beta=(0.9,), d=0.2, dist=StudentT(nu=6.0),
        )
        r = simulate(spec, params, 1500, seed=17)
        result = long_memory_test(r, dist="std")
        self.assertGreaterEqual(result.d, 0.0)
        self.assertLess(result.d, 0.5)
        if math.isfinite(result.p_value):
            self.assertGreaterEqual(result.p_value, 0.0)
            self.assertLessEqual(result.p_value, 1.0)
        self.assertEqual(set(result.to_dict()), {"d", "stderr", "statistic", "p_value"})
