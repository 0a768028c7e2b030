"""
Unit Tests for StatTestService
Tests ACF, Ljung-Box, KS uniformity, ADF and Engle-Granger
"""

import numpy as np
import pytest
from django.test import SimpleTestCase
from scipy import stats

from common.exceptions import DataValidationError, DegenerateDataError, ParameterError
from stattests.constants import TestMethod, TrendOption
from stattests.services import (
    TestResult,
    acf,
    adf,
    engle_granger,
    ks_uniform,
    ljung_box,
    pairwise_engle_granger,
)


class AcfTest(SimpleTestCase):
    """Test suite for acf"""

    def test_lag_zero_is_one(self):
        """rho_0 = 1 and the length is max_lag + 1"""
        x = np.random.default_rng(1).normal(size=200)
        rho = acf(x, 5)
        self.assertEqual(len(rho), 6)
        self.assertAlmostEqual(rho[0], 1.0, places=12)

    def test_alternating_series(self):
        """rho_1 of (-1)^t with T=8 is -7/8"""
        x = np.array([(-1.0) ** t for t in range(8)])
        self.assertAlmostEqual(acf(x, 1)[1], -0.875, places=12)

    def test_constant_series_is_degenerate(self):
        """Zero variance raises DegenerateDataError"""
        with self.assertRaises(DegenerateDataError):
            acf(np.full(30, 2.5), 3)

    def test_lag_too_large(self):
        """max_lag >= T is rejected"""
        with self.assertRaises(DataValidationError):
            acf(np.arange(5.0), 5)

    @pytest.mark.slow
    def test_iid_lag_one_within_band(self):
        """|rho_1| < 3/sqrt(T) for iid data in nearly every replication"""
        n, inside = 10_000, 0
        for seed in range(200):
            x = np.random.default_rng(seed).normal(size=n)
            if abs(acf(x, 1)[1]) < 3.0 / np.sqrt(n):
                inside += 1
        self.assertGreaterEqual(inside, 197)


class LjungBoxTest(SimpleTestCase):
    """Test suite for ljung_box"""

    def test_alternating_series_statistic(self):
        """Q = 8.75 for (-1)^t, T=8, one lag"""
        x = np.array([(-1.0) ** t for t in range(8)])
        result = ljung_box(x, 1)
        self.assertAlmostEqual(result.statistic, 8.75, places=10)
        self.assertAlmostEqual(result.p_value, stats.chi2.sf(8.75, 1), places=10)
        self.assertEqual(result.lag, 1)
        self.assertEqual(result.method, TestMethod.LJUNG_BOX)

    def test_affine_invariance(self):
        """Q is unchanged by x -> 3x + 7"""
        x = np.random.default_rng(4).normal(size=300)
        self.assertAlmostEqual(ljung_box(x, 10).statistic, ljung_box(3.0 * x + 7.0, 10).statistic, places=8)

    def test_autocorrelated_series_rejected(self):
        """AR(1) with phi=0.6 is flagged at T=1000"""
        rng = np.random.default_rng(9)
        x = np.zeros(1000)
        for t in range(1, 1000):
            x[t] = 0.6 * x[t - 1] + rng.normal()
        self.assertTrue(ljung_box(x, 5).rejects(0.01))

    def test_constant_series_is_degenerate(self):
        """Zero variance raises DegenerateDataError"""
        with self.assertRaises(DegenerateDataError):
            ljung_box(np.zeros(40), 5)

    @pytest.mark.slow
    def test_size_under_null(self):
        """Rejection rate at 5% stays near nominal for iid data"""
        rejections = sum(
            ljung_box(np.random.default_rng(seed).normal(size=500), 10).p_value < 0.05 for seed in range(400)
        )
        self.assertLess(rejections / 400, 0.09)


class KsUniformTest(SimpleTestCase):
    """Test suite for ks_uniform"""

    def test_single_midpoint(self):
        """One observation at 0.5 gives D = 0.5"""
        result = ks_uniform([0.5])
        self.assertAlmostEqual(result.statistic, 0.5, places=12)
        self.assertTrue(0.0 <= result.p_value <= 1.0)

    def test_uniform_sample_accepted(self):
        """Uniform draws pass at the 1% level"""
        y = np.random.default_rng(2).uniform(size=2000)
        self.assertGreater(ks_uniform(y).p_value, 0.01)

    def test_skewed_sample_rejected(self):
        """Beta(2, 5) draws fail"""
        y = np.random.default_rng(2).beta(2.0, 5.0, size=2000)
        self.assertLess(ks_uniform(y).p_value, 1e-6)

    def test_empty_input(self):
        """Empty input is a validation error"""
        with self.assertRaises(DataValidationError):
            ks_uniform([])

    def test_values_outside_unit_interval(self):
        """Values outside [0, 1] are rejected"""
        with self.assertRaises(DataValidationError):
            ks_uniform([0.2, 1.3])


class AdfTest(SimpleTestCase):
    """Test suite for adf"""

    def setUp(self):
        self.rng = np.random.default_rng(21)

    def test_stationary_series_rejects_unit_root(self):
        """AR(1) with phi=0.5 rejects at 1%"""
        x = np.zeros(600)
        for t in range(1, 600):
            x[t] = 0.5 * x[t - 1] + self.rng.normal()
        result = adf(x, lags=1)
        self.assertLess(result.p_value, 0.01)
        self.assertEqual(result.lag, 1)
        self.assertEqual(result.extra["trend"], TrendOption.CONSTANT)

    def test_random_walk_statistic_above_critical(self):
        """A random walk does not reject at 1%"""
        x = np.cumsum(self.rng.normal(size=600))
        result = adf(x, lags=1)
        self.assertGreater(result.statistic, result.extra["crit_1%"])

    def test_trend_option(self):
        """Constant-plus-trend uses the matching critical values"""
        x = np.cumsum(self.rng.normal(size=300)) + 0.05 * np.arange(300)
        plain = adf(x, lags=1)
        trended = adf(x, lags=1, trend=TrendOption.CONSTANT_TREND)
        self.assertLess(trended.extra["crit_5%"], plain.extra["crit_5%"])

    def test_linear_ramp_is_degenerate(self):
        """x_t = t has constant differences"""
        with self.assertRaises(DegenerateDataError):
            adf(np.arange(100.0), lags=1)

    def test_too_short(self):
        """T <= lags + 10 is rejected"""
        with self.assertRaises(DataValidationError):
            adf(self.rng.normal(size=11), lags=1)

    def test_unknown_trend(self):
        """Only 'c' and 'ct' are accepted"""
        with self.assertRaises(DataValidationError):
            adf(self.rng.normal(size=100), trend="ctt")


class EngleGrangerTest(SimpleTestCase):
    """Test suite for engle_granger and pairwise_engle_granger"""

    def setUp(self):
        rng = np.random.default_rng(33)
        self.x = np.cumsum(rng.normal(size=800))
        self.y = 1.0 + 2.0 * self.x + rng.normal(size=800)
        self.z = np.cumsum(rng.normal(size=800))

    def test_cointegrated_pair(self):
        """y = 1 + 2x + noise is cointegrated"""
        result = engle_granger(self.x, self.y, lags=1)
        self.assertLess(result.p_value, 0.01)
        self.assertAlmostEqual(result.extra["slope"], 2.0, delta=0.05)
        self.assertEqual(result.method, TestMethod.ENGLE_GRANGER)

    def test_exact_linear_relation_is_degenerate(self):
        """Zero residuals raise DegenerateDataError"""
        with self.assertRaises(DegenerateDataError):
            engle_granger(self.x, 3.0 * self.x - 1.0)

    def test_length_mismatch(self):
        """Series of different lengths are rejected"""
        with self.assertRaises(DataValidationError):
            engle_granger(self.x, self.y[:-1])

    def test_pairwise_covers_every_pair(self):
        """Three series give three ordered pairs"""
        results = pairwise_engle_granger({"a": self.x, "b": self.y, "c": self.z})
        self.assertEqual([(a, b) for a, b, _ in results], [("a", "b"), ("a", "c"), ("b", "c")])
        self.assertLess(results[0][2].p_value, 0.01)

    @pytest.mark.slow
    def test_independent_walks_rarely_reject(self):
        """Independent random walks reject at 5% close to nominally"""
        rejections = 0
        for seed in range(200):
            rng = np.random.default_rng(1000 + seed)
            a = np.cumsum(rng.normal(size=400))
            b = np.cumsum(rng.normal(size=400))
            rejections += engle_granger(a, b).p_value < 0.05
        self.assertLess(rejections / 200, 0.10)


class TestResultTest(SimpleTestCase):
    """Test suite for TestResult"""

    def test_p_value_range_enforced(self):
        """p outside [0, 1] is refused"""
        with self.assertRaises(ParameterError):
            TestResult(statistic=1.0, p_value=1.5, lag=1, method=TestMethod.ADF)

    def test_to_dict_includes_extra(self):
        """Extra fields are merged into the dict"""
        result = TestResult(statistic=2.0, p_value=0.1, lag=3, method=TestMethod.ADF, extra={"trend": "c"})
        self.assertEqual(result.to_dict()["trend"], "c")
        self.assertFalse(result.rejects(0.05))
