"""
Unit Tests for innovation distributions
Tests densities, CDFs, quantiles, sampling and GH standardization
"""

import math
from unittest import mock

import numpy as np
import pytest
from django.test import SimpleTestCase
from scipy import integrate

from common.exceptions import EvaluationError, ParameterError
from dists.constants import DistributionFamily, DistributionLimits
from dists.distributions import (
    GED,
    SGHYD,
    Normal,
    StudentT,
    cdf,
    make_distribution,
    pdf,
    quantile,
    sample,
    standardize_gh,
)


def moment(d, power):
    """Helper: E[X^power] by quadrature"""
    value, _ = integrate.quad(lambda x: x ** power * float(d.pdf(x)), -np.inf, np.inf,
                              epsabs=1e-12, epsrel=1e-10, limit=400)
    return value


class DistributionsTest(SimpleTestCase):
    """Test suite for the four innovation families"""

    def setUp(self):
        self.grid = [
            Normal(),
            StudentT(nu=3.3629),
            StudentT(nu=8.0),
            GED(shape=1.2),
            GED(shape=2.0),
            SGHYD(shape=0.0035, skew=0.3665),
            SGHYD(shape=-0.0327, skew=-1.1811),
        ]

    # ==== Test standardization ====

    def test_unit_variance_and_zero_mean(self):
        """Every family is standardized"""
        for d in self.grid:
            with self.subTest(dist=d.label):
                self.assertLess(abs(moment(d, 0) - 1.0), 1e-8)
                self.assertLess(abs(moment(d, 1)), 1e-6)
                self.assertLess(abs(moment(d, 2) - 1.0), 1e-4)

    # ==== Test pdf/cdf/quantile ====

    def test_normal_cdf_symmetry(self):
        """Normal cdf(0) = 0.5"""
        self.assertEqual(cdf(Normal(), 0.0), 0.5)

    def test_student_median(self):
        """Standardized t median is 0"""
        self.assertAlmostEqual(quantile(StudentT(nu=3.363), 0.5), 0.0, places=12)

    def test_ged_shape_two_is_normal(self):
        """GED(2) coincides with the standard normal"""
        x = np.linspace(-6.0, 6.0, 241)
        np.testing.assert_allclose(pdf(GED(shape=2.0), x), pdf(Normal(), x), rtol=0, atol=1e-10)
        np.testing.assert_allclose(cdf(GED(shape=2.0), x), cdf(Normal(), x), rtol=0, atol=1e-10)

    def test_student_density_matches_scaled_t(self):
        """Density equals t_nu scaled by sqrt(nu/(nu-2))"""
        from scipy import stats
        nu = 5.0
        s = math.sqrt(nu / (nu - 2.0))
        x = np.linspace(-5.0, 5.0, 21)
        np.testing.assert_allclose(pdf(StudentT(nu=nu), x), stats.t.pdf(x * s, nu) * s, rtol=1e-12)

    def test_cdf_monotone(self):
        """CDFs are nondecreasing"""
        x = np.linspace(-6.0, 6.0, 61)
        for d in self.grid:
            with self.subTest(dist=d.label):
                self.assertTrue(np.all(np.diff(np.asarray(cdf(d, x))) >= 0.0))

    def test_cdf_matches_integrated_pdf(self):
        """SGHYD quadrature CDF agrees with direct integration"""
        d = SGHYD(shape=0.25, skew=0.3665)
        for x in (-3.0, -0.4, 0.0, 1.7):
            direct, _ = integrate.quad(lambda t: float(d.pdf(t)), -np.inf, x, epsabs=1e-13, epsrel=1e-12)
            self.assertAlmostEqual(float(cdf(d, x)), direct, places=9)

    def test_quantile_outside_bracket_raises(self):
        """A quantile beyond the search bracket is an error, not the bracket edge"""
        d = SGHYD(shape=0.25, skew=0.3665)
        with mock.patch.object(DistributionLimits, "QUANTILE_MAX_BRACKET", 2.0):
            with self.assertRaises(EvaluationError):
                d.ppf(1e-6)
            with self.assertRaises(EvaluationError):
                d.ppf(1 - 1e-6)
            self.assertTrue(-2.0 < d.ppf(0.5) < 2.0)

    def test_quantile_inverts_cdf(self):
        """cdf(quantile(p)) = p"""
        probs = [1e-4, 0.01, 0.2, 0.5, 0.8, 0.99, 1 - 1e-4]
        for d in self.grid:
            for p in probs:
                with self.subTest(dist=d.label, p=p):
                    self.assertAlmostEqual(float(cdf(d, quantile(d, p))), p, delta=1e-8)

    def test_quantile_of_cdf_identity(self):
        """quantile∘cdf is the identity on (-6, 6)"""
        x = np.linspace(-5.5, 5.5, 12)
        for d in self.grid:
            with self.subTest(dist=d.label):
                back = np.asarray(quantile(d, np.asarray(cdf(d, x))))
                np.testing.assert_allclose(back, x, atol=1e-6)

    def test_quantile_rejects_boundaries(self):
        """p must lie strictly inside (0, 1)"""
        with self.assertRaises(ParameterError):
            quantile(Normal(), 1.0)

    # ==== Test parameters ====

    def test_invalid_parameters(self):
        """nu <= 2 and non-positive shape are rejected"""
        with self.assertRaises(ParameterError):
            StudentT(nu=2.0)
        with self.assertRaises(ParameterError):
            GED(shape=0.0)
        with self.assertRaises(ParameterError):
            SGHYD(shape=float("nan"), skew=0.0)

    def test_make_distribution(self):
        """Factory builds from family tag"""
        d = make_distribution(DistributionFamily.STUDENT_T, {"nu": 5.0})
        self.assertEqual(d, StudentT(nu=5.0))
        with self.assertRaises(ParameterError):
            make_distribution("skewt")

    def test_from_vector_keeps_fixed_index(self):
        """SGHYD vector round trip keeps the fixed GH index"""
        d = SGHYD(shape=0.1, skew=0.2, index=-0.5)
        rebuilt = SGHYD.from_vector(d.param_vector(), **d.fixed_params())
        self.assertEqual(rebuilt, d)

    # ==== Test sampling ====

    def test_sampling_reproducible(self):
        """Same seed, same draws"""
        for d in self.grid:
            with self.subTest(dist=d.label):
                np.testing.assert_array_equal(sample(d, 100, seed=7), sample(d, 100, seed=7))

    @pytest.mark.slow
    def test_sample_moments(self):
        """Sample mean and variance within 4 Monte Carlo standard errors"""
        n = 10 ** 6
        for i, d in enumerate(self.grid):
            with self.subTest(dist=d.label):
                x = sample(d, n, seed=100 + i)
                self.assertLess(abs(x.mean()), 4.0 / math.sqrt(n))
                fourth = moment(d, 4) if not isinstance(d, StudentT) or d.nu > 4.0 else None
                if fourth is not None:
                    se_var = math.sqrt((fourth - 1.0) / n)
                    self.assertLess(abs(x.var() - 1.0), 4.0 * se_var)

    @pytest.mark.slow
    def test_gold_sghyd_sample_mean(self):
        """SGHYD with the gold parameters has sample mean 0 ± 0.01"""
        x = sample(SGHYD(shape=0.0035, skew=0.3665), 10 ** 6, seed=2018)
        self.assertLess(abs(x.mean()), 0.01)


class StandardizeGHTest(SimpleTestCase):
    """Test suite for standardize_gh"""

    def test_symmetric_case(self):
        """skew=0 gives beta=0 and mu=0"""
        for shape in (-2.0, 0.0, 0.25, 3.0):
            gh = standardize_gh(shape=shape, skew=0.0)
            self.assertEqual(gh.beta, 0.0)
            self.assertEqual(gh.mu, 0.0)

    def test_analytic_moments(self):
        """Returned parameters have analytic mean 0 and variance 1"""
        for shape, skew in [(0.25, 0.3665), (-1.0, -1.1811), (2.0, 2.5)]:
            gh = standardize_gh(shape=shape, skew=skew)
            self.assertAlmostEqual(gh.mean(), 0.0, places=12)
            self.assertAlmostEqual(gh.variance(), 1.0, places=12)

    def test_quadrature_moments(self):
        """Numerically integrated mean 0 ± 1e-6 and variance 1 ± 1e-4"""
        d = SGHYD(shape=0.25, skew=0.3665)
        self.assertLess(abs(moment(d, 1)), 1e-6)
        self.assertLess(abs(moment(d, 2) - 1.0), 1e-4)

    def test_alpha_exceeds_beta(self):
        """alpha > |beta| and delta > 0 always hold"""
        gh = standardize_gh(shape=-3.0, skew=-2.9)
        self.assertGreater(gh.alpha, abs(gh.beta))
        self.assertGreater(gh.delta, 0.0)
