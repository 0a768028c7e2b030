"""
Unit Tests for CopulaFittingService
"""

import math

import numpy as np
import pytest
from django.test import SimpleTestCase

from common.exceptions import InfeasibleFitError, ParameterError
from copula.constants import CopulaFamily, CopulaLimits, EstimationMethod
from copula.empirical import pseudo_obs
from copula.families import FrankKernel, JoeKernel, copula_sample
from copula.services import (
    CopulaFittingService,
    copula_aic_bic,
    copula_loglik,
    fit_copula,
    fit_inverse_tau,
    fit_mle,
)
from copula.types import CopulaModel


def simulated(model, n, seed):
    """Helper: ranks of a copula sample"""
    draw = copula_sample(model, n, seed=seed)
    return pseudo_obs(draw.u, draw.v)


class InverseTauTest(SimpleTestCase):
    """Test suite for fit_inverse_tau"""

    def setUp(self):
        self.s = simulated(CopulaModel(CopulaFamily.GAUSSIAN, theta=0.5), 200, seed=1)

    def test_clayton_closed_form(self):
        """tau = 0.5 gives theta = 2"""
        m = CopulaFittingService.fit_inverse_tau(CopulaFamily.CLAYTON, self.s, tau_hat=0.5)
        self.assertAlmostEqual(m.theta, 2.0, places=12)

    def test_gumbel_closed_form(self):
        """tau = 0.5 gives theta = 2"""
        m = CopulaFittingService.fit_inverse_tau(CopulaFamily.GUMBEL, self.s, tau_hat=0.5)
        self.assertAlmostEqual(m.theta, 2.0, places=12)

    def test_gaussian_closed_form(self):
        """tau = 0.111 gives rho = 0.174"""
        m = CopulaFittingService.fit_inverse_tau(CopulaFamily.GAUSSIAN, self.s, tau_hat=0.111)
        self.assertAlmostEqual(m.rho, 0.174, places=3)

    def test_frank_round_trip(self):
        """Inverting tau(theta) recovers theta for both signs"""
        for theta in (5.0, -3.0, 0.5):
            tau = FrankKernel.tau(theta)
            m = CopulaFittingService.fit_inverse_tau(CopulaFamily.FRANK, self.s, tau_hat=tau)
            self.assertAlmostEqual(m.theta, theta, delta=1e-8)

    def test_joe_round_trip(self):
        """Inverting tau(theta) recovers theta"""
        for theta in (1.5, 3.0, 8.0):
            m = CopulaFittingService.fit_inverse_tau(CopulaFamily.JOE, self.s, tau_hat=JoeKernel.tau(theta))
            self.assertAlmostEqual(m.theta, theta, delta=1e-8)

    def test_joe_zero_tau_is_independence(self):
        """tau = 0 maps to theta = 1"""
        m = CopulaFittingService.fit_inverse_tau(CopulaFamily.JOE, self.s, tau_hat=0.0)
        self.assertEqual(m.theta, 1.0)

    def test_negative_tau_infeasible(self):
        """Clayton and Gumbel cannot represent negative dependence"""
        for family in (CopulaFamily.CLAYTON, CopulaFamily.GUMBEL, CopulaFamily.JOE):
            with self.assertRaises(InfeasibleFitError):
                CopulaFittingService.fit_inverse_tau(family, self.s, tau_hat=-0.2)

    def test_frank_zero_tau_infeasible(self):
        """Frank theta = 0 is excluded"""
        with self.assertRaises(InfeasibleFitError):
            CopulaFittingService.fit_inverse_tau(CopulaFamily.FRANK, self.s, tau_hat=0.0)

    def test_clayton_theta_capped(self):
        """tau close to 1 is capped at the domain bound"""
        m = CopulaFittingService.fit_inverse_tau(CopulaFamily.CLAYTON, self.s, tau_hat=0.99)
        self.assertEqual(m.theta, CopulaLimits.CLAYTON_THETA[1])

    def test_gaussian_comonotone_capped(self):
        """tau = 1 gives rho at the cap"""
        m = CopulaFittingService.fit_inverse_tau(CopulaFamily.GAUSSIAN, self.s, tau_hat=1.0)
        self.assertEqual(m.rho, CopulaLimits.RHO_MAX)

    def test_uses_sample_tau(self):
        """Without tau_hat the sample's Kendall tau is inverted"""
        m = fit_inverse_tau(CopulaFamily.GAUSSIAN, self.s)
        self.assertAlmostEqual(m.rho, 0.5, delta=0.1)

    def test_t_copula_nu_in_bounds(self):
        """The profile nu stays inside its box"""
        m = fit_inverse_tau(CopulaFamily.STUDENT_T, self.s)
        self.assertGreaterEqual(m.nu, CopulaLimits.T_NU[0])
        self.assertLessEqual(m.nu, CopulaLimits.T_NU[1])

    def test_unknown_family(self):
        """Unknown family names are rejected"""
        with self.assertRaises(ParameterError):
            fit_inverse_tau("bb1", self.s)


class MaximumLikelihoodTest(SimpleTestCase):
    """Test suite for fit_mle, copula_loglik and copula_aic_bic"""

    def test_independent_has_zero_loglik(self):
        """The independence copula has loglik 0 and AIC 0"""
        s = simulated(CopulaModel(CopulaFamily.INDEPENDENT), 100, seed=2)
        fit = fit_copula(CopulaFamily.INDEPENDENT, s, method=EstimationMethod.MLE)
        self.assertEqual(fit.loglik, 0.0)
        self.assertEqual(fit.aic, 0.0)
        self.assertEqual(fit.bic, 0.0)

    def test_aic_bic_penalties(self):
        """A one-parameter model at zero loglik scores (2, ln T)"""
        s = simulated(CopulaModel(CopulaFamily.INDEPENDENT), 100, seed=3)
        m = CopulaModel(CopulaFamily.CLAYTON, theta=1.0)
        aic, bic = CopulaFittingService.aic_bic(m, s, loglik=0.0)
        self.assertEqual(aic, 2.0)
        self.assertAlmostEqual(bic, math.log(100), places=14)

    def test_aic_bic_from_loglik(self):
        """copula_aic_bic evaluates the likelihood when not given"""
        s = simulated(CopulaModel(CopulaFamily.FRANK, theta=4.0), 150, seed=4)
        m = CopulaModel(CopulaFamily.FRANK, theta=4.0)
        ll = copula_loglik(m, s)
        aic, bic = copula_aic_bic(m, s)
        self.assertAlmostEqual(aic, 2.0 - 2.0 * ll, places=10)
        self.assertAlmostEqual(bic, math.log(150) - 2.0 * ll, places=10)

    def test_gaussian_comonotone_is_capped(self):
        """Identical ranks give a boundary rho instead of an error"""
        x = np.random.default_rng(5).normal(size=100)
        m = fit_mle(CopulaFamily.GAUSSIAN, pseudo_obs(x, x))
        self.assertLessEqual(m.rho, CopulaLimits.RHO_MAX)
        self.assertGreater(m.rho, 0.99)

    def test_gaussian_recovery(self):
        """rho = 0.5 recovered within 0.05 at n = 2000"""
        s = simulated(CopulaModel(CopulaFamily.GAUSSIAN, theta=0.5), 2000, seed=6)
        self.assertAlmostEqual(fit_mle(CopulaFamily.GAUSSIAN, s).rho, 0.5, delta=0.05)

    def test_mle_beats_itau_in_likelihood(self):
        """The MLE is at least as likely as the inverse-tau estimate"""
        s = simulated(CopulaModel(CopulaFamily.GUMBEL, theta=1.8), 500, seed=7)
        itau = fit_copula(CopulaFamily.GUMBEL, s, method=EstimationMethod.ITAU)
        mle = fit_copula(CopulaFamily.GUMBEL, s, method=EstimationMethod.MLE)
        self.assertGreaterEqual(mle.loglik, itau.loglik - 1e-8)

    def test_fit_reports_information_criteria(self):
        """AIC = 2k - 2 loglik on the returned fit"""
        s = simulated(CopulaModel(CopulaFamily.CLAYTON, theta=2.0), 300, seed=8)
        fit = fit_copula(CopulaFamily.CLAYTON, s, method=EstimationMethod.ITAU)
        self.assertAlmostEqual(fit.aic, 2.0 - 2.0 * fit.loglik, places=10)
        self.assertEqual(fit.n_obs, 300)
        self.assertEqual(fit.as_dict()["family"], CopulaFamily.CLAYTON)
        self.assertEqual(fit.as_dict()["theta"], fit.model.theta)

    def test_unknown_method(self):
        """Unknown estimation methods are rejected"""
        s = simulated(CopulaModel(CopulaFamily.INDEPENDENT), 50, seed=9)
        with self.assertRaises(ParameterError):
            fit_copula(CopulaFamily.GAUSSIAN, s, method="moments")

    def test_both_is_a_run_setting(self):
        """The run setting both expands to the two estimators and is not a fit method"""
        self.assertEqual(EstimationMethod.expand(EstimationMethod.BOTH), (EstimationMethod.ITAU, EstimationMethod.MLE))
        self.assertEqual(EstimationMethod.expand(EstimationMethod.MLE), (EstimationMethod.MLE,))
        s = simulated(CopulaModel(CopulaFamily.INDEPENDENT), 50, seed=9)
        with self.assertRaises(ParameterError):
            fit_copula(CopulaFamily.GAUSSIAN, s, method=EstimationMethod.BOTH)

    @pytest.mark.slow
    def test_clayton_recovery(self):
        """theta = 2 recovered in [1.9, 2.1] at n = 20000 by both estimators"""
        s = simulated(CopulaModel(CopulaFamily.CLAYTON, theta=2.0), 20_000, seed=10)
        self.assertTrue(1.9 <= fit_inverse_tau(CopulaFamily.CLAYTON, s).theta <= 2.1)
        self.assertTrue(1.9 <= fit_mle(CopulaFamily.CLAYTON, s).theta <= 2.1)

    @pytest.mark.slow
    def test_t_copula_recovery(self):
        """rho = 0.6, nu = 4 recovered at n = 3000"""
        s = simulated(CopulaModel(CopulaFamily.STUDENT_T, theta=0.6, nu=4.0), 3000, seed=11)
        m = fit_mle(CopulaFamily.STUDENT_T, s)
        self.assertAlmostEqual(m.rho, 0.6, delta=0.05)
        self.assertTrue(2.5 <= m.nu <= 7.0)
