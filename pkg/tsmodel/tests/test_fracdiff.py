"""
Unit Tests for fractional differencing
"""

import numpy as np
from django.test import SimpleTestCase

from common.exceptions import ParameterError
from tsmodel.fracdiff import fracdiff, fracdiff_coeffs, fracintegrate


class FracdiffCoeffsTest(SimpleTestCase):
    """Test suite for fracdiff_coeffs"""

    def test_identity_operator(self):
        """d=0 gives (1, 0, 0, 0)"""
        np.testing.assert_array_equal(fracdiff_coeffs(0.0, 4), [1.0, 0.0, 0.0, 0.0])

    def test_first_difference(self):
        """d=1 gives (1, -1, 0, 0)"""
        np.testing.assert_array_equal(fracdiff_coeffs(1.0, 4), [1.0, -1.0, 0.0, 0.0])

    def test_hand_evaluated_recursion(self):
        """d=0.142 gives (1, -0.142, -0.060918)"""
        np.testing.assert_allclose(fracdiff_coeffs(0.142, 3), [1.0, -0.142, -0.142 * 0.858 / 2.0], rtol=1e-15)

    def test_invalid_arguments(self):
        """|d| > 1 and n < 1 are rejected"""
        with self.assertRaises(ParameterError):
            fracdiff_coeffs(1.5, 3)
        with self.assertRaises(ParameterError):
            fracdiff_coeffs(0.2, 0)

    def test_zero_order_returns_copy(self):
        """fracdiff with d=0 is an exact copy"""
        x = np.random.default_rng(3).standard_normal(50)
        out = fracdiff(x, 0.0)
        np.testing.assert_array_equal(out, x)
        self.assertIsNot(out, x)

    def test_integration_inverts_differencing(self):
        """(1-B)^{-d} undoes (1-B)^d on a finite sample"""
        x = np.random.default_rng(4).standard_normal(300)
        np.testing.assert_allclose(fracintegrate(fracdiff(x, 0.3), 0.3), x, atol=1e-10)
