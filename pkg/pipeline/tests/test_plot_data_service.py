"""
Unit Tests for PlotDataService
"""

import math
import tempfile
from pathlib import Path

import numpy as np
import pandas as pd
from django.test import SimpleTestCase

from common.exceptions import DataValidationError
from dists.distributions import Normal
from pipeline.services import acf_data, emit_plot_data, qq_data
from pipeline.services.synthetic_service import default_margin, default_spec
from tsmodel.services import fit, simulate


class QqDataTest(SimpleTestCase):
    """Test suite for qq_data"""

    def setUp(self):
        self.eps = np.random.default_rng(0).standard_normal(300)

    def test_columns_and_order(self):
        """Empirical quantiles are sorted residuals"""
        frame = qq_data(Normal(), self.eps)
        self.assertEqual(list(frame.columns), ["order", "probability", "theoretical", "empirical", "lower", "upper"])
        self.assertEqual(len(frame), 300)
        np.testing.assert_array_equal(frame["empirical"], np.sort(self.eps))
        self.assertTrue(np.all(np.diff(frame["theoretical"]) > 0))

    def test_bands_contain_theoretical(self):
        """Pointwise bands bracket the fitted quantile"""
        frame = qq_data(Normal(), self.eps)
        self.assertTrue(np.all(frame["lower"] <= frame["theoretical"] + 1e-12))
        self.assertTrue(np.all(frame["theoretical"] <= frame["upper"] + 1e-12))

    def test_thinning(self):
        """Long series are thinned to at most 500 points"""
        eps = np.random.default_rng(1).standard_normal(2000)
        frame = qq_data(Normal(), eps)
        self.assertLessEqual(len(frame), 500)
        self.assertEqual(frame["order"].iloc[0], 1)
        self.assertEqual(frame["order"].iloc[-1], 2000)

    def test_non_finite_rejected(self):
        """NaN residuals are a validation error"""
        with self.assertRaises(DataValidationError):
            qq_data(Normal(), [0.1, float("nan"), 0.3])


class AcfDataTest(SimpleTestCase):
    """Test suite for acf_data"""

    def test_band_and_lags(self):
        """Band is 2/sqrt(T) for lags 1..max_lag"""
        eps = np.random.default_rng(2).standard_normal(400)
        frame = acf_data(eps, max_lag=10)
        self.assertEqual(list(frame.columns), ["lag", "acf_eps", "acf_eps_sq", "band"])
        self.assertEqual(list(frame["lag"]), list(range(1, 11)))
        self.assertTrue(np.allclose(frame["band"], 2.0 / math.sqrt(400)))
        self.assertTrue(np.all(np.abs(frame["acf_eps"]) <= 1.0))

    def test_short_series_caps_lag(self):
        """max_lag is capped at T - 1"""
        frame = acf_data([0.1, -0.2, 0.3, -0.1, 0.2], max_lag=20)
        self.assertEqual(len(frame), 4)


class EmitPlotDataTest(SimpleTestCase):
    """Test suite for emit_plot_data"""

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.dir = Path(self._tmp.name)

    def test_files_per_asset(self):
        """qq and acf files are written for every fitted model"""
        r = simulate(default_spec(), default_margin(), 600, seed=12)
        paths = emit_plot_data({"gold": fit(default_spec(), r)}, self.dir)
        self.assertEqual([p.name for p in paths], ["qq_gold.csv", "acf_gold.csv"])
        acf_frame = pd.read_csv(paths[1])
        self.assertEqual(len(acf_frame), 20)

    def test_empty_input(self):
        """No fitted models is a validation error"""
        with self.assertRaises(DataValidationError):
            emit_plot_data({}, self.dir)
