"""
Unit Tests for SyntheticService
"""

import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from common.exceptions import ParameterError
from copula.empirical import kendall_tau, pseudo_obs
from pipeline.constants import Calendar
from pipeline.ingestion import align_by_date, parse_price_csv
from pipeline.services import SyntheticService, simulate_panel, write_price_files


class SimulatePanelTest(SimpleTestCase):
    """Test suite for simulate_panel"""

    def test_shapes_and_dates(self):
        """n_obs returns mean n_obs + 1 business-day prices per asset"""
        panel = simulate_panel(200, n_assets=3, seed=5, burn_in=100)
        self.assertEqual(panel.labels, ["asset1", "asset2", "asset3"])
        for s in panel.series:
            self.assertEqual(s.n, 201)
            self.assertTrue(all(d.weekday() < 5 for d in s.dates))
            self.assertAlmostEqual(s.prices[0], 100.0)
        self.assertEqual(panel.uniforms.shape, (200, 3))

    def test_seeded(self):
        """Same seed, same prices"""
        first = simulate_panel(100, n_assets=2, seed=9, burn_in=50)
        second = simulate_panel(100, n_assets=2, seed=9, burn_in=50)
        other = simulate_panel(100, n_assets=2, seed=10, burn_in=50)
        np.testing.assert_array_equal(first.series[0].prices, second.series[0].prices)
        self.assertFalse(np.array_equal(first.series[0].prices, other.series[0].prices))

    def test_gaussian_dependence_recovered(self):
        """Kendall's tau of the draws is near 2/pi asin(rho)"""
        panel = simulate_panel(3000, n_assets=2, rho=0.5, seed=1, burn_in=50)
        tau = kendall_tau(pseudo_obs(panel.uniforms[:, 0], panel.uniforms[:, 1]))
        self.assertAlmostEqual(tau, 2.0 / np.pi * np.arcsin(0.5), delta=0.04)

    def test_bivariate_family(self):
        """Archimedean families couple two assets"""
        panel = simulate_panel(2000, n_assets=2, family="clayton", theta=2.0, seed=4, burn_in=50)
        tau = kendall_tau(pseudo_obs(panel.uniforms[:, 0], panel.uniforms[:, 1]))
        self.assertAlmostEqual(tau, 0.5, delta=0.05)
        self.assertEqual(panel.truth["family"], "clayton")

    def test_invalid_requests(self):
        """Bad sizes and parameters are rejected"""
        with self.assertRaises(ParameterError):
            simulate_panel(100, n_assets=1)
        with self.assertRaises(ParameterError):
            simulate_panel(100, n_assets=3, family="clayton", theta=2.0)
        with self.assertRaises(ParameterError):
            simulate_panel(100, n_assets=3, rho=-0.6)
        with self.assertRaises(ParameterError):
            simulate_panel(100, n_assets=2, labels=["a"])

    def test_uniforms_open_interval(self):
        """Copula draws stay inside (0, 1)"""
        u = SyntheticService.draw_uniforms(500, 2, "gumbel", 0.0, 3.0, None, seed=2)
        self.assertTrue(np.all((u > 0.0) & (u < 1.0)))


class WritePriceFilesTest(SimpleTestCase):
    """Test suite for write_price_files"""

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.dir = Path(self._tmp.name)
        self.panel = simulate_panel(60, n_assets=2, labels=["gold", "tse"], seed=8, burn_in=20)

    def test_read_back(self):
        """Written files parse back to the same dates and prices"""
        paths = write_price_files(self.panel, self.dir)
        self.assertEqual([p.name for p in paths], ["gold.csv", "tse.csv"])
        gold = parse_price_csv(paths[0], label="gold")
        self.assertEqual(gold.dates, self.panel.series[0].dates)
        np.testing.assert_allclose(gold.prices, self.panel.series[0].prices, rtol=1e-9)

    def test_jalali_file(self):
        """A Jalali file aligns with its Gregorian partner on every date"""
        paths = write_price_files(self.panel, self.dir, calendars={"tse": Calendar.JALALI})
        first_line = paths[1].read_text(encoding="utf-8").splitlines()[1]
        self.assertRegex(first_line, r"^1384/01/01,")
        gold = parse_price_csv(paths[0], label="gold")
        tse = parse_price_csv(paths[1], label="tse", calendar=Calendar.JALALI)
        panel = align_by_date(gold, tse)
        self.assertEqual(panel.n_obs, 60)
