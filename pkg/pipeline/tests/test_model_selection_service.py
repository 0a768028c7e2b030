"""
Unit Tests for ModelSelectionService
Tests gate filtering, ranking order and selection on simulated returns
"""

import math

import pytest
from django.test import SimpleTestCase
from joblib import parallel_backend

from common.exceptions import TailDepError
from pipeline.services import CandidateResult, ModelSelectionService, select_model
from pipeline.services.synthetic_service import default_margin, default_spec
from tsmodel.services import simulate
from tsmodel.types import ModelSpec


def candidate(spec, bic, aic, passes=True, fitted=object(), error=""):
    """Helper: scored candidate without an actual fit"""
    scores = {
        "spec": spec.label,
        "dist": spec.dist,
        "n_params": spec.n_params,
        "loglik": -bic / 2.0,
        "aic": aic,
        "bic": bic,
        "converged": fitted is not None,
        "all_significant": True,
        "lb_min_p": 0.5,
        "lb_sq_min_p": 0.5,
        "pit_ks_p": 0.5,
        "passes_gates": passes,
        "error": error,
    }
    return CandidateResult(spec=spec, fitted=fitted, scores=scores)


class RankTest(SimpleTestCase):
    """Test suite for ModelSelectionService.rank"""

    def setUp(self):
        self.small = ModelSpec(p=0, q=0)
        self.ar = ModelSpec(p=1, q=0)
        self.arma = ModelSpec(p=1, q=1)

    def test_lowest_bic_wins(self):
        """Passing candidates are ordered by BIC"""
        results = [candidate(self.small, 110.0, 100.0), candidate(self.ar, 105.0, 101.0), candidate(self.arma, 120.0, 90.0)]
        best, table = ModelSelectionService.rank(results)
        self.assertEqual(best, 1)
        self.assertEqual(list(table["rank"]), [2, 1, 3])
        self.assertEqual(list(table["selected"]), [False, True, False])

    def test_ties_broken_by_aic_then_size(self):
        """Equal BIC falls back to AIC, then to fewer parameters"""
        results = [candidate(self.arma, 100.0, 95.0), candidate(self.ar, 100.0, 95.0), candidate(self.small, 100.0, 96.0)]
        best, table = ModelSelectionService.rank(results)
        self.assertEqual(best, 1)
        self.assertEqual(list(table["rank"]), [2, 1, 3])

    def test_gates_come_first(self):
        """A failing candidate never outranks a passing one"""
        results = [candidate(self.small, 90.0, 90.0, passes=False), candidate(self.ar, 100.0, 100.0)]
        best, table = ModelSelectionService.rank(results)
        self.assertEqual(best, 1)
        self.assertEqual(table["rank"].iloc[1], 1)
        self.assertTrue(math.isnan(table["rank"].iloc[0]))

    def test_no_candidate_passes(self):
        """Without a passing candidate every fitted one is ranked"""
        results = [candidate(self.small, 90.0, 90.0, passes=False), candidate(self.ar, 80.0, 85.0, passes=False)]
        with self.assertLogs("pipeline.services.model_selection_service", level="WARNING"):
            best, table = ModelSelectionService.rank(results, label="gold")
        self.assertEqual(best, 1)
        self.assertEqual(list(table["rank"]), [2, 1])

    def test_failed_fits_are_unranked(self):
        """Candidates without a fit get no rank"""
        results = [
            candidate(self.small, float("nan"), float("nan"), passes=False, fitted=None, error="boom"),
            candidate(self.ar, 100.0, 100.0),
        ]
        best, table = ModelSelectionService.rank(results)
        self.assertEqual(best, 1)
        self.assertTrue(math.isnan(table["rank"].iloc[0]))
        self.assertEqual(table["error"].iloc[0], "boom")

    def test_nothing_usable(self):
        """No usable candidate gives no selection"""
        results = [candidate(self.small, float("nan"), float("nan"), passes=False, fitted=None)]
        best, table = ModelSelectionService.rank(results)
        self.assertIsNone(best)
        self.assertFalse(table["selected"].iloc[0])


class SelectModelTest(SimpleTestCase):
    """Test suite for select_model on simulated returns"""

    def setUp(self):
        self.returns = simulate(default_spec(), default_margin(), 1500, seed=3)

    def test_selection_table(self):
        """The grid is scored in order and one model is selected"""
        specs = [ModelSpec(p=0, q=0), ModelSpec(p=1, q=0)]
        selection = select_model(self.returns, specs, label="asset1")
        self.assertEqual(list(selection.table["spec"]), [s.label for s in specs])
        self.assertEqual(int(selection.table["selected"].sum()), 1)
        self.assertIn(selection.selected.spec, specs)
        row = selection.table[selection.table["selected"]].iloc[0]
        self.assertEqual(row["rank"], 1)
        self.assertAlmostEqual(row["bic"], selection.selected.bic)

    def test_scores_are_probabilities(self):
        """Gate p-values of a clean fit lie in [0, 1]"""
        selection = select_model(self.returns, [default_spec()])
        self.assertEqual(selection.table["error"].iloc[0], "")
        for column in ("lb_min_p", "lb_sq_min_p", "pit_ks_p"):
            self.assertGreaterEqual(selection.table[column].iloc[0], 0.0)
            self.assertLessEqual(selection.table[column].iloc[0], 1.0)

    def test_worker_count_does_not_change_selection(self):
        """Serial and parallel scoring agree"""
        specs = [ModelSpec(p=0, q=0), ModelSpec(p=0, q=1)]
        serial = select_model(self.returns, specs, n_jobs=1)
        with parallel_backend("threading"):
            parallel = select_model(self.returns, specs, n_jobs=2)
        self.assertEqual(list(serial.table["bic"]), list(parallel.table["bic"]))
        self.assertEqual(serial.selected.spec, parallel.selected.spec)

    def test_unfittable_series(self):
        """A constant series cannot be fitted by any candidate"""
        with self.assertRaises(TailDepError) as ctx:
            select_model([0.01] * 200, [ModelSpec(p=0, q=0)], label="flat")
        self.assertIn("flat", str(ctx.exception))

    @pytest.mark.slow
    def test_larger_grid(self):
        """Student-t candidates are scored alongside normal ones"""
        specs = [ModelSpec(p=p, q=0, dist=dist) for dist in ("norm", "std") for p in (0, 1)]
        selection = select_model(self.returns, specs)
        self.assertEqual(len(selection.table), 4)
        self.assertTrue(selection.table["converged"].any())
