"""
Model Selection Service - Fit a grid of marginal models and pick one.

Each candidate is fitted by maximum likelihood and scored. A candidate
passes the gates when its standardized residuals show no remaining
autocorrelation in levels or squares (Ljung-Box p > alpha at every
configured lag) and its probability integral transform is uniform
(KS p >= alpha). Passing candidates are ranked by BIC, then AIC, then
fewer parameters. When none passes, all converged candidates are ranked
the same way and a warning is logged.

Candidates are fitted in parallel with joblib and merged in grid order,
so the selection does not depend on the number of workers.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from common.exceptions import TailDepError
from common.utils import resolve_n_jobs, taildep_setting
from stattests.services import ks_uniform, ljung_box
from tsmodel.services import fit, pit_series
from tsmodel.types import FittedModel, ModelSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CandidateResult:
    """One fitted candidate with its scores (fitted is None when the fit failed)."""

    spec: ModelSpec
    fitted: Optional[FittedModel]
    scores: Dict[str, Any]


@dataclass(frozen=True)
class ModelSelection:
    """Selected model and the full scored grid."""

    selected: FittedModel
    table: pd.DataFrame


def _rank_key(row: Dict[str, Any]) -> Tuple[float, float, int]:
    return (row["bic"], row["aic"], row["n_params"])


def _score_candidate(
    spec: ModelSpec,
    r: np.ndarray,
    lb_lags: Sequence[int],
    alpha: float,
    sghyd_index: Optional[float],
) -> CandidateResult:
    scores: Dict[str, Any] = {
        "spec": spec.label,
        "dist": spec.dist,
        "n_params": spec.n_params,
        "loglik": float("nan"),
        "aic": float("nan"),
        "bic": float("nan"),
        "converged": False,
        "all_significant": False,
        "lb_min_p": float("nan"),
        "lb_sq_min_p": float("nan"),
        "pit_ks_p": float("nan"),
        "passes_gates": False,
        "error": "",
    }
    try:
        fitted = fit(spec, r, sghyd_index=sghyd_index)
        eps = np.asarray(fitted.filtered.eps)
        lb = [ljung_box(eps, lag).p_value for lag in lb_lags]
        lb_sq = [ljung_box(eps ** 2, lag).p_value for lag in lb_lags]
        pit_p = ks_uniform(pit_series(fitted.dist, eps)).p_value
    except TailDepError as exc:
        logger.warning(f"candidate {spec.label} failed: {exc}")
        scores["error"] = str(exc)
        return CandidateResult(spec=spec, fitted=None, scores=scores)

    scores.update({
        "loglik": fitted.loglik,
        "aic": fitted.aic,
        "bic": fitted.bic,
        "converged": fitted.converged,
        "all_significant": fitted.all_significant(),
        "lb_min_p": min(lb),
        "lb_sq_min_p": min(lb_sq),
        "pit_ks_p": pit_p,
        "passes_gates": min(lb) > alpha and min(lb_sq) > alpha and pit_p >= alpha,
    })
    return CandidateResult(spec=spec, fitted=fitted, scores=scores)


class ModelSelectionService:
    """Service for marginal model selection"""

    @staticmethod
    def score_candidates(
        r,
        specs: Sequence[ModelSpec],
        lb_lags: Optional[Sequence[int]] = None,
        alpha: Optional[float] = None,
        sghyd_index: Optional[float] = None,
        n_jobs: Optional[int] = None,
    ) -> List[CandidateResult]:
        """Fit and score every candidate; results follow the order of specs."""
        lb_lags = tuple(lb_lags if lb_lags is not None else taildep_setting("LJUNG_BOX_LAGS"))
        alpha = float(alpha if alpha is not None else taildep_setting("GATE_ALPHA"))
        r = np.asarray(r, dtype=float)
        return Parallel(n_jobs=resolve_n_jobs(n_jobs))(
            delayed(_score_candidate)(spec, r, lb_lags, alpha, sghyd_index) for spec in specs
        )

    @staticmethod
    def rank(results: Sequence[CandidateResult], label: str = "") -> Tuple[Optional[int], pd.DataFrame]:
        """
        Rank scored candidates.

        Returns:
            (position of the selected candidate in results or None, table
            with a 1-based rank column; unranked rows have rank NaN)
        """
        rows = [dict(result.scores) for result in results]
        usable = [
            i for i, result in enumerate(results)
            if result.fitted is not None and all(math.isfinite(rows[i][key]) for key in ("aic", "bic"))
        ]
        passing = [i for i in usable if rows[i]["passes_gates"]]
        pool = passing
        if not passing and usable:
            logger.warning(f"{label or 'series'}: no candidate passes the residual gates, ranking all fitted candidates")
            pool = usable
        ordered = sorted(pool, key=lambda i: _rank_key(rows[i]))
        ranks = {i: position + 1 for position, i in enumerate(ordered)}
        for i, row in enumerate(rows):
            row["rank"] = ranks.get(i, float("nan"))
            row["selected"] = bool(ordered) and i == ordered[0]
        return (ordered[0] if ordered else None), pd.DataFrame(rows)

    @staticmethod
    def select_model(
        r,
        specs: Sequence[ModelSpec],
        label: str = "",
        **kwargs,
    ) -> ModelSelection:
        """
        Fit the grid and return the best candidate.

        Raises:
            TailDepError: The last candidate error when no candidate could be fitted
        """
        results = ModelSelectionService.score_candidates(r, specs, **kwargs)
        best, table = ModelSelectionService.rank(results, label=label)
        if best is None:
            errors = {result.spec.label: result.scores["error"] for result in results}
            raise TailDepError(f"{label or 'series'}: no marginal model could be fitted", errors=errors)
        selected = results[best].fitted
        logger.info(f"{label or 'series'}: selected {selected.spec.label} (BIC {selected.bic:.2f})")
        return ModelSelection(selected=selected, table=table)


def select_model(r, specs: Sequence[ModelSpec], label: str = "", **kwargs) -> ModelSelection:
    return ModelSelectionService.select_model(r, specs, label=label, **kwargs)
