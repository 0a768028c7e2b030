"""
Pipeline Service - End-to-end tail-dependence analysis.

Stages run in order; each raises its typed errors with the stage label
attached:

    ingest           parse price files, inner-join on dates, log returns
    diagnostics      Ljung-Box (returns, squares), ADF, pairwise Engle-Granger
    long_memory      FARIMA(1,d,1)-GARCH(1,1) test of d = 0 per asset
    model_selection  grid of ARMA-GARCH fits, gates, then BIC/AIC ranking
    residuals        standardized residuals of the selected models
    dependence       rank correlations and permutation independence tests
    copula_fit       every configured family for every asset pair
    gof              Cramer-von Mises bootstrap per pair and family
    tail             analytic and empirical tail coefficients, k sweep

Every random stream is derived from the config's master seed and the
task labels, so a run is reproducible regardless of worker counts.

Usage:
    from pipeline.config import load_run_config
    from pipeline.services import run_pipeline, emit_report

    config = load_run_config("run.json")
    tables = run_pipeline(config)
    emit_report(tables, config.output_dir, config.report_formats)
"""

import logging
from contextlib import contextmanager
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from common.exceptions import InfeasibleFitError, TailDepError
from common.utils import derive_seed, resolve_n_jobs
from copula.constants import EstimationMethod, TailSource
from copula.empirical import (
    kendall_tau,
    pseudo_obs,
    rho_s_to_rho,
    spearman_rho,
    tail_coeff_estimates,
    tail_k_sweep,
    tau_to_rho,
)
from copula.families import tail_coeffs_analytic
from copula.services import (
    fit_copula,
    gof_bootstrap_pvalue,
    independence_permutation_test,
    rank_copula_fits,
    tail_agreement,
)
from copula.types import PseudoSample, TailEstimate
from stattests.constants import TestMethod
from stattests.services import adf, ljung_box, pairwise_engle_granger
from tsmodel.services import long_memory_test
from tsmodel.types import FittedModel

from ..constants import ReportTable, Stage
from ..ingestion import align_by_date, parse_asset
from ..types import AlignedPanel, ReportTables, RunConfig, pair_label
from .model_selection_service import ModelSelectionService

logger = logging.getLogger(__name__)


@contextmanager
def stage(name: str):
    """Log the stage and label any TailDepError raised inside it."""
    logger.info(f"Stage {name}: {Stage.get_display(name)}")
    try:
        yield
    except TailDepError as exc:
        raise exc.with_stage(name)
    except Exception:
        logger.error(f"Unexpected failure in stage {name}", exc_info=True)
        raise


def _frame(rows: List[dict], table: str) -> pd.DataFrame:
    columns = ReportTable.COLUMNS[table]
    return pd.DataFrame(rows, columns=columns) if rows else pd.DataFrame(columns=columns)


class PipelineService:
    """Service orchestrating a full analysis run"""

    # ==== Ingestion and diagnostics ====

    @staticmethod
    def load_panel(config: RunConfig) -> AlignedPanel:
        return align_by_date(*(parse_asset(source) for source in config.assets))

    @staticmethod
    def diagnostics_tables(panel: AlignedPanel, config: RunConfig) -> Tuple[pd.DataFrame, pd.DataFrame]:
        """Ljung-Box and ADF rows per asset, Engle-Granger rows per pair of log prices."""
        rows = []
        for label in panel.labels:
            r = panel.returns_of(label)
            for series_name, values in (("returns", r), ("squared_returns", r ** 2)):
                for lag in config.ljung_box_lags:
                    result = ljung_box(values, lag)
                    rows.append({
                        "asset": label, "test": TestMethod.LJUNG_BOX, "series": series_name,
                        "lag": lag, "statistic": result.statistic, "p_value": result.p_value,
                    })
            for series_name, values in (("log_price", panel.log_prices_of(label)), ("returns", r)):
                result = adf(values, lags=config.adf_lags)
                rows.append({
                    "asset": label, "test": TestMethod.ADF, "series": series_name,
                    "lag": result.lag, "statistic": result.statistic, "p_value": result.p_value,
                })

        coint_rows = []
        log_prices = {label: panel.log_prices_of(label) for label in panel.labels}
        for first, second, result in pairwise_engle_granger(log_prices, lags=config.adf_lags):
            coint_rows.append({
                "dependent": second, "regressor": first, "statistic": result.statistic, "p_value": result.p_value,
                "intercept": result.extra["intercept"], "slope": result.extra["slope"],
                "crit_5%": result.extra["crit_5%"],
            })
        return _frame(rows, ReportTable.DIAGNOSTICS), _frame(coint_rows, ReportTable.COINTEGRATION)

    @staticmethod
    def long_memory_table(panel: AlignedPanel, config: RunConfig) -> pd.DataFrame:
        if not config.long_memory:
            logger.info("Long memory test disabled by config")
            return _frame([], ReportTable.LONG_MEMORY)
        results = Parallel(n_jobs=resolve_n_jobs(config.threads))(
            delayed(long_memory_test)(panel.returns_of(label), dist=config.long_memory_dist, sghyd_index=config.sghyd_index)
            for label in panel.labels
        )
        rows = [
            {"asset": label, "dist": config.long_memory_dist, **result.to_dict()}
            for label, result in zip(panel.labels, results)
        ]
        return _frame(rows, ReportTable.LONG_MEMORY)

    # ==== Margins ====

    @staticmethod
    def select_models(panel: AlignedPanel, config: RunConfig) -> Tuple[pd.DataFrame, pd.DataFrame, Dict[str, FittedModel]]:
        """Model selection grid, parameter table of the selected models, and the models."""
        specs = config.candidate_specs()
        selection_frames, param_frames, fitted = [], [], {}
        for label in panel.labels:
            selection = ModelSelectionService.select_model(
                panel.returns_of(label),
                specs,
                label=label,
                lb_lags=config.ljung_box_lags,
                alpha=config.gate_alpha,
                sghyd_index=config.sghyd_index,
                n_jobs=config.threads,
            )
            fitted[label] = selection.selected
            selection_frames.append(selection.table.assign(asset=label))
            params = selection.selected.param_table()
            param_frames.append(params.assign(asset=label, spec=selection.selected.spec.label))

        selection_table = pd.concat(selection_frames, ignore_index=True)[ReportTable.COLUMNS[ReportTable.MODEL_SELECTION]]
        params_table = pd.concat(param_frames, ignore_index=True)[ReportTable.COLUMNS[ReportTable.MODEL_PARAMS]]
        return selection_table, params_table, fitted

    @staticmethod
    def residual_samples(panel: AlignedPanel, fitted: Dict[str, FittedModel]) -> Dict[Tuple[str, str], PseudoSample]:
        """Pseudo-observations of the standardized residuals for every asset pair."""
        eps = {label: np.asarray(model.filtered.eps) for label, model in fitted.items()}
        return {(a, b): pseudo_obs(eps[a], eps[b]) for a, b in panel.pairs()}

    # ==== Dependence ====

    @staticmethod
    def dependence_tables(samples: Dict[Tuple[str, str], PseudoSample], config: RunConfig) -> Tuple[pd.DataFrame, pd.DataFrame]:
        rank_rows, independence_rows = [], []
        for (a, b), s in samples.items():
            pair = pair_label(a, b)
            tau = kendall_tau(s)
            rho_s = spearman_rho(s)
            rank_rows.append({
                "pair": pair, "asset_a": a, "asset_b": b, "n_obs": s.n, "kendall_tau": tau, "spearman_rho": rho_s,
                "rho_from_tau": tau_to_rho(tau), "rho_from_spearman": rho_s_to_rho(rho_s),
            })
            result = independence_permutation_test(
                s, n_perm=config.n_permutations, seed=derive_seed(config.master_seed, "independence", pair)
            )
            independence_rows.append({
                "pair": pair, "statistic": result.statistic, "p_value": result.p_value, "n_permutations": result.lag,
            })
        return _frame(rank_rows, ReportTable.RANK_CORRELATIONS), _frame(independence_rows, ReportTable.INDEPENDENCE)

    # ==== Copulas and tails ====

    @staticmethod
    def fit_pair(pair: str, s: PseudoSample, config: RunConfig) -> Tuple[List[dict], Dict[Tuple[str, str], TailEstimate]]:
        """
        Fit, test and score every configured family on one pair.

        With copula_method "both" each family is fitted by inverse tau and
        by maximum pseudo-likelihood, one row per (family, method). Ranks
        compare families fitted by the same method.

        Returns:
            (fit rows ranked within the pair and method, analytic tail
            estimates by (family, method))
        """
        rows, analytic = [], {}
        for method in EstimationMethod.expand(config.copula_method):
            method_rows = []
            for family in config.copula_families:
                row = {
                    "pair": pair, "family": family, "method": method, "status": "ok",
                    "theta": float("nan"), "nu": float("nan"), "loglik": float("nan"), "aic": float("nan"),
                    "bic": float("nan"), "gof_statistic": float("nan"), "gof_p_value": float("nan"),
                    "n_bootstrap": config.n_bootstrap, "n_failed": 0,
                }
                method_rows.append(row)
                with stage(Stage.COPULA_FIT):
                    try:
                        fit = fit_copula(family, s, method=method)
                    except InfeasibleFitError as exc:
                        logger.warning(f"{pair}: {family} copula not fitted by {method}: {exc}")
                        row["status"] = "infeasible"
                        continue
                details = fit.as_dict()
                row.update({k: details[k] for k in ("theta", "nu", "loglik", "aic", "bic")})
                for key in ("theta", "nu"):
                    if row[key] is None:
                        row[key] = float("nan")

                with stage(Stage.GOF):
                    gof = gof_bootstrap_pvalue(
                        family,
                        s,
                        n_boot=config.n_bootstrap,
                        method=method,
                        seed=derive_seed(config.master_seed, "gof", pair, family, method),
                        n_jobs=config.threads,
                        model=fit.model,
                    )
                row.update({"gof_statistic": gof.statistic, "gof_p_value": gof.p_value, "n_failed": gof.n_failed})
                analytic[(family, method)] = tail_coeffs_analytic(fit.model)

            ranked = rank_copula_fits([r for r in method_rows if r["status"] == "ok"])
            ranks = {r["family"]: position + 1 for position, r in enumerate(ranked)}
            for row in method_rows:
                row["rank"] = ranks.get(row["family"], float("nan"))
            rows.extend(method_rows)
        return rows, analytic

    @staticmethod
    def copula_tables(samples: Dict[Tuple[str, str], PseudoSample], config: RunConfig) -> Tuple[pd.DataFrame, pd.DataFrame, pd.DataFrame]:
        """copula_fits, tail_coefficients and tail_sensitivity tables."""
        fit_rows, tail_rows, sweep_frames = [], [], []
        for (a, b), s in samples.items():
            pair = pair_label(a, b)
            rows, analytic = PipelineService.fit_pair(pair, s, config)
            fit_rows.extend(rows)

            with stage(Stage.TAIL):
                empirical = tail_coeff_estimates(s, k=config.tail_k)
                for (family, method), estimate in analytic.items():
                    tail_rows.append({
                        "pair": pair, "family": family, "method": method, "source": TailSource.ANALYTIC,
                        "k": float("nan"), "lambda_lower": estimate.lambda_lower,
                        "lambda_upper": estimate.lambda_upper, "tail_agreement": tail_agreement(estimate, empirical),
                    })
                tail_rows.append({
                    "pair": pair, "family": "empirical", "method": "", "source": TailSource.EMPIRICAL,
                    "k": empirical.k, "lambda_lower": empirical.lambda_lower,
                    "lambda_upper": empirical.lambda_upper, "tail_agreement": float("nan"),
                })
                sweep_frames.append(tail_k_sweep(s, config.tail_k_exponents).assign(pair=pair))

        sweep = (
            pd.concat(sweep_frames, ignore_index=True)[ReportTable.COLUMNS[ReportTable.TAIL_SENSITIVITY]]
            if sweep_frames else _frame([], ReportTable.TAIL_SENSITIVITY)
        )
        return _frame(fit_rows, ReportTable.COPULA_FITS), _frame(tail_rows, ReportTable.TAIL_COEFFICIENTS), sweep

    # ==== Orchestration ====

    @staticmethod
    def run_pipeline(config: RunConfig, panel: Optional[AlignedPanel] = None) -> ReportTables:
        """
        Run every stage and assemble the report tables.

        Args:
            config: Validated run configuration
            panel: Pre-aligned panel; the configured files are read when omitted

        Raises:
            TailDepError: Any sub-error, labeled with the failing stage
        """
        if panel is None:
            with stage(Stage.INGEST):
                panel = PipelineService.load_panel(config)
        logger.info(f"Panel: {len(panel.labels)} assets x {panel.n_obs} returns")

        with stage(Stage.DIAGNOSTICS):
            diagnostics, cointegration = PipelineService.diagnostics_tables(panel, config)
        with stage(Stage.LONG_MEMORY):
            long_memory = PipelineService.long_memory_table(panel, config)
        with stage(Stage.MODEL_SELECTION):
            selection, params, fitted = PipelineService.select_models(panel, config)
        with stage(Stage.RESIDUALS):
            samples = PipelineService.residual_samples(panel, fitted)
        with stage(Stage.DEPENDENCE):
            rank_correlations, independence = PipelineService.dependence_tables(samples, config)
        copula_fits, tail_coefficients, tail_sensitivity = PipelineService.copula_tables(samples, config)

        metadata = {
            "config": config.as_dict(),
            "n_obs": panel.n_obs,
            "first_date": panel.returns.index[0].isoformat() if panel.n_obs else None,
            "last_date": panel.returns.index[-1].isoformat() if panel.n_obs else None,
            "selected_models": {label: model.spec.label for label, model in fitted.items()},
            "best_copula": _best_copulas(copula_fits),
        }
        return ReportTables(
            long_memory=long_memory,
            model_params=params,
            rank_correlations=rank_correlations,
            copula_fits=copula_fits,
            tail_coefficients=tail_coefficients,
            diagnostics=diagnostics,
            cointegration=cointegration,
            model_selection=selection,
            independence=independence,
            tail_sensitivity=tail_sensitivity,
            fitted_models=fitted,
            metadata=metadata,
        )


def _best_copulas(copula_fits: pd.DataFrame) -> Dict[str, Dict[str, Optional[str]]]:
    """Rank-1 family per pair and estimation method."""
    best = {}
    for pair, group in copula_fits.groupby("pair", sort=True):
        best[pair] = {}
        for method, fits in group.groupby("method", sort=True):
            top = fits[fits["rank"] == 1]
            best[pair][method] = str(top["family"].iloc[0]) if len(top) else None
    return best


def run_pipeline(config: RunConfig, panel: Optional[AlignedPanel] = None) -> ReportTables:
    return PipelineService.run_pipeline(config, panel=panel)
