"""
Command inputs: asset returns, fitted margins and residual pairs.

A command reads a single price file (--prices) or an asset of the
configured panel (--asset); pair commands take two residual files written
by extract_residuals (--residuals) or a pair of panel assets (--pair), in
which case the margins are selected over the configured model grid.
"""

import datetime
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from common.exceptions import ConfigurationError, DataValidationError
from copula.empirical import pseudo_obs
from copula.types import PseudoSample
from dists.constants import DistributionFamily
from pipeline.constants import Calendar, Stage
from pipeline.ingestion import log_returns, parse_price_csv
from pipeline.services import PipelineService, select_model, stage
from pipeline.types import RunConfig
from tsmodel.services import fit
from tsmodel.types import FittedModel, ModelSpec

logger = logging.getLogger(__name__)

SPEC_FLAGS = ("p", "q", "k", "l")


# ==== Argument groups ====

def add_margin_arguments(parser):
    """--asset/--prices input plus optional model spec flags."""
    group = parser.add_argument_group('input')
    group.add_argument('--asset', help='Asset label in the configured panel (or label for --prices)')
    group.add_argument('--prices', help='Single price file instead of the configured panel')
    group.add_argument('--calendar', choices=[c for c, _ in Calendar.CHOICES], default=Calendar.GREGORIAN)
    spec = parser.add_argument_group('model', 'Fit one model instead of selecting over the config grid')
    spec.add_argument('--ar-order', dest='p', type=int, help='AR order p')
    spec.add_argument('--ma-order', dest='q', type=int, help='MA order q')
    spec.add_argument('--garch-order', dest='k', type=int, help='GARCH order k (lagged variances)')
    spec.add_argument('--arch-order', dest='l', type=int, help='ARCH order l (lagged squared shocks)')
    spec.add_argument('--fractional', action='store_true', help='Fractionally integrated mean')
    spec.add_argument('--dist', choices=DistributionFamily.values(), help='Innovation family')


def add_pair_arguments(parser):
    group = parser.add_argument_group('input')
    group.add_argument('--pair', nargs=2, metavar=('A', 'B'), help='Two asset labels of the configured panel')
    group.add_argument('--residuals', nargs=2, metavar=('FILE_A', 'FILE_B'), help='Two extract_residuals outputs')


# ==== Margins ====

def asset_returns(config: RunConfig, options: Dict[str, Any]) -> Tuple[str, List[datetime.date], np.ndarray]:
    """
    (label, return dates, log returns) of the requested asset.

    Raises:
        ConfigurationError: Neither --prices nor a configured --asset
    """
    with stage(Stage.INGEST):
        if options.get("prices"):
            path = Path(options["prices"])
            series = parse_price_csv(path, label=options.get("asset") or path.stem, calendar=options["calendar"])
            return series.label, list(series.dates[1:]), log_returns(series)

        label = options.get("asset")
        if not label:
            raise ConfigurationError("give --prices FILE or --asset LABEL with --config")
        panel = PipelineService.load_panel(_require_assets(config))
        if label not in panel.labels:
            raise ConfigurationError(f"asset {label!r} is not in the config ({', '.join(panel.labels)})")
        return label, list(panel.returns.index), panel.returns_of(label)


def requested_spec(options: Dict[str, Any]) -> Optional[ModelSpec]:
    """ModelSpec from the spec flags, or None when no spec flag is given."""
    if all(options.get(name) is None for name in SPEC_FLAGS) and not options.get("fractional") and not options.get("dist"):
        return None
    return ModelSpec(
        p=options.get("p") or 0,
        q=options.get("q") or 0,
        k=options["k"] if options.get("k") is not None else 1,
        l=options["l"] if options.get("l") is not None else 1,
        fractional=bool(options.get("fractional")),
        dist=options.get("dist") or DistributionFamily.NORMAL,
    )


def fit_margin(r: np.ndarray, label: str, config: RunConfig, options: Dict[str, Any]) -> Tuple[FittedModel, Optional[pd.DataFrame]]:
    """Fit the flagged spec, or select over the config grid (returns the selection table too)."""
    with stage(Stage.MODEL_SELECTION):
        spec = requested_spec(options)
        if spec is not None:
            return fit(spec, r, sghyd_index=config.sghyd_index), None
        selection = select_model(
            r,
            config.candidate_specs(),
            label=label,
            lb_lags=config.ljung_box_lags,
            alpha=config.gate_alpha,
            sghyd_index=config.sghyd_index,
            n_jobs=config.threads,
        )
        return selection.selected, selection.table


# ==== Pairs ====

def _residual_label(path: Path) -> str:
    stem = path.stem
    return stem[len("residuals_"):] if stem.startswith("residuals_") else stem


def _read_residuals(path: Path) -> pd.Series:
    if not path.is_file():
        raise DataValidationError(f"residual file {path} does not exist", errors={"path": str(path)})
    frame = pd.read_csv(path)
    missing = [c for c in ("date", "eps") if c not in frame.columns]
    if missing:
        raise DataValidationError(f"{path.name}: missing column(s) {', '.join(missing)}")
    return frame.set_index("date")["eps"]


def pair_sample(config: RunConfig, options: Dict[str, Any]) -> Tuple[str, str, PseudoSample]:
    """
    (label a, label b, pseudo-observations of the pair's standardized residuals).

    Raises:
        ConfigurationError: Neither --residuals nor --pair
    """
    if options.get("residuals"):
        with stage(Stage.RESIDUALS):
            path_a, path_b = (Path(p) for p in options["residuals"])
            a, b = _residual_label(path_a), _residual_label(path_b)
            joined = pd.concat([_read_residuals(path_a).rename("a"), _read_residuals(path_b).rename("b")], axis=1, join="inner")
            logger.info(f"{a}|{b}: {len(joined)} common residual dates")
            return a, b, pseudo_obs(joined["a"].to_numpy(), joined["b"].to_numpy())

    if not options.get("pair"):
        raise ConfigurationError("give --residuals FILE_A FILE_B or --pair A B with --config")
    a, b = options["pair"]
    if a == b:
        raise ConfigurationError("--pair needs two different assets")
    with stage(Stage.INGEST):
        panel = PipelineService.load_panel(_require_assets(config))
        unknown = [label for label in (a, b) if label not in panel.labels]
        if unknown:
            raise ConfigurationError(f"asset(s) {', '.join(unknown)} not in the config ({', '.join(panel.labels)})")
    eps = {}
    for label in (a, b):
        model, _ = fit_margin(panel.returns_of(label), label, config, {})
        eps[label] = np.asarray(model.filtered.eps)
    with stage(Stage.RESIDUALS):
        return a, b, pseudo_obs(eps[a], eps[b])


def _require_assets(config: RunConfig) -> RunConfig:
    if not config.assets:
        raise ConfigurationError("this input needs --config with an 'assets' list")
    return config
