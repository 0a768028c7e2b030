"""
Run configuration loading.

A run is described by one JSON file. Missing keys fall back to
settings.TAILDEP; relative asset paths and the output directory are
resolved against the config file's directory. Validation goes through
pipeline.forms, and any error raises ConfigurationError carrying the
field errors before a single price is read.

Example config:
    {
      "assets": [
        {"label": "gold", "path": "gold.csv"},
        {"label": "tse", "path": "tse.csv", "calendar": "jalali"}
      ],
      "distributions": ["norm", "std"],
      "copula_families": ["gaussian", "clayton", "gumbel"],
      "n_bootstrap": 200,
      "master_seed": 7
    }
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from common.exceptions import ConfigurationError
from common.utils import taildep_setting
from copula.constants import CopulaFamily
from dists.constants import DistributionFamily

from .forms import AssetSourceFormSet, PipelineConfigForm
from .types import AssetSource, RunConfig

logger = logging.getLogger(__name__)

ASSET_PREFIX = "assets"


def default_config_values() -> Dict[str, Any]:
    """Config keys with their defaults from settings.TAILDEP."""
    return {
        "ar_orders": [0, 1],
        "ma_orders": [0, 1],
        "garch_orders": [[1, 1]],
        "distributions": DistributionFamily.values(),
        "long_memory": True,
        "long_memory_dist": DistributionFamily.STUDENT_T,
        "sghyd_index": float(taildep_setting("SGHYD_INDEX")),
        "ljung_box_lags": list(taildep_setting("LJUNG_BOX_LAGS")),
        "adf_lags": int(taildep_setting("ADF_LAGS")),
        "gate_alpha": float(taildep_setting("GATE_ALPHA")),
        "copula_families": [f for f in CopulaFamily.values() if f != CopulaFamily.INDEPENDENT],
        "copula_method": taildep_setting("COPULA_METHOD"),
        "n_bootstrap": int(taildep_setting("N_BOOTSTRAP")),
        "n_permutations": int(taildep_setting("N_PERMUTATIONS")),
        "tail_k": None,
        "tail_k_exponents": list(taildep_setting("TAIL_K_EXPONENTS")),
        "master_seed": int(taildep_setting("MASTER_SEED")),
        "threads": int(taildep_setting("THREADS")),
        "output_dir": str(taildep_setting("OUTPUT_DIR")),
        "report_formats": list(taildep_setting("REPORT_FORMATS")),
    }


def _formset_data(assets: List[Mapping[str, Any]]) -> Dict[str, Any]:
    data = {
        f"{ASSET_PREFIX}-TOTAL_FORMS": str(len(assets)),
        f"{ASSET_PREFIX}-INITIAL_FORMS": "0",
    }
    for i, asset in enumerate(assets):
        if not isinstance(asset, Mapping):
            raise ConfigurationError(f"asset entry {i} must be an object", errors={"assets": {i: "not an object"}})
        for key, value in asset.items():
            data[f"{ASSET_PREFIX}-{i}-{key}"] = value
    return data


def _form_errors(form) -> Dict[str, List[str]]:
    return {name: [str(message) for message in messages] for name, messages in form.errors.items()}


def build_run_config(raw: Mapping[str, Any], base_dir: Optional[Path] = None, require_assets: bool = True) -> RunConfig:
    """
    Validate a decoded config mapping.

    With require_assets=False an absent or empty asset list is accepted
    (commands that read their inputs from flags).

    Raises:
        ConfigurationError: Unknown keys, invalid values or invalid assets
    """
    if not isinstance(raw, Mapping):
        raise ConfigurationError("config must be a JSON object")
    base_dir = Path(base_dir) if base_dir is not None else Path.cwd()
    defaults = default_config_values()
    unknown = sorted(set(raw) - set(defaults) - {"assets"})
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(unknown)}", errors={key: ["unknown key"] for key in unknown})

    data = {**defaults, **{k: v for k, v in raw.items() if k != "assets"}}
    if data.get("tail_k") is None:
        data.pop("tail_k")
    form = PipelineConfigForm(data=data)
    if not form.is_valid():
        errors = _form_errors(form)
        raise ConfigurationError(f"invalid config: {json.dumps(errors, sort_keys=True)}", errors=errors)

    assets = raw.get("assets")
    if assets is None and not require_assets:
        assets = []
    if not isinstance(assets, list):
        raise ConfigurationError("config needs an 'assets' list", errors={"assets": ["missing"]})
    formset = AssetSourceFormSet(data=_formset_data(assets), prefix=ASSET_PREFIX)
    if (assets or require_assets) and not formset.is_valid():
        errors = {
            "assets": [_form_errors(f) for f in formset.forms],
            "__all__": [str(message) for message in formset.non_form_errors()],
        }
        raise ConfigurationError(f"invalid assets: {json.dumps(errors, sort_keys=True)}", errors=errors)

    sources = []
    for cleaned in (f.cleaned_data for f in formset.forms):
        path = Path(cleaned["path"])
        sources.append(AssetSource(
            label=cleaned["label"],
            path=path if path.is_absolute() else base_dir / path,
            date_column=cleaned["date_column"],
            price_column=cleaned["price_column"],
            calendar=cleaned["calendar"],
            date_format=cleaned.get("date_format") or "",
        ))

    c = form.cleaned_data
    output_dir = Path(c["output_dir"])
    return RunConfig(
        assets=tuple(sources),
        ar_orders=tuple(sorted(set(c["ar_orders"]))),
        ma_orders=tuple(sorted(set(c["ma_orders"]))),
        garch_orders=c["garch_orders"],
        distributions=tuple(c["distributions"]),
        long_memory=bool(c["long_memory"]),
        long_memory_dist=c["long_memory_dist"],
        sghyd_index=float(c["sghyd_index"]),
        ljung_box_lags=c["ljung_box_lags"],
        adf_lags=int(c["adf_lags"]),
        gate_alpha=float(c["gate_alpha"]),
        copula_families=tuple(c["copula_families"]),
        copula_method=c["copula_method"],
        n_bootstrap=int(c["n_bootstrap"]),
        n_permutations=int(c["n_permutations"]),
        tail_k=c.get("tail_k"),
        tail_k_exponents=c["tail_k_exponents"],
        master_seed=int(c["master_seed"]),
        threads=int(c["threads"]),
        output_dir=output_dir if output_dir.is_absolute() else base_dir / output_dir,
        report_formats=tuple(c["report_formats"]),
    )


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """
    Read and validate a JSON run config.

    Raises:
        ConfigurationError: Missing file, invalid JSON or invalid values
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file {path} does not exist", errors={"config": str(path)})
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path.name} is not valid JSON: {exc}") from None
    config = build_run_config(raw, base_dir=path.resolve().parent)
    logger.info(f"Loaded config {path.name}: {len(config.assets)} assets, {len(config.candidate_specs())} candidate models")
    return config


def default_run_config(base_dir: Optional[Path] = None) -> RunConfig:
    """Settings defaults without assets."""
    return build_run_config({}, base_dir=base_dir, require_assets=False)
