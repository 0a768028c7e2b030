"""
Common utility functions and helpers for the analysis apps.

These functions cover settings access, seeded random streams and
deterministic file output, so that every app reads defaults and writes
artifacts the same way.

Usage:
    from common.utils import taildep_setting, make_rng, write_json
"""

import json
import logging
import math
import zlib
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd
from django.conf import settings

logger = logging.getLogger(__name__)

SeedLike = Union[None, int, np.random.SeedSequence, np.random.Generator]

# Fallbacks when a key is missing from settings.TAILDEP
DEFAULT_SETTINGS: Dict[str, Any] = {
    "MAX_LAG_ORDER": 2,
    "MIN_OBSERVATIONS": 50,
    "BURN_IN": 500,
    "OPTIMIZER_TOL": 1e-8,
    "SGHYD_INDEX": 0.25,
    "LJUNG_BOX_LAGS": (5, 10),
    "ADF_LAGS": 1,
    "GATE_ALPHA": 0.05,
    "COPULA_METHOD": "both",
    "N_BOOTSTRAP": 200,
    "N_PERMUTATIONS": 999,
    "TAIL_K_EXPONENTS": (0.4, 0.5, 0.6),
    "MASTER_SEED": 20181114,
    "THREADS": 1,
    "OUTPUT_DIR": "output",
    "REPORT_FORMATS": ("csv", "json"),
}


# ==============================================================================
# SETTINGS
# ==============================================================================

def taildep_setting(name: str) -> Any:
    """
    Read one analysis default from settings.TAILDEP.

    Args:
        name: Key inside the TAILDEP block (e.g. "N_BOOTSTRAP")

    Returns:
        The configured value, or the built-in default

    Raises:
        KeyError: If the key is unknown
    """
    configured = getattr(settings, "TAILDEP", {}) or {}
    if name in configured:
        return configured[name]
    return DEFAULT_SETTINGS[name]


# ==============================================================================
# RANDOM STREAMS
# ==============================================================================

def make_rng(seed: SeedLike = None) -> np.random.Generator:
    """Build a Generator from an int, SeedSequence or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def derive_seed(master_seed: int, *labels: str) -> np.random.SeedSequence:
    """
    Derive an independent, reproducible stream for a named task.

    Labels are hashed with CRC32 so the stream does not depend on task
    ordering or on Python's randomized str hash.

    Example:
        derive_seed(42, "gof", "gold|tse", "gaussian")
    """
    key = tuple(zlib.crc32(label.encode("utf-8")) for label in labels)
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=key)


def spawn_seeds(seed: SeedLike, n: int) -> List[np.random.SeedSequence]:
    """Spawn n child sequences for parallel replicates."""
    if isinstance(seed, np.random.SeedSequence):
        parent = seed
    elif isinstance(seed, np.random.Generator):
        parent = np.random.SeedSequence(int(seed.integers(0, 2**63 - 1)))
    else:
        parent = np.random.SeedSequence(seed)
    return parent.spawn(n)


def resolve_n_jobs(threads: Optional[int]) -> int:
    """Map a --threads value to a joblib n_jobs value (at least 1)."""
    if threads is None:
        threads = taildep_setting("THREADS")
    return max(1, int(threads))


# ==============================================================================
# DETERMINISTIC OUTPUT
# ==============================================================================

def ensure_dir(path: Union[str, Path]) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _json_default(value: Any) -> Any:
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "isoformat"):
        return value.isoformat()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def clean_for_json(value: Any) -> Any:
    """Replace NaN/inf floats by None so the output stays strict JSON."""
    if isinstance(value, dict):
        return {str(k): clean_for_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean_for_json(v) for v in value]
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    return value


def write_json(data: Any, path: Union[str, Path]) -> Path:
    """Write sorted, indented JSON with a trailing newline."""
    path = Path(path)
    ensure_dir(path.parent)
    text = json.dumps(clean_for_json(data), sort_keys=True, indent=2, default=_json_default)
    path.write_text(text + "\n", encoding="utf-8")
    logger.debug(f"Wrote {path}")
    return path


def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Write a DataFrame as CSV with fixed float formatting and line endings."""
    path = Path(path)
    ensure_dir(path.parent)
    frame.to_csv(path, index=False, float_format="%.10g", lineterminator="\n")
    logger.debug(f"Wrote {path} ({len(frame)} rows)")
    return path
