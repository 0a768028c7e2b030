# config/settings.py
"""
Django Settings for the taildep analysis toolkit.

The project has no web surface and no database: apps expose services and
management commands only. Analysis defaults live in the TAILDEP block below
and can be overridden per run by a JSON pipeline config.
"""

import os
from pathlib import Path

# Build paths
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: only used by Django internals, nothing is signed
SECRET_KEY = os.environ.get("TAILDEP_SECRET_KEY", "django-insecure-taildep-local-only")

DEBUG = os.environ.get("TAILDEP_DEBUG", "0") == "1"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Foundation components (MUST be loaded first for all modules)
    "common",
    # Analysis apps
    "dists",
    "tsmodel",
    "stattests",
    "copula",
    "pipeline",
    "cli",
]

MIDDLEWARE = []

# Database persistence is out of scope
DATABASES = {}

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# Internationalization
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True


# ==============================================================================
# ANALYSIS DEFAULTS
# ==============================================================================

TAILDEP = {
    # Marginal models
    "MAX_LAG_ORDER": 2,
    "MIN_OBSERVATIONS": 50,
    "BURN_IN": 500,
    "OPTIMIZER_TOL": 1e-8,
    "SGHYD_INDEX": 0.25,
    # Diagnostics
    "LJUNG_BOX_LAGS": (5, 10),
    "ADF_LAGS": 1,
    "GATE_ALPHA": 0.05,
    # Copulas
    "COPULA_METHOD": "both",
    "N_BOOTSTRAP": 200,
    "N_PERMUTATIONS": 999,
    "TAIL_K_EXPONENTS": (0.4, 0.5, 0.6),
    # Runs
    "MASTER_SEED": 20181114,
    "THREADS": 1,
    "OUTPUT_DIR": BASE_DIR / "output",
    "REPORT_FORMATS": ("csv", "json"),
}


# Logging Configuration
# Data goes to files and stdout, so all log records go to stderr
LOG_FILE = os.environ.get("TAILDEP_LOG_FILE")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {module} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "verbose",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": os.environ.get("TAILDEP_LOG_LEVEL", "WARNING"),
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "WARNING",
            "propagate": False,
        },
        "pipeline": {
            "handlers": ["console"],
            "level": os.environ.get("TAILDEP_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
        "cli": {
            "handlers": ["console"],
            "level": os.environ.get("TAILDEP_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
}

if LOG_FILE:
    LOGGING["handlers"]["file"] = {
        "class": "logging.FileHandler",
        "filename": LOG_FILE,
        "formatter": "verbose",
    }
    for _logger in ("django", "pipeline", "cli"):
        LOGGING["loggers"][_logger]["handlers"].append("file")
    LOGGING["root"]["handlers"].append("file")
