"""
Custom Django system checks for the analysis defaults.

These checks run automatically during `python manage.py check` and before
every management command. Invalid TAILDEP values are reported as errors so
that a run fails before any computation starts.
"""

from django.conf import settings
from django.core.checks import Error, Warning, register

from common.utils import DEFAULT_SETTINGS


@register()
def check_taildep_settings(app_configs, **kwargs):
    """Validate the TAILDEP settings block."""
    from copula.constants import EstimationMethod

    errors = []
    configured = getattr(settings, "TAILDEP", None)
    if configured is None:
        return [
            Warning(
                "settings.TAILDEP is not defined, built-in defaults are used",
                id="common.W001",
            )
        ]

    unknown_keys = sorted(set(configured) - set(DEFAULT_SETTINGS))
    if unknown_keys:
        errors.append(
            Warning(
                f"Unknown TAILDEP keys: {', '.join(unknown_keys)}",
                hint=f"Known keys: {', '.join(sorted(DEFAULT_SETTINGS))}",
                id="common.W002",
            )
        )

    for key in ("N_BOOTSTRAP", "N_PERMUTATIONS", "BURN_IN", "MIN_OBSERVATIONS", "THREADS"):
        value = configured.get(key, DEFAULT_SETTINGS[key])
        if not isinstance(value, int) or value < 1:
            errors.append(Error(f"TAILDEP['{key}'] must be a positive integer, got {value!r}", id="common.E001"))

    exponents = configured.get("TAIL_K_EXPONENTS", DEFAULT_SETTINGS["TAIL_K_EXPONENTS"])
    if not exponents or any(not (0.0 < float(e) < 1.0) for e in exponents):
        errors.append(
            Error(
                f"TAILDEP['TAIL_K_EXPONENTS'] must be values in (0, 1), got {exponents!r}",
                id="common.E002",
            )
        )

    max_order = configured.get("MAX_LAG_ORDER", DEFAULT_SETTINGS["MAX_LAG_ORDER"])
    if not isinstance(max_order, int) or max_order < 0:
        errors.append(Error(f"TAILDEP['MAX_LAG_ORDER'] must be >= 0, got {max_order!r}", id="common.E003"))

    method = configured.get("COPULA_METHOD", DEFAULT_SETTINGS["COPULA_METHOD"])
    if method not in EstimationMethod.run_values():
        errors.append(
            Error(
                f"TAILDEP['COPULA_METHOD'] must be one of {EstimationMethod.run_values()}, got {method!r}",
                id="common.E004",
            )
        )

    alpha = configured.get("GATE_ALPHA", DEFAULT_SETTINGS["GATE_ALPHA"])
    if not (0.0 < float(alpha) < 1.0):
        errors.append(Error(f"TAILDEP['GATE_ALPHA'] must be in (0, 1), got {alpha!r}", id="common.E005"))

    formats = configured.get("REPORT_FORMATS", DEFAULT_SETTINGS["REPORT_FORMATS"])
    bad_formats = [f for f in formats if f not in ("csv", "json", "xlsx")]
    if bad_formats:
        errors.append(Error(f"Unknown report formats: {bad_formats}", id="common.E006"))

    return errors
