"""
Constants and choices for the analysis pipeline.
"""

from typing import List, Tuple


class Calendar:
    """Calendar of the date column in a price file"""

    GREGORIAN = 'gregorian'
    JALALI = 'jalali'

    CHOICES: List[Tuple[str, str]] = [
        (GREGORIAN, 'Gregorian (ISO-8601)'),
        (JALALI, 'Jalali (YYYY/MM/DD)'),
    ]

    @classmethod
    def get_display(cls, value: str) -> str:
        return dict(cls.CHOICES).get(value, value)


class Stage:
    """Stage labels attached to errors and log lines"""

    INGEST = 'ingest'
    DIAGNOSTICS = 'diagnostics'
    LONG_MEMORY = 'long_memory'
    MODEL_SELECTION = 'model_selection'
    RESIDUALS = 'residuals'
    DEPENDENCE = 'dependence'
    COPULA_FIT = 'copula_fit'
    GOF = 'gof'
    TAIL = 'tail'
    REPORT = 'report'
    SIMULATE = 'simulate'

    CHOICES: List[Tuple[str, str]] = [
        (INGEST, 'Price ingestion and alignment'),
        (DIAGNOSTICS, 'Return diagnostics and cointegration'),
        (LONG_MEMORY, 'Long memory test'),
        (MODEL_SELECTION, 'Marginal model selection'),
        (RESIDUALS, 'Residual extraction'),
        (DEPENDENCE, 'Rank correlation and independence'),
        (COPULA_FIT, 'Copula fitting'),
        (GOF, 'Copula goodness of fit'),
        (TAIL, 'Tail dependence'),
        (REPORT, 'Report emission'),
        (SIMULATE, 'Synthetic data generation'),
    ]

    @classmethod
    def get_display(cls, value: str) -> str:
        return dict(cls.CHOICES).get(value, value)


class ReportFormat:
    """Report output formats"""

    CSV = 'csv'
    JSON = 'json'
    XLSX = 'xlsx'

    CHOICES: List[Tuple[str, str]] = [
        (CSV, 'Delimited text, one file per table'),
        (JSON, 'Structured summary of all tables'),
        (XLSX, 'Workbook, one sheet per table'),
    ]

    @classmethod
    def values(cls) -> List[str]:
        return [value for value, _ in cls.CHOICES]


class ReportTable:
    """Report table names, in output order"""

    LONG_MEMORY = 'long_memory'
    MODEL_PARAMS = 'model_params'
    RANK_CORRELATIONS = 'rank_correlations'
    COPULA_FITS = 'copula_fits'
    TAIL_COEFFICIENTS = 'tail_coefficients'
    DIAGNOSTICS = 'diagnostics'
    COINTEGRATION = 'cointegration'
    MODEL_SELECTION = 'model_selection'
    INDEPENDENCE = 'independence'
    TAIL_SENSITIVITY = 'tail_sensitivity'

    # The five headline tables come first
    PRIMARY: Tuple[str, ...] = (LONG_MEMORY, MODEL_PARAMS, RANK_CORRELATIONS, COPULA_FITS, TAIL_COEFFICIENTS)
    SUPPLEMENTARY: Tuple[str, ...] = (DIAGNOSTICS, COINTEGRATION, MODEL_SELECTION, INDEPENDENCE, TAIL_SENSITIVITY)
    ALL: Tuple[str, ...] = PRIMARY + SUPPLEMENTARY

    COLUMNS = {
        LONG_MEMORY: ["asset", "dist", "d", "stderr", "statistic", "p_value"],
        MODEL_PARAMS: ["asset", "spec", "parameter", "estimate", "stderr", "t_value", "p_value"],
        RANK_CORRELATIONS: [
            "pair", "asset_a", "asset_b", "n_obs", "kendall_tau", "spearman_rho", "rho_from_tau", "rho_from_spearman",
        ],
        COPULA_FITS: [
            "pair", "family", "method", "status", "theta", "nu", "loglik", "aic", "bic",
            "gof_statistic", "gof_p_value", "n_bootstrap", "n_failed", "rank",
        ],
        TAIL_COEFFICIENTS: ["pair", "family", "method", "source", "k", "lambda_lower", "lambda_upper", "tail_agreement"],
        DIAGNOSTICS: ["asset", "test", "series", "lag", "statistic", "p_value"],
        COINTEGRATION: ["dependent", "regressor", "statistic", "p_value", "intercept", "slope", "crit_5%"],
        MODEL_SELECTION: [
            "asset", "spec", "dist", "n_params", "loglik", "aic", "bic", "converged", "all_significant",
            "lb_min_p", "lb_sq_min_p", "pit_ks_p", "passes_gates", "error", "rank", "selected",
        ],
        INDEPENDENCE: ["pair", "statistic", "p_value", "n_permutations"],
        TAIL_SENSITIVITY: ["pair", "exponent", "k", "lambda_lower", "lambda_upper"],
    }


class JalaliRange:
    """Supported Jalali years"""

    MIN_YEAR = 1300
    MAX_YEAR = 1500
