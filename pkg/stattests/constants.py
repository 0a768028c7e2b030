"""
Constants and choices for statistical tests.
"""

from typing import List, Tuple


class TestMethod:
    """Method tags stored on every TestResult"""

    __test__ = False

    LJUNG_BOX = 'ljung_box'
    KS_UNIFORM = 'ks_uniform'
    ADF = 'adf'
    ENGLE_GRANGER = 'engle_granger'
    PERMUTATION_TAU = 'permutation_tau'

    CHOICES: List[Tuple[str, str]] = [
        (LJUNG_BOX, 'Ljung-Box Q test'),
        (KS_UNIFORM, 'Kolmogorov-Smirnov test against U(0,1)'),
        (ADF, 'Augmented Dickey-Fuller unit root test'),
        (ENGLE_GRANGER, 'Engle-Granger cointegration test'),
        (PERMUTATION_TAU, "Permutation independence test on Kendall's tau"),
    ]

    @classmethod
    def get_display(cls, value: str) -> str:
        """Get display name for a method tag"""
        return dict(cls.CHOICES).get(value, value)


class TrendOption:
    """Deterministic terms in the ADF regression"""

    CONSTANT = 'c'
    CONSTANT_TREND = 'ct'

    CHOICES: List[Tuple[str, str]] = [
        (CONSTANT, 'Constant only'),
        (CONSTANT_TREND, 'Constant and linear trend'),
    ]
