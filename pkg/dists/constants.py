"""
Constants and choices for innovation distributions.
"""

from typing import List, Tuple


class DistributionFamily:
    """Innovation distribution families for ARMA-GARCH models"""

    NORMAL = 'norm'
    STUDENT_T = 'std'
    GED = 'ged'
    SGHYD = 'sghyd'

    CHOICES: List[Tuple[str, str]] = [
        (NORMAL, 'Normal'),
        (STUDENT_T, "Standardized Student's t"),
        (GED, 'Generalized Error Distribution'),
        (SGHYD, 'Standardized Generalized Hyperbolic'),
    ]

    @classmethod
    def get_display(cls, value: str) -> str:
        """Get display name for a family value"""
        return dict(cls.CHOICES).get(value, value)

    @classmethod
    def values(cls) -> List[str]:
        return [value for value, _ in cls.CHOICES]


class DistributionLimits:
    """Parameter boxes used by maximum likelihood estimation"""

    STUDENT_T_NU = (2.05, 200.0)
    GED_SHAPE = (0.3, 10.0)
    SGHYD_SHAPE = (-4.0, 4.0)
    SGHYD_SKEW = (-3.0, 3.0)

    # Quantile root-finding
    QUANTILE_XTOL = 1e-12
    QUANTILE_MAX_BRACKET = 1e6
