"""
Constants and choices for bivariate copulas.
"""

from typing import Dict, List, Tuple


class CopulaFamily:
    """Parametric copula families"""

    INDEPENDENT = 'independent'
    GAUSSIAN = 'gaussian'
    STUDENT_T = 't'
    CLAYTON = 'clayton'
    GUMBEL = 'gumbel'
    FRANK = 'frank'
    JOE = 'joe'

    CHOICES: List[Tuple[str, str]] = [
        (INDEPENDENT, 'Independent'),
        (GAUSSIAN, 'Gaussian'),
        (STUDENT_T, "Student's t"),
        (CLAYTON, 'Clayton'),
        (GUMBEL, 'Gumbel'),
        (FRANK, 'Frank'),
        (JOE, 'Joe'),
    ]

    # Number of free parameters, used for AIC/BIC
    N_PARAMS: Dict[str, int] = {
        INDEPENDENT: 0,
        GAUSSIAN: 1,
        STUDENT_T: 2,
        CLAYTON: 1,
        GUMBEL: 1,
        FRANK: 1,
        JOE: 1,
    }

    ELLIPTICAL = (GAUSSIAN, STUDENT_T)
    ARCHIMEDEAN = (CLAYTON, GUMBEL, FRANK, JOE)

    @classmethod
    def get_display(cls, value: str) -> str:
        """Get display name for a family value"""
        return dict(cls.CHOICES).get(value, value)

    @classmethod
    def values(cls) -> List[str]:
        return [value for value, _ in cls.CHOICES]


class EstimationMethod:
    """Copula parameter estimators"""

    ITAU = 'itau'
    MLE = 'mle'
    # Run-level only: every fit is made by each estimator
    BOTH = 'both'

    CHOICES: List[Tuple[str, str]] = [
        (ITAU, "Inversion of Kendall's tau"),
        (MLE, 'Maximum pseudo-likelihood'),
    ]

    RUN_CHOICES: List[Tuple[str, str]] = CHOICES + [
        (BOTH, 'Both estimators side by side'),
    ]

    @classmethod
    def get_display(cls, value: str) -> str:
        return dict(cls.RUN_CHOICES).get(value, value)

    @classmethod
    def values(cls) -> List[str]:
        return [value for value, _ in cls.CHOICES]

    @classmethod
    def run_values(cls) -> List[str]:
        return [value for value, _ in cls.RUN_CHOICES]

    @classmethod
    def expand(cls, value: str) -> Tuple[str, ...]:
        """Estimators a run setting stands for, primary first."""
        return (cls.ITAU, cls.MLE) if value == cls.BOTH else (value,)


class CopulaLimits:
    """Parameter domains and numerical caps"""

    # |rho| is capped below 1 for Gaussian and t copulas
    RHO_MAX = 1.0 - 1e-6
    T_NU = (2.0, 100.0)
    CLAYTON_THETA = (1e-6, 50.0)
    GUMBEL_THETA = (1.0, 50.0)
    FRANK_THETA = (-50.0, 50.0)
    JOE_THETA = (1.0, 50.0)

    # Frank theta is treated as zero (independence) below this magnitude
    FRANK_ZERO = 1e-8

    TAU_XTOL = 1e-12
    INVERSION_TOL = 1e-10

    # Clipping applied to u, v before quantile transforms
    UNIT_EPS = 1e-15


class TailSource:
    """Origin of a tail estimate"""

    ANALYTIC = 'analytic'
    EMPIRICAL = 'empirical'

    CHOICES: List[Tuple[str, str]] = [
        (ANALYTIC, 'Closed form at the fitted parameters'),
        (EMPIRICAL, 'Nonparametric tail copula estimator'),
    ]
