"""
Constants for marginal ARMA-GARCH models.
"""

from typing import List, Tuple


class ParameterBounds:
    """Optimizer boxes, on the unit-variance scale used during fitting"""

    MU = (-5.0, 5.0)
    ARMA = (-0.999, 0.999)
    D = (0.0, 0.499)
    GAMMA = (1e-8, 10.0)
    ARCH = (0.0, 0.999)
    GARCH = (0.0, 0.999)

    # Σα + Σβ must stay below 1 - STATIONARITY_MARGIN
    STATIONARITY_MARGIN = 1e-6


class FitDefaults:
    """Documented multi-start points for maximum likelihood"""

    # (total ARCH weight, total GARCH weight, AR start, d start)
    STARTS: List[Tuple[float, float, float, float]] = [
        (0.05, 0.90, 0.0, 0.10),
        (0.10, 0.80, 0.10, 0.20),
        (0.20, 0.60, -0.10, 0.05),
    ]

    MAX_ITER = 500

    # Objective value returned for parameter vectors that cannot be evaluated
    PENALTY = 1e10


class SignificanceLevels:
    """Two-sided Wald test levels used in parameter tables"""

    DEFAULT = 0.05
