"""
Copula services package.

Fitting (inverse tau, maximum likelihood, information criteria) and
goodness-of-fit (Cramer-von Mises bootstrap, permutation independence).
"""

from .fitting_service import (
    CopulaFittingService,
    copula_aic_bic,
    copula_loglik,
    fit_copula,
    fit_inverse_tau,
    fit_mle,
)
from .gof_service import (
    GofService,
    cvm_statistic,
    gof_bootstrap_pvalue,
    independence_permutation_test,
    rank_copula_fits,
    tail_agreement,
)

__all__ = [
    'CopulaFittingService',
    'GofService',
    'copula_aic_bic',
    'copula_loglik',
    'cvm_statistic',
    'fit_copula',
    'fit_inverse_tau',
    'fit_mle',
    'gof_bootstrap_pvalue',
    'independence_permutation_test',
    'rank_copula_fits',
    'tail_agreement',
]
