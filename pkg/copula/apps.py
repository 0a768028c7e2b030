from django.apps import AppConfig


class CopulaConfig(AppConfig):
    """Bivariate copulas, rank statistics and tail-dependence estimators."""

    name = 'copula'
