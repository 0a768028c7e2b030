from django.apps import AppConfig


class StattestsConfig(AppConfig):
    """Diagnostic and pre-modelling statistical tests."""

    name = 'stattests'
