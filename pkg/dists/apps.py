from django.apps import AppConfig


class DistsConfig(AppConfig):
    """Innovation distributions and the special functions they need."""

    name = 'dists'
