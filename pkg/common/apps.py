from django.apps import AppConfig


class CommonConfig(AppConfig):
    """
    Configuration for the common app.

    This app provides foundation components used across all analysis apps:
    - Typed exceptions
    - Series validators
    - Settings access, seeded random streams and deterministic file output
    - System checks on the TAILDEP settings block
    """

    name = 'common'

    def ready(self):
        """Import checks module to register custom Django system checks."""
        from common import checks  # noqa: F401
