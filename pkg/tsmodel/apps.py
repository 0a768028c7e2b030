from django.apps import AppConfig


class TsmodelConfig(AppConfig):
    """ARMA/FARIMA-GARCH filtering, estimation and simulation."""

    name = 'tsmodel'
