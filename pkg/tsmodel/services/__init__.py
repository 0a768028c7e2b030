"""
Marginal model services.

Provides filtering, maximum likelihood estimation and simulation of
ARMA(FARIMA)-GARCH models. Each service is a class of static methods; the
module-level functions are shortcuts with the operation names.
"""

from .estimation_service import EstimationService, LongMemoryResult, fit, long_memory_test
from .filter_service import FilterService, filter_returns, pit_series
from .simulation_service import SimulatedPath, SimulationService, simulate, simulate_path

__all__ = [
    'EstimationService',
    'FilterService',
    'LongMemoryResult',
    'SimulatedPath',
    'SimulationService',
    'filter_returns',
    'fit',
    'long_memory_test',
    'pit_series',
    'simulate',
    'simulate_path',
]
