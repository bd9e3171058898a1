"""Characteristic length of dynamical reduction models from vacuum decay.

The package is organised bottom-up:

* :mod:`vacuum_rc.units`: natural-unit quantities and the physical constants.
* :mod:`vacuum_rc.cosmology`: flat FRW background with a decaying vacuum.
* :mod:`vacuum_rc.reduction`: characteristic volume/length, energy gain, decoherence time.
* :mod:`vacuum_rc.stochastic`: Monte Carlo ensembles of noise-kicked particles.
* :mod:`vacuum_rc.cli`: the ``vacuum-rc`` command-line front end.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    ConsistencyError,
    DimensionError,
    DomainError,
    IntegrationError,
    NoDecayError,
    ResourceLimitError,
    VacuumRcError,
)
from .units import CONSTANTS, Quantity
from .cosmology import BackgroundState, CosmoParams
from .reduction import ReductionResult

__all__ = [
    "BackgroundState",
    "CONSTANTS",
    "ConfigError",
    "ConsistencyError",
    "CosmoParams",
    "DimensionError",
    "DomainError",
    "IntegrationError",
    "NoDecayError",
    "Quantity",
    "ReductionResult",
    "ResourceLimitError",
    "VacuumRcError",
]
