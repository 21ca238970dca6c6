"""The ``gridpeak`` package, peak-load management of radial distribution networks."""

import importlib
import importlib.metadata

from .grid import RadialNetwork, build_bibc, load_feeder, validate_radial
from .load import LoadTable, ZipCoefficients, ZipLoad
from .optimize import CaseMode, EventSchedule, EventSpec, SwarmConfig, optimize_event
from .powerflow import PowerFlowResult, build_upsilon, solve

__version__ = importlib.metadata.version(__package__ or __name__)


__all__ = [
    "RadialNetwork",
    "build_bibc",
    "load_feeder",
    "validate_radial",
    "LoadTable",
    "ZipCoefficients",
    "ZipLoad",
    "CaseMode",
    "EventSchedule",
    "EventSpec",
    "SwarmConfig",
    "optimize_event",
    "PowerFlowResult",
    "build_upsilon",
    "solve",
]
