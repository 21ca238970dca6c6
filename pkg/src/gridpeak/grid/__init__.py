"""Radial network data model, topology checks and network files."""

from .io import (
    THERMAL_DEFAULTS,
    NetworkFile,
    build_thermal,
    load_feeder,
    load_loads,
    load_network,
    loads_from_file,
    network_from_file,
    read_network_file,
)
from .network import Branch, Bus, BusKind, ConductorClass, RadialNetwork
from .topology import (
    BibcMatrix,
    ValidationReport,
    Violation,
    ViolationKind,
    build_bibc,
    validate_radial,
)

__all__ = [
    "THERMAL_DEFAULTS",
    "NetworkFile",
    "build_thermal",
    "load_feeder",
    "load_loads",
    "load_network",
    "loads_from_file",
    "network_from_file",
    "read_network_file",
    "Branch",
    "Bus",
    "BusKind",
    "ConductorClass",
    "RadialNetwork",
    "BibcMatrix",
    "ValidationReport",
    "Violation",
    "ViolationKind",
    "build_bibc",
    "validate_radial",
]
