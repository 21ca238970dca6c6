"""Custom exceptions and warnings for the ``gridpeak`` package."""


class TopologyError(ValueError):
    """Error raised when a network is not a valid radial tree."""


class NetworkFileError(ValueError):
    """Error raised when an input file cannot be parsed or violates its schema."""


class VoltageCollapseError(RuntimeError):
    """Error raised when a power flow drives a bus voltage below the collapse level."""


class ArgumentError(ValueError):
    """Error raised when a command line value, such as a list of hours, is malformed."""


class IncompatibleRunsError(ValueError):
    """Error raised when runs that should share inputs do not."""


class ZeroHeadroomWarning(Warning):
    """Warning raised when a component has no thermal headroom left."""
