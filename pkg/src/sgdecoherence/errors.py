"""Exception hierarchy shared by every module of the package."""


class SGDecoherenceError(Exception):
    """Base class for all errors raised by sgdecoherence."""


class InvariantError(SGDecoherenceError, ValueError):
    """A physical quantity violates its domain (negative mass, theta out of range, ...)."""


class DegenerateGeometryError(SGDecoherenceError, ValueError):
    """Two sites coincide, so the pairwise self-potential is undefined."""


class ConfigurationError(SGDecoherenceError, ValueError):
    """An integration or sweep policy cannot be carried out as requested."""


class ConsistencyError(SGDecoherenceError, RuntimeError):
    """Two evaluation routes that must agree did not."""


class OutputError(SGDecoherenceError, OSError):
    """A result could not be written to its destination."""
