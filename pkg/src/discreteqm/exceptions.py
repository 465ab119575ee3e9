"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands have incompatible or invalid dimensions."""


class ZeroVectorError(ValueError):
    """A (near-)zero vector was used where a direction is required."""


class NotHermitianError(ValueError):
    """Matrix is not Hermitian within tolerance."""


class ConvergenceError(RuntimeError):
    """An iterative routine failed to converge."""


class ImpossibleOutcomeError(ValueError):
    """Collapse was requested onto a zero-probability outcome."""


class DegenerateSpectrumError(ValueError):
    """Operator has (nearly) coinciding eigenvalues; conversion refused."""


class DomainError(ValueError):
    """Argument outside the supported domain."""


class TableError(ValueError):
    """Malformed conditional-probability table."""


class ScriptError(ValueError):
    """Experiment script references an unknown measurement."""


class ModeError(ValueError):
    """Report has the wrong or unknown simulation mode for this check."""
