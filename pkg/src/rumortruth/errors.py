"""Exception hierarchy shared across the package.

ParameterError maps to CLI exit status 1, NumericalError to exit status 2.
"""


class RumorTruthError(Exception):
    """Base class for all package errors."""


class ParameterError(RumorTruthError, ValueError):
    """Invalid user input: bad sizes, out-of-range values, malformed files."""


class CapacityError(ParameterError):
    """Problem size exceeds a hard guard (e.g. dense 4^n generators)."""


class NumericalError(RumorTruthError, RuntimeError):
    """A numerical procedure failed: non-convergence, integration blow-up."""
