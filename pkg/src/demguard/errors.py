"""Exception hierarchy.

The CLI maps each family onto a stable exit code, so new errors should
subclass one of the families below rather than ``Exception`` directly.
"""


class DemGuardError(Exception):
    """Base class for all library errors."""


class DomainError(DemGuardError, ValueError):
    """An argument lies outside the range where a formula is defined."""


class InfeasibleAttackError(DomainError):
    """The requested QBER cannot be produced by the attack at this mismatch."""


class NumericalError(DemGuardError, ArithmeticError):
    """A numerical procedure failed to produce a result."""


class NoRootError(NumericalError):
    """No sign change on the search bracket."""


class ConvergenceError(NumericalError):
    """An iterative method hit its iteration cap."""


class SingularMatrixError(NumericalError):
    """Pivot fell below the singularity threshold."""


class InputFormatError(DemGuardError, ValueError):
    """Malformed input file or command-line value."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
