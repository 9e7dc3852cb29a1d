"""Exception and warning types shared across the package.

Two families matter to callers: ``ValidationError`` covers malformed input
(bad dimensions, bad gait descriptions, bad CLI arguments) and maps to exit
code 2; ``ConstraintViolation`` covers mathematically well-formed input whose
required structure fails to hold (diverging star, reducible matrix, broken
schedule) and maps to exit code 3.
"""


class TropigaitError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ValidationError(TropigaitError):
    """Input is malformed or violates a declared precondition."""

    exit_code = 2


class ConstraintViolation(TropigaitError):
    """Input is well-formed but a required structural property fails."""

    exit_code = 3


class DimensionMismatch(ValidationError):
    """Operand shapes are incompatible for the requested operation."""


class NotSquare(ValidationError):
    """A square matrix was required."""


class NegativePowerOfEpsilon(ValidationError):
    """epsilon ** r is undefined for r < 0."""


class PositiveCircuit(ConstraintViolation):
    """The precedence graph has a circuit of strictly positive weight, so
    the Kleene star diverges."""


class NotIrreducible(ConstraintViolation):
    """The precedence graph is not strongly connected."""


class AllEpsilonVector(ValidationError):
    """An eigenvector candidate must have at least one finite entry."""


class NotPartition(ValidationError):
    """Gait groups do not form a partition of the leg set."""


class BadIndex(ValidationError):
    """A leg index lies outside 1..n."""


class NotNormalGait(ValidationError):
    """The operation is only defined for gaits whose flattened order is
    increasing."""


class AssumptionA1Violated(ValidationError):
    """Requires strictly positive swing and stance times."""


class AssumptionA2Violated(ValidationError):
    """Requires the single-leg cycle time not to exceed m times the group
    lag."""


class BadExponent(ValidationError):
    """Matrix powers take nonnegative integers; closed-form powers need
    r >= 2."""


class NonMonotoneTrajectory(ConstraintViolation):
    """Event times of some leg decrease along the trajectory."""


class BadQuantum(ValidationError):
    """Diagram time quantum must be a positive finite number."""


class ParseError(ValidationError):
    """Gait text could not be parsed.

    Carries the character position where scanning failed.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class RunningGaitWarning(UserWarning):
    """Negative double-stance time: the gait has flight phases and the
    steady-state guarantees here do not apply."""
