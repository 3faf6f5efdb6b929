"""Exception types shared across the toolkit.

Everything deriving from ValidationError means "the input was unusable";
the command line maps those to exit code 2. Statistical check outcomes
(equivalence rejected, audit failed) are ordinary return values, never
exceptions.
"""


class DpSelectError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(DpSelectError):
    """An input violated a documented invariant."""


class EmptyOutcomeSet(ValidationError):
    """A quality vector must contain at least one outcome."""


class NonFiniteScore(ValidationError):
    """Quality scores must be finite floats."""


class NonPositiveEpsilon(ValidationError):
    """The privacy budget epsilon must be a positive finite real."""


class NonPositiveSensitivity(ValidationError):
    """The score sensitivity must be a positive finite real."""


class DerivedScaleOverflow(ValidationError):
    """epsilon / sensitivity combination pushes the derived noise
    rate or scale outside the finite double range."""


class DuplicateLabel(ValidationError):
    """Outcome labels must be unique within a quality vector."""


class LabelMismatch(ValidationError):
    """Two label sequences that must agree do not."""


class EmptyPairList(ValidationError):
    """At least one neighbor pair is required."""


class EmptySequence(ValidationError):
    """A nonempty sequence of values is required."""


class NeedAtLeastTwoOutcomes(ValidationError):
    """Gap release is only defined for two or more outcomes."""


class TooManyOutcomesForEnumeration(ValidationError):
    """The requested outcome count exceeds what the exact oracle can
    enumerate within its floating-point error budget."""


class PairExceedsSensitivity(ValidationError):
    """A neighbor pair's score deviation exceeds the declared sensitivity."""


class UnsupportedOracle(ValidationError):
    """The named mechanism has no exact output-distribution oracle."""


class MalformedInputFile(ValidationError):
    """An input file does not match the documented JSON schema."""


class InvalidProbabilityTable(ValidationError):
    """Probability entries outside [0, 1] or not summing to 1."""


class AllCategoriesMerged(DpSelectError):
    """Every category fell below the minimum expected count, leaving
    nothing to test."""


class QuadratureNonConvergence(DpSelectError):
    """Numerical integration did not reach the requested accuracy."""

    def __init__(self, message: str, achieved_error: float):
        super().__init__(message)
        self.achieved_error = achieved_error
