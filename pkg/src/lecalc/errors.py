"""Exception taxonomy for the engine.

Every failure mode the engine can detect raises a subclass of
:class:`EngineError`, so callers (in particular the CLI) can separate
mathematical verdicts from processing failures.
"""


class EngineError(Exception):
    """Base class for all engine failures."""


class FrameMismatchError(EngineError):
    """Operands live in different polynomial rings."""


class UnknownVariableError(EngineError):
    """A variable name is not part of the ring's frame."""


class ExactDivisionError(EngineError):
    """Exact division was requested by a non-divisor."""


class SingularMatrixError(EngineError):
    """A coordinate change matrix is not invertible."""


class FieldError(EngineError):
    """Invalid coefficient field construction or conversion."""


class BudgetExceededError(EngineError):
    """The configured step budget ran out; the input is pathological."""


class NotOneDimensionalError(EngineError):
    """The critical locus at the origin is not a curve.

    Carries the observed dimension so the caller can route 0-dimensional
    inputs to a plain Milnor-number report.
    """

    def __init__(self, dim: int, message: str | None = None):
        self.dim = dim
        super().__init__(message or f"critical locus at the origin has dimension {dim}, not 1")


class GenericityError(EngineError):
    """No linear form passing the genericity test was found."""


class NotASurfaceError(EngineError):
    """The polar surface ideal is not 2-dimensional at the origin."""


class ImproperIntersectionError(EngineError):
    """An intersection number was requested for a non-proper intersection."""


class NonlocalContributionError(EngineError):
    """A generic slice picked up points that do not degenerate to the origin.

    The polynomial representative of the germ has extra geometry away from
    the origin; the cycle multiplicity extraction cannot be trusted, so the
    engine refuses instead of reporting a wrong number.
    """


class InconsistentLambdaError(EngineError):
    """The two independent routes to the second Le number disagree."""


class InternalInconsistencyError(EngineError):
    """Cross-formula verification failed; never silently reported."""


class DecompositionIncompleteError(EngineError):
    """Component splitting terminated without certifying a decomposition."""

    def __init__(self, message: str, partial=None):
        self.partial = partial
        super().__init__(message)


class NotSmoothError(EngineError):
    """A transversality test was asked about a non-smooth germ."""


class ParseError(EngineError):
    """Syntax error in a polynomial expression, with 1-based position."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at column {position}")


class InputError(EngineError):
    """Malformed germ specification or CLI input."""
