"""Exception hierarchy for qnabla.

All library errors derive from :class:`QCalcError` so callers can catch one
base class.  The CLI maps these onto its exit-code contract (usage errors
exit 2, domain/window errors exit 3, counterexamples exit 1).
"""


class QCalcError(Exception):
    """Base class for all qnabla errors."""


class DomainError(QCalcError):
    """Arguments outside an operator's mathematical domain."""


class WindowError(QCalcError):
    """A grid function does not cover the exponents an operation needs."""


class ConvergenceError(QCalcError):
    """A truncated product/series hit max_terms before its stopping rule."""


class SingularityError(QCalcError):
    """A denominator factor of an infinite product vanished."""


class PoleError(SingularityError):
    """q-Gamma evaluated at a nonpositive integer."""


class EvaluationError(QCalcError):
    """A function expression failed at a grid point.

    Carries the offending exponent so callers can locate the failure.
    """

    def __init__(self, exponent: int, cause: BaseException):
        self.exponent = exponent
        self.cause = cause
        super().__init__(f"expression evaluation failed at exponent n={exponent}: {cause!r}")


class HypothesisError(QCalcError):
    """Inputs violate a hypothesis an operation requires (e.g. the mean-value
    search needs g strictly increasing with g(a) > 0)."""


class DegenerateDenominatorError(QCalcError):
    """The mean-value quotient denominator is numerically indistinguishable
    from zero (cannot occur for valid hypotheses; guards float catastrophe)."""


class SandwichViolationError(QCalcError):
    """The mean-value sandwich failed: a genuine counterexample candidate.

    Carries enough context to replay the case.
    """

    def __init__(self, message: str, context: dict):
        self.context = context
        super().__init__(message)


class ConfigError(QCalcError):
    """A sweep/CLI configuration field is invalid; names the field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"config field '{field}': {message}")
