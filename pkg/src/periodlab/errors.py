"""Exception hierarchy for the periodlab kernel."""


class PeriodLabError(Exception):
    """Base class for all periodlab errors."""


class MixedSpecError(PeriodLabError):
    """Operands belong to different base-field specs or precisions."""


class NotInvertibleError(PeriodLabError):
    """Inversion requested of an element that is not a unit at the
    working precision."""


class PrecisionError(PeriodLabError):
    """A result cannot be determined at the requested precision.

    Carries ``achievable`` when a weaker precision could be served.
    """

    def __init__(self, message, achievable=None):
        super().__init__(message)
        self.achievable = achievable


class StabilizationError(PeriodLabError):
    """An iterative limit did not stabilize within the configured
    iteration budget.  ``depth`` records the agreement depth reached."""

    def __init__(self, message, depth=None):
        super().__init__(message)
        self.depth = depth


class StepBudgetError(PeriodLabError):
    """A step-budgeted solver ran out of steps.  ``achieved`` records the
    bound actually reached."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class CertificateError(PeriodLabError):
    """Missing or inconsistent certificate data."""


class ValidationError(PeriodLabError):
    """Input data failed a structural validation check."""
