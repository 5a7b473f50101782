"""Exception hierarchy shared by all modules."""


class ProjectiveSystemError(Exception):
    """Base class for every error raised by this package."""


class InvalidSystem(ProjectiveSystemError, ValueError):
    """A system spec failed validation.

    The failing :class:`~projective_rational.core.ValidationReport` is kept
    on ``report``.
    """

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(issue.message for issue in report.issues))


class OrbitBreakdown(ProjectiveSystemError, ArithmeticError):
    def __init__(self, cause, step=None, message=None):
        self.cause = cause
        self.step = step
        where = "" if step is None else f" at n={step}"
        super().__init__(message or f"orbit breakdown{where}: {cause.value}")


class DimensionTooSmall(ProjectiveSystemError, ValueError):
    pass


class NotProjective(ProjectiveSystemError, ValueError):
    pass


class DegenerateRiccati(ProjectiveSystemError, ValueError):
    pass


class InsufficientData(ProjectiveSystemError, ValueError):
    pass


class NotClassifiable(ProjectiveSystemError, ValueError):
    pass
