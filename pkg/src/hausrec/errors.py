"""Exception hierarchy shared by all modules."""


class HausrecError(Exception):
    """Base class for all library errors."""


class InvalidArgument(HausrecError, ValueError):
    pass


class PrecisionFailure(HausrecError):
    """A distance comparison could not be certified within the precision cap."""

    def __init__(self, n, message=None):
        self.n = n
        super().__init__(message or f"comparison at n={n} could not be certified")


class InsufficientData(HausrecError):
    pass


class PeriodicPointError(InsufficientData):
    """A zero distance was met, so exponents are undefined."""


class BudgetExceeded(HausrecError):
    def __init__(self, message, progress=None):
        self.progress = progress
        super().__init__(message)


class InternalError(HausrecError, RuntimeError):
    pass
