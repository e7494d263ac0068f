class StrategyError(Exception):
    pass


class UnknownTaskTypeError(StrategyError):
    pass


class NetworkError(StrategyError):
    """Transport-level failure talking to a remote generator."""


class GenerationRejected(StrategyError):
    """A generated tree failed parsing or validation and was not dispatched."""

    def __init__(self, message: str, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])
