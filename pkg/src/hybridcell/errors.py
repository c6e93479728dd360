"""Exception types shared across the toolkit."""


class HybridCellError(Exception):
    """Base class for all toolkit errors."""


class ConfigurationError(HybridCellError):
    """Invalid or inconsistent configuration input."""


class NumericalError(HybridCellError):
    """A numerical procedure failed (singular system, bad fixed point, ...)."""


class ConvergenceError(HybridCellError):
    """An iterative solver hit its iteration cap before reaching tolerance."""

    def __init__(self, message, last_delta=None):
        super().__init__(message)
        self.last_delta = last_delta
