"""Exception types raised across hankelscope."""


class HankelscopeError(Exception):
    """Base class for all library errors."""


class DomainError(HankelscopeError, ValueError):
    """Invalid domain, exponent, index or point."""


class SeriesCapError(HankelscopeError):
    """A truncated series could not reach the requested tolerance within its term cap."""

    def __init__(self, message, achievable=None):
        super().__init__(message)
        self.achievable = achievable


class KernelWindowCapError(SeriesCapError):
    """The kernel window needed for a point exceeds the per-factor cap."""


class MarginError(HankelscopeError, ValueError):
    """Window margin too small for the symbols involved."""

    def __init__(self, message, required):
        super().__init__(message)
        self.required = required
