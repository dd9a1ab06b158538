"""Exception types shared across the package."""


class GeolamError(Exception):
    """Base class for all package errors."""


class TrackStructureError(GeolamError):
    """Asset is not structurally well formed (dangling or duplicated references)."""


class ContractViolation(GeolamError, ValueError):
    """Caller broke an operation's precondition."""


class DepthLimitError(GeolamError):
    """A lamination backend cannot answer at the requested path length."""

    def __init__(self, message: str, depth: int | None = None):
        super().__init__(message)
        self.depth = depth


class EnumerationLimitError(GeolamError):
    """An enumeration hit its configured cap.

    ``partial`` carries the number of objects found before stopping; it is a
    lower bound for the true count.
    """

    def __init__(self, message: str, partial: int = 0):
        super().__init__(message)
        self.partial = partial
