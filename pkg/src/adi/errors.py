"""Exception hierarchy shared across the package."""


class AdiError(Exception):
    """Base class for all errors raised by this package."""


# --- scene loading / validation ---

class MissingFile(AdiError):
    pass


class MalformedManifest(AdiError):
    pass


class DimensionMismatch(AdiError):
    pass


class UnknownCategoryId(AdiError):
    pass


class UnknownCategory(AdiError):
    pass


# --- planning ---

class NoJsonFound(AdiError):
    pass


class NotAnArray(AdiError):
    pass


class EmptyPlanAfterRepair(AdiError):
    pass


class BackendUnreachable(AdiError):
    """Network-level failure of an LLM backend, distinct from an invalid plan."""


# --- tools ---

class MissingDetections(AdiError):
    pass


class MissingMask(AdiError):
    pass


class OutOfBounds(AdiError):
    pass


# --- execution ---

class ResourceMissing(AdiError):
    pass


class LiteralParseError(AdiError):
    pass


class KindMismatch(AdiError):
    pass


class ToolError(AdiError):
    """Wraps an error raised by a tool during plan execution."""

    def __init__(self, tool: str, cause: Exception):
        super().__init__(f"{tool}: {cause}")
        self.tool = tool
        self.cause = cause


# --- synthesis ---

class PlacementInfeasible(AdiError):
    pass


# --- evaluation ---

class IdMismatch(AdiError):
    pass
