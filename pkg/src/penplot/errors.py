"""Exception types shared across the package."""


class PlotError(Exception):
    """Base class for all penplot errors."""


class InvalidWindowError(PlotError):
    pass


class InvalidCoordinateError(PlotError):
    pass


class InvalidPenCodeError(PlotError):
    pass


class InvalidFactorError(PlotError):
    pass


class SealedContextError(PlotError):
    pass


class NonFiniteSampleError(PlotError):
    """A sampled function returned inf/nan; carries the offending (x, y)."""

    def __init__(self, x: float, y: float):
        super().__init__(f"non-finite sample at ({x!r}, {y!r})")
        self.x = x
        self.y = y


class BehindEyeError(PlotError):
    """Perspective projection of a point at or behind the eye plane."""


class PageOverflowError(PlotError):
    """Geometry does not fit the drawable page area; never silently scaled."""


class DmpParseError(PlotError):
    """DM/PL input rejected; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class MissingInitError(DmpParseError):
    def __init__(self, offset: int = 0):
        super().__init__("program must begin with ;: init", offset)


class DmpRangeError(DmpParseError):
    def __init__(self, message: str, offset: int):
        super().__init__(message, offset)


class ExpressionError(PlotError):
    """Expression syntax error; carries the 1-based column."""

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


class NotFoundError(PlotError):
    pass


class CapacityError(PlotError):
    pass


class SpecValidationError(PlotError):
    """Invalid panel spec; carries the offending field names."""

    def __init__(self, fields: list[str]):
        super().__init__("invalid panel spec: " + ", ".join(fields))
        self.fields = list(fields)
