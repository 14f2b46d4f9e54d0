"""Exception hierarchy shared by all coverfield modules."""


class CoverfieldError(Exception):
    """Base class for all errors raised by this package."""


class NonFiniteValueError(CoverfieldError):
    """An input coordinate or value is NaN or infinite."""


class TooFewSamplesError(CoverfieldError):
    """The sample set is too small for the requested operation."""


class DegenerateDesignError(CoverfieldError):
    """The regression design matrix is rank deficient."""


class MaskMismatchError(CoverfieldError):
    """A water/land mask does not match the grid it is paired with."""


class EmptyRegionError(CoverfieldError):
    """A refinement bounding box does not intersect the grid extent."""


class EmptyDomainError(CoverfieldError):
    """A coverage raster contains no water nodes to plan over."""


class GridMismatchError(CoverfieldError):
    """A station plan refers to positions that are not nodes of the raster grid."""


class InvalidPlanError(CoverfieldError):
    """A station plan violates its structural invariants (e.g. no stations)."""


class EmptyFileError(CoverfieldError):
    """An input stream contains no data rows."""


class MalformedRowError(CoverfieldError):
    """A CSV row cannot be parsed; carries the 1-based row number."""

    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


class ShapeMismatchError(CoverfieldError):
    """A mask stream has the wrong number of rows or columns."""


class InvalidCellError(CoverfieldError):
    """A mask cell is not 0 or 1."""


class ConfigError(CoverfieldError):
    """A pipeline configuration value is missing or out of range."""


class StageError(CoverfieldError):
    """A pipeline stage failed; names the stage so the CLI can report it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage}: {cause}")
        self.stage = stage
        self.cause = cause
