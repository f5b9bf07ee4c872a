"""Exception types shared across the pipeline."""


class SpothullError(Exception):
    """Base class for all spothull errors."""


class ParseError(SpothullError):
    """Raised when an input stream violates the CSV/JSON dataset schema."""


class ValidationError(SpothullError):
    """Raised for hard input violations that cannot be repaired."""


class GeometryError(SpothullError):
    """Raised for degenerate or contract-violating geometry inputs."""


class PipelineError(SpothullError):
    """Wraps a failure with the name of the pipeline stage that raised it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause
