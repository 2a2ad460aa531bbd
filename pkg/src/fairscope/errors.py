"""Exception hierarchy shared by all pipeline stages."""

from __future__ import annotations


class FairscopeError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(FairscopeError):
    """A portfolio file could not be parsed; message carries the location."""


class ValidationError(FairscopeError):
    """A portfolio or model record violates an invariant."""


class ConfigError(FairscopeError):
    """A configuration value is out of range or inconsistent."""


class InsufficientConstraintsError(FairscopeError):
    """One constraint class is empty after filtering; carries both counts."""

    def __init__(self, n_similar: int, n_dissimilar: int):
        self.n_similar = n_similar
        self.n_dissimilar = n_dissimilar
        super().__init__(
            f"insufficient constraints: {n_similar} similar / "
            f"{n_dissimilar} dissimilar candidates after filtering"
        )


class NumericalError(FairscopeError):
    """A numerical routine produced non-finite values."""


class DegenerateClusteringError(FairscopeError):
    """A clustering is too degenerate for the requested statistic."""


class UndefinedIndexError(FairscopeError):
    """A validity index is undefined for the given partition."""


class PipelineStageError(FairscopeError):
    """Wraps an error raised inside a pipeline stage with the stage name."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {cause}")
