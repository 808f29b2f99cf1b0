# terragrid/core/errors.py
"""Exceptions raised by the grid, catalog and sampler modules."""


class TerragridError(Exception):
    """Base class for all domain errors."""


class InvalidParameterError(TerragridError, ValueError):
    """A parameter is non-finite, non-positive or otherwise malformed."""


class OutOfRangeError(TerragridError):
    """A row or column index lies outside the grid."""


class CellParseError(TerragridError, ValueError):
    """A cell identifier string could not be parsed."""

    def __init__(self, message: str, token: str):
        super().__init__(message)
        self.token = token


class DegenerateFootprintError(TerragridError):
    """A patch footprint cannot be expressed in degrees (pole rows)."""


class IncompatibleGridError(TerragridError):
    """Two catalogs or a manifest were built on different grids."""


class ProviderError(TerragridError):
    """A scene provider failed to list or inspect a scene."""
