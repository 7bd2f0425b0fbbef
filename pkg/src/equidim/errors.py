"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class EquidimError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(EquidimError, ValueError):
    """An argument violates a documented precondition."""


class ConnectivityError(EquidimError, ValueError):
    """A graph that must be connected is not."""


class GraphFormatError(EquidimError, ValueError):
    """A graph file could not be parsed or fails validation."""


class StrategyError(EquidimError, ValueError):
    """The requested solver strategy does not apply to the input graph."""


class SolverTimeout(EquidimError):
    """The search budget ran out before optimality was certified.

    ``bounds`` holds the best lower/upper bounds known at that moment.
    """

    def __init__(self, message: str, bounds) -> None:
        super().__init__(message)
        self.bounds = bounds


class CacheCorruptionError(EquidimError):
    """A cached basis failed re-verification against a freshly built graph."""
