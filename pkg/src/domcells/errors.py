"""Exception types shared across the package."""

from __future__ import annotations


class DomcellsError(Exception):
    """Base class for all domcells errors."""


class InvalidArgumentError(DomcellsError, ValueError):
    """An argument violates a documented precondition."""


class GraphParseError(DomcellsError, ValueError):
    """Malformed graph text. ``offset`` is the byte position of the defect."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (byte {offset})")
        self.offset = offset


class NotDominatingError(DomcellsError, ValueError):
    """A vertex set that was required to dominate the graph does not."""


class NotMinimumError(DomcellsError, ValueError):
    """A dominating set that was required to be minimum is larger than gamma."""


class PartitionError(DomcellsError, ValueError):
    """A dominating-partition invariant failed; names the cell and vertex."""

    def __init__(self, message: str, cell: int | None = None, vertex: int | None = None):
        super().__init__(message)
        self.cell = cell
        self.vertex = vertex


class NotApplicableError(DomcellsError):
    """A checker's structural precondition (path factor, length) is not met."""


class UnprovenGammaError(DomcellsError):
    """A bound check was refused because a gamma input is not proven optimal."""


class ReproductionError(DomcellsError):
    """A paper-example reproduction diverged from the golden record."""
