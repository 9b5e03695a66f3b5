"""
Exception hierarchy for BodySlice.

Construction-time invariant violations are ValueError subclasses so callers
that only know the dataclass contract (raise ValueError on bad input) keep
working. Solver and geometry failures derive from BodySliceError.
"""

from typing import Any, Optional


class BodySliceError(Exception):
    """Base class for all BodySlice failures."""


class InvalidBodyError(BodySliceError, ValueError):
    """A generator set violates the SymBody invariants (zero row, rank, tag)."""


class DimensionMismatch(BodySliceError, ValueError):
    """Two objects that must live in the same R^n do not."""

    def __init__(self, left: int, right: int, what: str = "bodies"):
        super().__init__(f"{what} have different dimensions: {left} != {right}")
        self.left = left
        self.right = right


class SingularMatrix(BodySliceError, ValueError):
    """A group element is numerically singular."""


class UnboundedBody(BodySliceError):
    """The support linear program of an H-rep body is unbounded."""


class NotFullDimensional(BodySliceError, ValueError):
    """A point set handed to the MVEE solver does not span R^n."""


class NoConvergence(BodySliceError):
    """The MVEE iteration hit its iteration cap.

    The partial MveeReport is kept on the exception so the CLI can dump it.
    """

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report


class NotEquivariantOnSlice(BodySliceError):
    """A map handed to the equivariant extension fails the O(n) spot check."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual
