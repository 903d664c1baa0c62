"""Exception hierarchy for the puzzle engine.

Move-legality errors carry the number of the game rule they violate (1-7,
see README) so the protocol layer can report structured rejections.
"""

from __future__ import annotations


class PuzzleError(Exception):
    """Base class for all engine errors."""

    rule: int | None = None


class InvalidSizeError(PuzzleError, ValueError):
    """A qubit count or grid dimension is out of range."""


class QubitIndexError(PuzzleError, IndexError):
    """A qubit or row index is outside the tableau."""


class InvariantViolation(PuzzleError):
    """An internal tableau invariant failed (rank, commutation, phase)."""


class DimensionError(PuzzleError, ValueError):
    """Two tableaus of different sizes were compared."""


class EntangledOutputError(PuzzleError):
    """Marked outputs are still entangled with unmeasured, unmarked cells."""


class ParseError(PuzzleError, ValueError):
    """A circuit, board, or level file failed to parse.

    ``location`` names the offending field (e.g. ``gates[2].q``) or line.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class MoveError(PuzzleError):
    """Base for illegal board manipulations; carries the violated rule."""

    def __init__(self, message: str, rule: int | None = None):
        super().__init__(message)
        if rule is not None:
            self.rule = rule


class BoundsError(MoveError):
    rule = 1


class CollisionError(MoveError):
    rule = 3


class IllegalTouchError(MoveError):
    rule = 3


class UnconnectedError(MoveError):
    rule = 3


class IllegalOutError(MoveError):
    rule = 4


class IllegalInsertionError(MoveError):
    rule = 6


class MarkingError(MoveError):
    rule = 7


class ProtocolError(PuzzleError):
    """A malformed protocol message."""
