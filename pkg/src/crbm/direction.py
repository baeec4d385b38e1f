"""Shared direction labels for decisions and ground truth."""

from enum import Enum


class Direction(str, Enum):
    """Causal direction between the two observed variables."""

    X_TO_Y = "XtoY"
    Y_TO_X = "YtoX"
    UNDECIDED = "Undecided"

    def flipped(self) -> "Direction":
        """Direction after swapping the roles of the two variables."""
        if self is Direction.X_TO_Y:
            return Direction.Y_TO_X
        if self is Direction.Y_TO_X:
            return Direction.X_TO_Y
        return Direction.UNDECIDED
