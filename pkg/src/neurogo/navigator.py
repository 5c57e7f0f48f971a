"""Cursor-based board control: five commands move a point cursor and place stones.

The hand substitute for hands-free play.  Edges clamp rather than wrap, and a
Select on an illegal point is a value (Rejected), never an exception, so the
control loop stays total.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import goban
from .commands import Command
from .goban import BoardState, Move


@dataclass(frozen=True)
class CursorState:
    x: int
    y: int


@dataclass(frozen=True)
class NavOutcome:
    kind: str  # "moved" | "blocked" | "proposed" | "rejected"
    cursor: CursorState
    move: Move | None = None
    reason: str | None = None


_DELTAS = {
    Command.UP: (0, -1),
    Command.DOWN: (0, 1),
    Command.LEFT: (-1, 0),
    Command.RIGHT: (1, 0),
}


def initial_cursor(size: int) -> CursorState:
    """Start at the center point (tengen); even sizes floor toward the origin."""
    if size < 1:
        raise ValueError("size must be >= 1")
    mid = (size - 1) // 2
    return CursorState(x=mid, y=mid)


def apply_command(cursor: CursorState, command: Command, board: BoardState) -> NavOutcome:
    """Pure control law: arrows nudge the cursor, Select proposes a play."""
    if command is Command.SELECT:
        move = Move.play(cursor.x, cursor.y)
        try:
            goban.play(board, move)
        except goban.IllegalMove as exc:
            return NavOutcome(kind="rejected", cursor=cursor, reason=exc.rule)
        return NavOutcome(kind="proposed", cursor=cursor, move=move)

    dx, dy = _DELTAS[command]
    nx, ny = cursor.x + dx, cursor.y + dy
    if not (0 <= nx < board.size and 0 <= ny < board.size):
        return NavOutcome(kind="blocked", cursor=cursor)
    return NavOutcome(kind="moved", cursor=CursorState(x=nx, y=ny))
