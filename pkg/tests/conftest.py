"""Shared fixtures: the mutual-atari capture puzzle and helpers."""

import pytest

from neurogo.goban import BoardState, Color, Move, board_from_text, legal_moves, play

# Black to move.  The six-stone White group (top left) and the five-stone
# Black chain wrapping it share their one remaining liberty at (0,2): Black
# must capture there or White captures first and owns the board.
CAPTURE_PUZZLE_DIAGRAM = """
OOOXO
OOOXO
.XXXO
OOOOO
.XXX.
"""
CAPTURE_MOVE = Move.play(0, 2)


@pytest.fixture
def capture_puzzle() -> BoardState:
    return board_from_text(CAPTURE_PUZZLE_DIAGRAM, to_move=Color.BLACK)


def white_group_points(board: BoardState) -> set[tuple[int, int]]:
    return {(x, y) for y in (0, 1) for x in (0, 1, 2)}


def chain_alive(board: BoardState, points) -> bool:
    return all(board.stone_at(x, y) != 0 for (x, y) in points)


def depth2_unique_saver(board: BoardState) -> set[Move]:
    """Exhaustive depth-2 oracle: moves after which the White six-group is
    captured and the Black rescue chain survives every White reply."""
    black_chain = [(3, 0), (3, 1), (1, 2), (2, 2), (3, 2)]
    white_group = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]
    savers = set()
    for m1 in legal_moves(board):
        after1 = play(board, m1)
        captured_white = all(after1.stone_at(x, y) == 0 for x, y in white_group)
        if not captured_white:
            continue
        safe = True
        for m2 in legal_moves(after1):
            after2 = play(after1, m2)
            if not chain_alive(after2, black_chain):
                safe = False
                break
        if safe:
            savers.add(m1)
    return savers


def losing_reply_exists(board: BoardState, m1: Move) -> bool:
    """True when some White reply to m1 captures the Black rescue chain."""
    black_chain = [(3, 0), (3, 1), (1, 2), (2, 2), (3, 2)]
    after1 = play(board, m1)
    for m2 in legal_moves(after1):
        after2 = play(after1, m2)
        if any(after2.stone_at(x, y) == 0 for x, y in black_chain):
            return True
    return False
