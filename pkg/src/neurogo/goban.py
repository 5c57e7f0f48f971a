"""Go rules: legality, captures, positional superko, and Tromp-Taylor scoring.

Boards are immutable values; `play` returns a fresh state.  Position hashes
are 64-bit Zobrist values (color-to-move excluded) generated from a fixed
seed so they are stable across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import IntEnum

from .seeds import splitmix64

EMPTY = 0


class Color(IntEnum):
    BLACK = 1
    WHITE = 2

    @property
    def opponent(self) -> "Color":
        return Color.WHITE if self is Color.BLACK else Color.BLACK

    @property
    def letter(self) -> str:
        return "B" if self is Color.BLACK else "W"


class IllegalMove(Exception):
    """Base for rule violations; subclasses name the violated rule."""

    @property
    def rule(self) -> str:
        return type(self).__name__


class Occupied(IllegalMove):
    pass


class Suicide(IllegalMove):
    pass


class Superko(IllegalMove):
    pass


class OutOfBounds(IllegalMove):
    pass


class GameOver(IllegalMove):
    pass


@dataclass(frozen=True)
class Move:
    kind: str  # "play" | "pass" | "resign"
    x: int = -1
    y: int = -1

    @staticmethod
    def play(x: int, y: int) -> "Move":
        return Move("play", x, y)

    @property
    def is_play(self) -> bool:
        return self.kind == "play"


PASS = Move("pass")
RESIGN = Move("resign")

_ZOBRIST_SEED = 0x9E3779B97F4A7C15  # fixed so hashes never drift between runs
_zobrist_cache: dict[int, list[int]] = {}


def _zobrist_table(size: int) -> list[int]:
    """Flat table: entry [color_index * size^2 + point] for color_index 0=black 1=white."""
    table = _zobrist_cache.get(size)
    if table is None:
        state = _ZOBRIST_SEED ^ size
        table = []
        for _ in range(2 * size * size):
            state, value = splitmix64(state)
            table.append(value)
        _zobrist_cache[size] = table
    return table


@dataclass(frozen=True)
class BoardState:
    size: int = 19
    grid: bytes = b""
    to_move: Color = Color.BLACK
    position_hash: int = 0
    position_history: frozenset[int] = field(default_factory=frozenset)
    captures_black: int = 0  # stones captured by Black
    captures_white: int = 0
    consecutive_passes: int = 0
    resigned: Color | None = None

    @staticmethod
    def empty(size: int = 19, to_move: Color = Color.BLACK) -> "BoardState":
        if size < 1:
            raise ValueError("board size must be >= 1")
        return BoardState(
            size=size,
            grid=bytes(size * size),
            to_move=to_move,
            position_hash=0,
            position_history=frozenset({0}),
        )

    @property
    def game_over(self) -> bool:
        return self.consecutive_passes >= 2 or self.resigned is not None

    def stone_at(self, x: int, y: int) -> int:
        return self.grid[y * self.size + x]

    def stones_on_board(self) -> int:
        return sum(1 for v in self.grid if v != EMPTY)


def _neighbors(idx: int, size: int) -> list[int]:
    x, y = idx % size, idx // size
    out = []
    if x > 0:
        out.append(idx - 1)
    if x < size - 1:
        out.append(idx + 1)
    if y > 0:
        out.append(idx - size)
    if y < size - 1:
        out.append(idx + size)
    return out


def _group_and_liberties(grid, size: int, start: int) -> tuple[list[int], set[int]]:
    color = grid[start]
    stones = [start]
    seen = {start}
    liberties = set()
    fringe = [start]
    while fringe:
        idx = fringe.pop()
        for nb in _neighbors(idx, size):
            v = grid[nb]
            if v == EMPTY:
                liberties.add(nb)
            elif v == color and nb not in seen:
                seen.add(nb)
                stones.append(nb)
                fringe.append(nb)
    return stones, liberties


def _hash_of_grid(grid, size: int) -> int:
    table = _zobrist_table(size)
    n = size * size
    h = 0
    for idx in range(n):
        v = grid[idx]
        if v == Color.BLACK:
            h ^= table[idx]
        elif v == Color.WHITE:
            h ^= table[n + idx]
    return h


def grid_hash(board: BoardState) -> int:
    """Recompute the position hash from scratch (test oracle for the incremental one)."""
    return _hash_of_grid(board.grid, board.size)


def play(board: BoardState, move: Move) -> BoardState:
    """Apply a move under positional-superko rules, returning the new state."""
    if board.game_over:
        raise GameOver("game is over")

    if move.kind == "pass":
        return replace(
            board,
            to_move=board.to_move.opponent,
            consecutive_passes=board.consecutive_passes + 1,
        )
    if move.kind == "resign":
        return replace(board, resigned=board.to_move)

    size = board.size
    if not (0 <= move.x < size and 0 <= move.y < size):
        raise OutOfBounds(f"({move.x},{move.y}) outside {size}x{size} board")
    idx = move.y * size + move.x
    if board.grid[idx] != EMPTY:
        raise Occupied(f"({move.x},{move.y}) is occupied")

    color = board.to_move
    table = _zobrist_table(size)
    n = size * size
    grid = bytearray(board.grid)
    grid[idx] = color
    h = board.position_hash ^ table[(0 if color is Color.BLACK else 1) * n + idx]

    captured = 0
    opp = color.opponent
    opp_offset = (0 if opp is Color.BLACK else 1) * n
    for nb in _neighbors(idx, size):
        if grid[nb] == opp:
            stones, libs = _group_and_liberties(grid, size, nb)
            if not libs:
                for s in stones:
                    grid[s] = EMPTY
                    h ^= table[opp_offset + s]
                captured += len(stones)

    _, own_libs = _group_and_liberties(grid, size, idx)
    if not own_libs:
        raise Suicide(f"({move.x},{move.y}) leaves own group without liberties")

    if h in board.position_history:
        raise Superko(f"({move.x},{move.y}) recreates a previous position")

    return replace(
        board,
        grid=bytes(grid),
        to_move=opp,
        position_hash=h,
        position_history=board.position_history | {h},
        captures_black=board.captures_black + (captured if color is Color.BLACK else 0),
        captures_white=board.captures_white + (captured if color is Color.WHITE else 0),
        consecutive_passes=0,
    )


def legal_moves(board: BoardState) -> set[Move]:
    """Every Play the rules accept, plus Pass while the game is running."""
    if board.game_over:
        return set()
    moves = {PASS}
    for y in range(board.size):
        for x in range(board.size):
            move = Move.play(x, y)
            try:
                play(board, move)
            except IllegalMove:
                continue
            moves.add(move)
    return moves


@dataclass(frozen=True)
class Score:
    black_points: float
    white_points: float
    result: str


def tromp_taylor_score(board: BoardState, komi: float = 7.5) -> Score:
    """Area scoring: stones plus empty regions touching exactly one color."""
    size = board.size
    grid = board.grid
    n = size * size
    black = sum(1 for v in grid if v == Color.BLACK)
    white = sum(1 for v in grid if v == Color.WHITE)

    seen = bytearray(n)
    for start in range(n):
        if grid[start] != EMPTY or seen[start]:
            continue
        region = [start]
        seen[start] = 1
        fringe = [start]
        touches = set()
        while fringe:
            idx = fringe.pop()
            for nb in _neighbors(idx, size):
                v = grid[nb]
                if v == EMPTY:
                    if not seen[nb]:
                        seen[nb] = 1
                        region.append(nb)
                        fringe.append(nb)
                else:
                    touches.add(v)
        if touches == {Color.BLACK}:
            black += len(region)
        elif touches == {Color.WHITE}:
            white += len(region)

    white_total = white + komi
    if black > white_total:
        result = f"B+{black - white_total:g}"
    elif white_total > black:
        result = f"W+{white_total - black:g}"
    else:
        result = "Draw"
    return Score(black_points=float(black), white_points=float(white_total), result=result)


def board_text(board: BoardState) -> str:
    """Debug dump: one char per point (`.XO`), rows top to bottom."""
    size = board.size
    rows = []
    for y in range(size):
        row = board.grid[y * size : (y + 1) * size]
        rows.append("".join(".XO"[v] for v in row))
    return "\n".join(rows)


def grid_string(board: BoardState) -> str:
    """Row-major `.XO` string without line breaks (wire format)."""
    return "".join(".XO"[v] for v in board.grid)


def board_from_text(text: str, to_move: Color = Color.BLACK) -> BoardState:
    """Build a position from a `.XO` diagram (whitespace-separated rows).

    History contains only the constructed position, as if it arose legally.
    """
    rows = [r.strip() for r in text.strip().splitlines() if r.strip()]
    size = len(rows)
    if any(len(r) != size for r in rows):
        raise ValueError("diagram must be square")
    grid = bytearray(size * size)
    for y, row in enumerate(rows):
        for x, ch in enumerate(row):
            if ch == "X":
                grid[y * size + x] = Color.BLACK
            elif ch == "O":
                grid[y * size + x] = Color.WHITE
            elif ch != ".":
                raise ValueError(f"bad diagram char {ch!r}")
    h = _hash_of_grid(grid, size)
    return BoardState(
        size=size,
        grid=bytes(grid),
        to_move=to_move,
        position_hash=h,
        position_history=frozenset({h}),
    )
