"""Monte-Carlo move generation with an adjustable playout budget.

A seedable UCT searcher over the rules core: UCB1 selection, one expanded
node per simulation, uniform-random playouts that never fill single-point
true eyes, Tromp-Taylor scoring at the leaves.  The playout budget is the
strength knob.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import goban
from ._uct import uct_search
from .goban import PASS, BoardState, GameOver, Move


class InvalidBudget(ValueError):
    pass


@dataclass(frozen=True)
class EngineConfig:
    playouts: int = 10_000
    exploration_c: float = 1.4
    komi: float = 7.5
    seed: int = 0
    max_playout_moves: int = 0  # 0 -> 2 * size^2 at search time

    def __post_init__(self) -> None:
        if self.playouts < 1:
            raise InvalidBudget("playouts must be >= 1")
        if self.exploration_c <= 0:
            raise InvalidBudget("exploration_c must be positive")


@dataclass(frozen=True)
class Suggestion:
    move: Move
    winrate: float  # for the side to move at the root
    visits: int


@dataclass(frozen=True)
class SearchResult:
    best: Move
    suggestions: tuple[Suggestion, ...]
    total_simulations: int


def _board_to_array(board: BoardState) -> np.ndarray:
    return np.frombuffer(board.grid, dtype=np.int8).copy()


def _move_to_point(move: Move, size: int) -> int:
    return size * size if not move.is_play else move.y * size + move.x


def _point_to_move(pt: int, size: int) -> Move:
    if pt == size * size:
        return PASS
    return Move.play(pt % size, pt // size)


def genmove(board: BoardState, cfg: EngineConfig) -> SearchResult:
    """Search the position and return the most-visited move plus runners-up."""
    if board.game_over:
        raise GameOver("cannot search a finished game")

    size = board.size
    root_moves = sorted(_move_to_point(m, size) for m in goban.legal_moves(board))
    root_cands = np.array(root_moves, dtype=np.int16)
    max_playout_moves = cfg.max_playout_moves or 2 * size * size

    out_moves = np.zeros(len(root_cands), np.int16)
    out_visits = np.zeros(len(root_cands), np.int32)
    out_wins = np.zeros(len(root_cands), np.float64)
    count = uct_search(
        _board_to_array(board),
        size,
        int(board.to_move),
        board.consecutive_passes,
        float(cfg.komi),
        int(cfg.playouts),
        float(cfg.exploration_c),
        int(max_playout_moves),
        np.uint64(cfg.seed & 0xFFFFFFFFFFFFFFFF),
        root_cands,
        out_moves,
        out_visits,
        out_wins,
    )

    entries = []
    for i in range(count):
        visits = int(out_visits[i])
        if visits == 0:
            continue
        entries.append(
            Suggestion(
                move=_point_to_move(int(out_moves[i]), size),
                winrate=float(out_wins[i]) / visits,
                visits=visits,
            )
        )
    # most visited first; equal visits keep point-index order for determinism
    entries.sort(key=lambda s: -s.visits)
    suggestions = tuple(entries)
    return SearchResult(
        best=suggestions[0].move,
        suggestions=suggestions,
        total_simulations=int(cfg.playouts),
    )


def set_strength(cfg: EngineConfig, playouts: int) -> EngineConfig:
    """Return the configuration with a new playout budget (the resource knob)."""
    if playouts < 1:
        raise InvalidBudget(f"playouts must be >= 1, got {playouts}")
    return replace(cfg, playouts=playouts)


def top_suggestions(result: SearchResult, k: int) -> tuple[Suggestion, ...]:
    """The first min(k, available) suggestions, preserving visit order."""
    if k < 1:
        raise InvalidBudget(f"k must be >= 1, got {k}")
    return result.suggestions[:k]
