"""UCT engine: determinism, budget accounting, legality, and tactical sanity."""

import pytest

from neurogo.engine import EngineConfig, InvalidBudget, genmove, set_strength, top_suggestions
from neurogo.goban import (
    PASS,
    BoardState,
    Color,
    GameOver,
    Move,
    board_from_text,
    legal_moves,
    play,
)
from tests.conftest import CAPTURE_MOVE, depth2_unique_saver, losing_reply_exists


def test_only_winning_play_is_chosen():
    # one legal point; passing hands White the win
    board = board_from_text(
        """
        XXO
        X.O
        OOO
        """,
        to_move=Color.BLACK,
    )
    assert legal_moves(board) == {PASS, Move.play(1, 1)}
    result = genmove(board, EngineConfig(playouts=300, seed=1, komi=7.5))
    assert result.best == Move.play(1, 1)


def test_terminal_board_raises():
    board = play(play(BoardState.empty(5), PASS), PASS)
    with pytest.raises(GameOver):
        genmove(board, EngineConfig(playouts=10, seed=0))


def test_fixed_seed_determinism(capture_puzzle):
    cfg = EngineConfig(playouts=2000, seed=77, komi=7.5)
    assert genmove(capture_puzzle, cfg) == genmove(capture_puzzle, cfg)


def test_different_seeds_may_differ_but_stay_legal():
    board = BoardState.empty(9)
    legal = legal_moves(board)
    for seed in range(5):
        result = genmove(board, EngineConfig(playouts=400, seed=seed, komi=7.5))
        assert result.best in legal
        for s in result.suggestions:
            assert s.move in legal


def test_budget_and_visit_accounting():
    board = BoardState.empty(5)
    cfg = EngineConfig(playouts=1234, seed=3, komi=7.5)
    result = genmove(board, cfg)
    assert result.total_simulations == 1234
    assert sum(s.visits for s in result.suggestions) == 1234
    visits = [s.visits for s in result.suggestions]
    assert visits == sorted(visits, reverse=True)
    assert result.best == result.suggestions[0].move
    for s in result.suggestions:
        assert 0.0 <= s.winrate <= 1.0


def test_puzzle_oracle_confirms_unique_saver(capture_puzzle):
    savers = depth2_unique_saver(capture_puzzle)
    assert savers == {CAPTURE_MOVE}
    for move in legal_moves(capture_puzzle):
        if move != CAPTURE_MOVE:
            assert losing_reply_exists(capture_puzzle, move)


def test_puzzle_solved_small_sample(capture_puzzle):
    hits = 0
    for seed in range(5):
        result = genmove(capture_puzzle, EngineConfig(playouts=10_000, seed=seed, komi=7.5))
        hits += result.best == CAPTURE_MOVE
    assert hits >= 4


def test_pass_when_no_plays_remain():
    board = BoardState.empty(1)  # the only play is suicide
    result = genmove(board, EngineConfig(playouts=50, seed=2, komi=0.0))
    assert result.best == PASS


def test_set_strength():
    cfg = EngineConfig()
    assert set_strength(cfg, 100).playouts == 100
    assert set_strength(cfg, 100).exploration_c == cfg.exploration_c
    with pytest.raises(InvalidBudget):
        set_strength(cfg, 0)
    with pytest.raises(InvalidBudget):
        EngineConfig(playouts=0)


def test_top_suggestions():
    board = BoardState.empty(5)
    result = genmove(board, EngineConfig(playouts=500, seed=9, komi=7.5))
    top1 = top_suggestions(result, 1)
    assert list(top1) == [result.suggestions[0]]
    assert top1[0].move == result.best
    everything = top_suggestions(result, 10_000)
    assert everything == result.suggestions
    top3 = top_suggestions(result, 3)
    assert [s.visits for s in top3] == sorted((s.visits for s in top3), reverse=True)
    with pytest.raises(InvalidBudget):
        top_suggestions(result, 0)
