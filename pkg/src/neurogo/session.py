"""Transport-free session state machine tying the whole pipeline together.

`handle_frame(state, frame, now_s)` is pure: given the same state, frame, and
clock it returns the same successor state and the same ordered frames to
emit, so a frame log replays byte-identically.  The WebSocket layer only
parses JSON and forwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import engine as engine_mod
from . import goban, navigator, protocol, sgf
from .assessor import AssessorConfig, EvalSample, assess
from .commands import Command
from .decoder import Classification, DecoderConfig, StimulusTable, WindowTooShort, classify, smooth_decide
from .engine import EngineConfig, SearchResult, top_suggestions
from .goban import BoardState, Color, Move
from .gtp import move_to_vertex
from .navigator import CursorState
from .protocol import MalformedFrame
from .seeds import derive
from .synth import (
    ChannelData,
    EmptyReport,
    GazeState,
    ImpedanceReport,
    InvalidConfig,
    SignalWindow,
    SynthConfig,
    check_impedance,
    generate_window,
)

MODES = ("competitive", "predictive")
_HISTORY_LIMIT = 16


@dataclass(frozen=True)
class SessionConfig:
    board_size: int = 19
    komi: float = 7.5
    impedance_threshold_kohm: float = 200.0
    stim: StimulusTable = field(default_factory=StimulusTable)
    synth: SynthConfig = field(default_factory=SynthConfig)
    decoder: DecoderConfig = field(default_factory=DecoderConfig)
    engine: EngineConfig = field(default_factory=EngineConfig)
    assessor: AssessorConfig = field(default_factory=AssessorConfig)

    def __post_init__(self) -> None:
        if not 1 <= self.board_size <= 25:
            raise InvalidConfig(f"board_size must lie in [1, 25], got {self.board_size}")
        if self.impedance_threshold_kohm <= 0:
            raise InvalidConfig("impedance_threshold_kohm must be positive")


@dataclass(frozen=True)
class SessionState:
    session_id: str
    mode: str
    human_color: Color
    phase: str  # "impedance_gate" | "playing" | "finished"
    config: SessionConfig
    seed: int
    board: BoardState
    cursor: CursorState
    next_window_id: int = 0
    history: tuple[Classification, ...] = ()
    last_emit_s: float | None = None
    moves: tuple[tuple[Color, Move], ...] = ()
    eval_history: tuple[EvalSample, ...] = ()
    result: str | None = None

    @property
    def engine_color(self) -> Color:
        return self.human_color.opponent


def create_session(
    mode: str,
    human_color: Color,
    config: SessionConfig | None = None,
    seed: int = 0,
) -> SessionState:
    """Fresh session behind the impedance gate, cursor centered."""
    if mode not in MODES:
        raise InvalidConfig(f"mode must be one of {MODES}, got {mode!r}")
    config = config or SessionConfig()
    return SessionState(
        session_id=f"s{derive(seed, 'session'):016x}",
        mode=mode,
        human_color=human_color,
        phase="impedance_gate",
        config=config,
        seed=seed,
        board=BoardState.empty(config.board_size),
        cursor=navigator.initial_cursor(config.board_size),
    )


def close_session(state: SessionState) -> sgf.GameRecord:
    """Final game record of all moves so far; unfinished games say so."""
    return sgf.GameRecord(
        size=state.config.board_size,
        komi=state.config.komi,
        moves=state.moves,
        result=state.result if state.result is not None else "unfinished",
    )


def assessment_from_search(result: SearchResult, side_to_move: Color, move_no: int) -> EvalSample:
    """Convert a search's root winrate to the Black perspective."""
    winrate = result.suggestions[0].winrate
    black_winrate = winrate if side_to_move is Color.BLACK else 1.0 - winrate
    return EvalSample(
        move_no=move_no,
        black_winrate=min(max(black_winrate, 0.0), 1.0),
        simulations=result.total_simulations,
    )


def hello_frame(state: SessionState) -> dict:
    return protocol.frame_hello(
        state.session_id, state.mode, state.human_color, state.config.board_size
    )


def board_frame(state: SessionState) -> dict:
    return protocol.frame_board_state(
        state.board.size,
        goban.grid_string(state.board),
        state.board.to_move,
        state.cursor.x,
        state.cursor.y,
    )


def snapshot_frames(state: SessionState) -> list[dict]:
    """Hello plus enough state for a client to re-hydrate after reconnect."""
    frames = [hello_frame(state), board_frame(state)]
    if state.phase == "finished" and state.result is not None:
        frames.append(protocol.frame_game_over(state.result))
    return frames


# ---------------------------------------------------------------------------
# frame handling


def handle_frame(state: SessionState, frame, now_s: float) -> tuple[SessionState, list[dict]]:
    """Advance the session by one inbound frame; never raises on bad input."""
    try:
        tag = protocol.frame_type(frame)
    except MalformedFrame as exc:
        return state, [protocol.frame_error("MalformedPayload", str(exc))]

    if tag not in protocol.ALL_TYPES:
        return state, [protocol.frame_error("UnknownType", f"unknown frame type {tag!r}")]
    if tag not in protocol.CLIENT_TYPES:
        return state, [
            protocol.frame_error("UnknownType", f"{tag!r} is not accepted from clients")
        ]

    try:
        if tag == "hello":
            return state, snapshot_frames(state)
        if tag == "impedance_report":
            return _on_impedance(state, frame)
        if state.phase != "playing":
            return state, [
                protocol.frame_error("BadPhase", f"{tag!r} not allowed in phase {state.phase!r}")
            ]
        if tag == "gaze":
            return _on_gaze(state, frame, now_s)
        if tag == "window":
            return _on_window(state, frame, now_s)
        if tag == "classification":
            return _on_classification(state, frame, now_s)
        return _on_command_frame(state, frame)
    except MalformedFrame as exc:
        return state, [protocol.frame_error("MalformedPayload", str(exc))]
    except (TypeError, ValueError, KeyError) as exc:
        return state, [protocol.frame_error("MalformedPayload", f"bad payload: {exc}")]


def _on_impedance(state: SessionState, frame: dict) -> tuple[SessionState, list[dict]]:
    if state.phase != "impedance_gate":
        return state, [
            protocol.frame_error("BadPhase", f"impedance_report not allowed in {state.phase!r}")
        ]
    kohm = frame.get("kohm")
    if not isinstance(kohm, dict) or not all(
        isinstance(k, str) and isinstance(v, (int, float)) and not isinstance(v, bool) and v >= 0
        for k, v in kohm.items()
    ):
        raise MalformedFrame("field 'kohm' must map channel labels to non-negative numbers")
    try:
        check = check_impedance(
            ImpedanceReport(per_channel_kohm={k: float(v) for k, v in kohm.items()}),
            state.config.impedance_threshold_kohm,
        )
    except EmptyReport as exc:
        raise MalformedFrame(str(exc)) from None
    if not check.gate_open:
        failed = sorted(k for k, ok in check.per_channel_pass.items() if not ok)
        return state, [
            protocol.frame_error(
                "GateFailed",
                f"impedance above {state.config.impedance_threshold_kohm:g} kOhm on: "
                + ", ".join(failed),
            )
        ]
    state = replace(state, phase="playing")
    frames = [board_frame(state)]
    if state.board.to_move is state.engine_color:
        state, engine_frames = _engine_turn(state)
        frames.extend(engine_frames)
    return state, frames


def _on_gaze(state: SessionState, frame: dict, now_s: float) -> tuple[SessionState, list[dict]]:
    target = protocol.require_str(frame, "target")
    if target == "none":
        return replace(state, history=()), []
    try:
        command = Command(target)
    except ValueError:
        raise MalformedFrame(f"bad gaze target {target!r}") from None
    window = generate_window(
        GazeState(target=command),
        state.config.stim,
        replace(state.config.synth, seed=derive(state.seed, "synth")),
        state.next_window_id,
    )
    state = replace(state, next_window_id=state.next_window_id + 1)
    return _decode_window(state, window, now_s)


def _on_window(state: SessionState, frame: dict, now_s: float) -> tuple[SessionState, list[dict]]:
    window_id = protocol.require_int(frame, "window_id", lo=0)
    sample_rate = protocol.require_number(frame, "sample_rate_hz", lo=1.0)
    raw_channels = frame.get("channels")
    if not isinstance(raw_channels, list) or not raw_channels:
        raise MalformedFrame("field 'channels' must be a non-empty list")
    channels = []
    n_samples = None
    for ch in raw_channels:
        if not isinstance(ch, dict):
            raise MalformedFrame("channel entries must be objects")
        label = protocol.require_str(ch, "label")
        samples = ch.get("samples")
        if not isinstance(samples, list) or not all(
            isinstance(s, (int, float)) and not isinstance(s, bool) for s in samples
        ):
            raise MalformedFrame("channel 'samples' must be a list of numbers")
        if n_samples is None:
            n_samples = len(samples)
        elif len(samples) != n_samples:
            raise MalformedFrame("all channels must carry the same sample count")
        channels.append(ChannelData(label=label, samples=np.asarray(samples, dtype=float)))
    window = SignalWindow(
        channels=tuple(channels),
        sample_rate_hz=sample_rate,
        start_time_s=0.0,
        window_id=window_id,
    )
    return _decode_window(state, window, now_s)


def _on_classification(state: SessionState, frame: dict, now_s: float) -> tuple[SessionState, list[dict]]:
    window_id = protocol.require_int(frame, "window_id", lo=0)
    raw_scores = frame.get("scores")
    if not isinstance(raw_scores, dict):
        raise MalformedFrame("field 'scores' must be an object")
    scores = {}
    for cmd in Command:
        if cmd.value not in raw_scores:
            raise MalformedFrame(f"scores missing command {cmd.value!r}")
        scores[cmd] = protocol.require_number(raw_scores, cmd.value, lo=0.0, hi=1.0)
    cls = _classification_from_scores(window_id, scores, state.config.stim)
    return _after_classification(state, cls, now_s)


def _classification_from_scores(
    window_id: int, scores: dict[Command, float], stim: StimulusTable
) -> Classification:
    by_preference = stim.ordered_by_frequency()
    predicted = max(by_preference, key=lambda c: (scores[c], -by_preference.index(c)))
    ranked = sorted(scores.values(), reverse=True)
    confidence = min(max(ranked[0] - ranked[1], 0.0), 1.0)
    return Classification(window_id=window_id, scores=scores, predicted=predicted, confidence=confidence)


def _decode_window(state: SessionState, window: SignalWindow, now_s: float) -> tuple[SessionState, list[dict]]:
    try:
        cls = classify(window, state.config.stim, state.config.decoder)
    except WindowTooShort as exc:
        raise MalformedFrame(str(exc)) from None
    return _after_classification(state, cls, now_s)


def _after_classification(
    state: SessionState, cls: Classification, now_s: float
) -> tuple[SessionState, list[dict]]:
    history = (state.history + (cls,))[-_HISTORY_LIMIT:]
    state = replace(state, history=history)
    frames = [protocol.frame_classification(cls)]
    command = smooth_decide(list(history), state.config.decoder, now_s, state.last_emit_s)
    if command is None:
        return state, frames
    state = replace(state, last_emit_s=now_s, history=())
    frames.append(protocol.frame_command(command))
    state, more = _apply_command(state, command)
    return state, frames + more


def _on_command_frame(state: SessionState, frame: dict) -> tuple[SessionState, list[dict]]:
    name = protocol.require_str(frame, "command")
    try:
        command = Command(name)
    except ValueError:
        raise MalformedFrame(f"bad command {name!r}") from None
    state, frames = _apply_command(state, command)
    return state, frames


def _apply_command(state: SessionState, command: Command) -> tuple[SessionState, list[dict]]:
    if state.board.to_move is not state.human_color:
        return state, [protocol.frame_error("BadPhase", "not the human's turn")]
    outcome = navigator.apply_command(state.cursor, command, state.board)
    if outcome.kind == "rejected":
        return state, [protocol.frame_error("IllegalMove", outcome.reason)]
    if outcome.kind in ("moved", "blocked"):
        state = replace(state, cursor=outcome.cursor)
        return state, [board_frame(state)]

    # proposed: commit the human move, then let the engine answer
    state, frames = _commit_move(state, outcome.move)
    if state.phase == "playing" and state.board.to_move is state.engine_color:
        state, engine_frames = _engine_turn(state)
        frames.extend(engine_frames)
    return state, frames


def _commit_move(state: SessionState, move: Move) -> tuple[SessionState, list[dict]]:
    color = state.board.to_move
    try:
        board = goban.play(state.board, move)
    except goban.IllegalMove as exc:
        return state, [protocol.frame_error("IllegalMove", exc.rule)]
    captures = (board.captures_black + board.captures_white) - (
        state.board.captures_black + state.board.captures_white
    )
    # resignations live in the result, not the record's move list
    move_no = len(state.moves) + 1
    moves = state.moves if move.kind == "resign" else state.moves + ((color, move),)
    state = replace(state, board=board, moves=moves)
    frames = [
        protocol.frame_move_played(color, move, move_no, captures),
        board_frame(state),
    ]
    if board.game_over:
        if board.resigned is not None:
            result = f"{board.resigned.opponent.letter}+Resign"
        else:
            result = goban.tromp_taylor_score(board, state.config.komi).result
        state = replace(state, phase="finished", result=result)
        frames.append(protocol.frame_game_over(result))
    return state, frames


def _engine_turn(state: SessionState) -> tuple[SessionState, list[dict]]:
    move_no = len(state.moves) + 1
    cfg = replace(
        state.config.engine,
        komi=state.config.komi,
        seed=derive(state.seed, "engine", move_no),
    )
    result = engine_mod.genmove(state.board, cfg)
    sample = assessment_from_search(result, state.board.to_move, move_no)
    state, frames = _commit_move(state, result.best)
    state = replace(state, eval_history=state.eval_history + (sample,))
    frames.append(protocol.frame_assessment(sample, assess(sample, state.config.assessor).label))

    if state.mode == "predictive" and state.phase == "playing":
        sugg_cfg = replace(cfg, seed=derive(state.seed, "suggest", move_no))
        sugg_result = engine_mod.genmove(state.board, sugg_cfg)
        top = top_suggestions(sugg_result, 3)
        best = top[0]
        text = (
            f"I suggest {move_to_vertex(best.move, state.board.size)} "
            f"(win {best.winrate * 100:.1f}%)."
        )
        frames.append(protocol.frame_suggestion(top, text))
    return state, frames
