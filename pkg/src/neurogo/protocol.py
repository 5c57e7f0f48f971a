"""Wire frames: tagged JSON messages linking decoder, server, engine, and UI.

One frame per WebSocket text message.  Builders keep a fixed key order and
round floats to six decimals so identical sessions serialize byte-identically.
"""

from __future__ import annotations

import json
from typing import Any

from .assessor import EvalSample, GameSituationLabel
from .commands import Command
from .decoder import Classification
from .engine import Suggestion
from .goban import Color, Move

CLIENT_TYPES = frozenset(
    {"hello", "impedance_report", "gaze", "window", "classification", "command"}
)
SERVER_TYPES = frozenset(
    {
        "hello",
        "classification",
        "command",
        "move_played",
        "board_state",
        "suggestion",
        "assessment",
        "game_over",
        "error",
    }
)
ALL_TYPES = CLIENT_TYPES | SERVER_TYPES


class MalformedFrame(ValueError):
    """Payload fails schema validation; surfaced to clients as an error frame."""


def dumps(frame: dict) -> str:
    return json.dumps(frame, separators=(",", ":"))


def _round(x: float) -> float:
    return round(float(x), 6)


def frame_hello(session_id: str, mode: str, human_color: Color, board_size: int) -> dict:
    return {
        "type": "hello",
        "session_id": session_id,
        "mode": mode,
        "human_color": human_color.letter,
        "board_size": board_size,
    }


def frame_classification(cls: Classification) -> dict:
    return {
        "type": "classification",
        "window_id": cls.window_id,
        "scores": {cmd.value: _round(cls.scores[cmd]) for cmd in Command},
        "predicted": cls.predicted.value,
        "confidence": _round(cls.confidence),
    }


def frame_command(command: Command) -> dict:
    return {"type": "command", "command": command.value}


def move_payload(move: Move) -> dict:
    if move.is_play:
        return {"kind": "play", "x": move.x, "y": move.y}
    return {"kind": move.kind}


def frame_move_played(color: Color, move: Move, move_no: int, captures: int) -> dict:
    return {
        "type": "move_played",
        "color": color.letter,
        "move": move_payload(move),
        "move_no": move_no,
        "captures": captures,
    }


def frame_board_state(size: int, grid: str, to_move: Color, cursor_x: int, cursor_y: int) -> dict:
    return {
        "type": "board_state",
        "size": size,
        "grid": grid,
        "to_move": to_move.letter,
        "cursor": {"x": cursor_x, "y": cursor_y},
    }


def frame_suggestion(suggestions: tuple[Suggestion, ...], text: str) -> dict:
    return {
        "type": "suggestion",
        "moves": [
            {"x": s.move.x, "y": s.move.y, "winrate": _round(s.winrate), "visits": s.visits}
            for s in suggestions
            if s.move.is_play
        ],
        "text": text,
    }


def frame_assessment(sample: EvalSample, label: GameSituationLabel) -> dict:
    return {
        "type": "assessment",
        "move_no": sample.move_no,
        "black_winrate": _round(sample.black_winrate),
        "simulations": sample.simulations,
        "label": label.value,
    }


def frame_game_over(result: str) -> dict:
    return {"type": "game_over", "result": result}


def frame_error(code: str, message: str) -> dict:
    return {"type": "error", "code": code, "message": message}


# ---------------------------------------------------------------------------
# payload validation


def frame_type(frame: Any) -> str:
    if not isinstance(frame, dict):
        raise MalformedFrame("frame must be a JSON object")
    tag = frame.get("type")
    if not isinstance(tag, str):
        raise MalformedFrame("frame needs a string 'type' field")
    return tag


def require_number(frame: dict, key: str, lo: float | None = None, hi: float | None = None) -> float:
    value = frame.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedFrame(f"field {key!r} must be a number")
    value = float(value)
    if lo is not None and value < lo:
        raise MalformedFrame(f"field {key!r} below {lo}")
    if hi is not None and value > hi:
        raise MalformedFrame(f"field {key!r} above {hi}")
    return value


def require_int(frame: dict, key: str, lo: int | None = None) -> int:
    value = frame.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedFrame(f"field {key!r} must be an integer")
    if lo is not None and value < lo:
        raise MalformedFrame(f"field {key!r} below {lo}")
    return value


def require_str(frame: dict, key: str) -> str:
    value = frame.get(key)
    if not isinstance(value, str):
        raise MalformedFrame(f"field {key!r} must be a string")
    return value
