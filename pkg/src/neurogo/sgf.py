"""Minimal SGF FF[4] reader/writer for plain game records.

Covers the subset we produce: SZ, KM, RE and alternating B/W move properties,
with passes encoded as empty values (`B[]`).  Parsing reports the byte offset
of the first offending character.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .goban import Color, Move

_COORDS = "abcdefghijklmnopqrstuvwxyz"


class ParseError(ValueError):
    def __init__(self, offset: int, reason: str):
        super().__init__(f"SGF parse error at byte {offset}: {reason}")
        self.offset = offset
        self.reason = reason


@dataclass(frozen=True)
class GameRecord:
    size: int = 19
    komi: float = 7.5
    moves: tuple[tuple[Color, Move], ...] = field(default_factory=tuple)
    result: str | None = None

    def __post_init__(self) -> None:
        expected = Color.BLACK
        for color, move in self.moves:
            if move.kind == "resign":
                raise ValueError("resignations belong in result, not the move list")
            if color is not expected:
                raise ValueError("move colors must alternate starting with Black")
            expected = expected.opponent


def _point_to_sgf(move: Move) -> str:
    return _COORDS[move.x] + _COORDS[move.y]


def to_sgf(record: GameRecord) -> str:
    parts = [f"(;FF[4]GM[1]SZ[{record.size}]KM[{record.komi:g}]"]
    if record.result is not None:
        parts.append(f"RE[{record.result}]")
    for color, move in record.moves:
        value = _point_to_sgf(move) if move.is_play else ""
        parts.append(f";{color.letter}[{value}]")
    parts.append(")")
    return "".join(parts)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise ParseError(self.pos, f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def peek(self) -> str | None:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def read_ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        if self.pos == start:
            raise ParseError(start, "expected property identifier")
        return self.text[start : self.pos]

    def read_value(self) -> tuple[int, str]:
        self.expect("[")
        start = self.pos
        out = []
        while True:
            if self.pos >= len(self.text):
                raise ParseError(start, "unterminated property value")
            ch = self.text[self.pos]
            if ch == "\\" and self.pos + 1 < len(self.text):
                out.append(self.text[self.pos + 1])
                self.pos += 2
                continue
            if ch == "]":
                self.pos += 1
                return start, "".join(out)
            out.append(ch)
            self.pos += 1


def _parse_move_value(value: str, size: int, offset: int) -> Move:
    if value == "" or (size <= 19 and value == "tt"):  # FF[3] pass compatibility
        return Move("pass")
    if len(value) != 2:
        raise ParseError(offset, f"move value must be two letters, got {value!r}")
    x, y = _COORDS.find(value[0]), _COORDS.find(value[1])
    if x < 0 or y < 0 or x >= size or y >= size:
        raise ParseError(offset, f"coordinate {value!r} off a {size}x{size} board")
    return Move.play(x, y)


def from_sgf(text: str) -> GameRecord:
    sc = _Scanner(text)
    sc.expect("(")
    sc.expect(";")

    size = 19
    komi = 7.5
    result: str | None = None
    raw_moves: list[tuple[Color, int, str]] = []

    while True:
        ch = sc.peek()
        if ch is None:
            raise ParseError(sc.pos, "unterminated game tree")
        if ch == ")":
            sc.pos += 1
            break
        if ch == ";":
            sc.pos += 1
            continue
        ident = sc.read_ident()
        values = []
        while sc.peek() == "[":
            values.append(sc.read_value())
        if not values:
            raise ParseError(sc.pos, f"property {ident} has no value")
        offset, value = values[0]
        if ident == "SZ":
            try:
                size = int(value)
            except ValueError:
                raise ParseError(offset, f"bad board size {value!r}") from None
            if not 1 <= size <= 25:
                raise ParseError(offset, f"unsupported board size {size}")
        elif ident == "KM":
            try:
                komi = float(value)
            except ValueError:
                raise ParseError(offset, f"bad komi {value!r}") from None
        elif ident == "RE":
            result = value
        elif ident in ("B", "W"):
            raw_moves.append((Color.BLACK if ident == "B" else Color.WHITE, offset, value))
        # other root properties (FF, GM, PB, ...) are accepted and ignored

    moves = tuple(
        (color, _parse_move_value(value, size, offset)) for color, offset, value in raw_moves
    )
    try:
        return GameRecord(size=size, komi=komi, moves=moves, result=result)
    except ValueError as exc:
        raise ParseError(0, str(exc)) from None
