"""GTP v2 client: drive an external Go engine over a line-oriented transport.

Commands are framed as `id command args`; responses are `=id payload` on
success and `?id message` on failure, terminated by a blank line.  Vertices
use column letters that skip I, with ranks counted from the bottom.
"""

from __future__ import annotations

import subprocess

from .goban import PASS, RESIGN, Color, Move

COLUMN_LETTERS = "ABCDEFGHJKLMNOPQRSTUVWXYZ"  # no I, per GTP convention


class ProtocolError(RuntimeError):
    """Engine sent something that is not a GTP response."""


class EngineFailure(RuntimeError):
    """Engine answered `?` (command failed)."""


class TransportClosed(RuntimeError):
    """Transport ended while a response was pending."""


def move_to_vertex(move: Move, size: int) -> str:
    if move.kind == "pass":
        return "pass"
    if move.kind == "resign":
        return "resign"
    return f"{COLUMN_LETTERS[move.x]}{size - move.y}"


def vertex_to_move(vertex: str, size: int) -> Move:
    v = vertex.strip().upper()
    if v == "PASS":
        return PASS
    if v == "RESIGN":
        return RESIGN
    if len(v) < 2 or v[0] not in COLUMN_LETTERS:
        raise ProtocolError(f"bad vertex {vertex!r}")
    x = COLUMN_LETTERS.index(v[0])
    try:
        rank = int(v[1:])
    except ValueError:
        raise ProtocolError(f"bad vertex {vertex!r}") from None
    y = size - rank
    if not (0 <= x < size and 0 <= y < size):
        raise ProtocolError(f"vertex {vertex!r} off a {size}x{size} board")
    return Move.play(x, y)


class SubprocessTransport:
    """Line transport over a child process's stdio."""

    def __init__(self, argv: list[str]):
        self.proc = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )

    def send_line(self, line: str) -> None:
        if self.proc.stdin is None or self.proc.poll() is not None:
            raise TransportClosed("engine process is gone")
        self.proc.stdin.write(line + "\n")
        self.proc.stdin.flush()

    def recv_line(self) -> str | None:
        if self.proc.stdout is None:
            return None
        line = self.proc.stdout.readline()
        if line == "":
            return None
        return line.rstrip("\n")

    def close(self) -> None:
        if self.proc.poll() is None:
            self.proc.terminate()
            try:
                self.proc.wait(timeout=2)
            except subprocess.TimeoutExpired:
                self.proc.kill()


class GtpSession:
    """Serialize commands to a GTP engine and parse its responses."""

    def __init__(self, transport, board_size: int = 19):
        self.transport = transport
        self.board_size = board_size
        self._next_id = 1

    def command(self, name: str, *args) -> str:
        """Send one command; return the response payload or raise on `?`."""
        cmd_id = self._next_id
        self._next_id += 1
        parts = [str(cmd_id), name] + [str(a) for a in args]
        self.transport.send_line(" ".join(parts))

        lines: list[str] = []
        while True:
            line = self.transport.recv_line()
            if line is None:
                raise TransportClosed(f"no response to {name!r}")
            if line == "" and lines:
                break
            if line == "":
                continue
            lines.append(line)

        head = lines[0]
        if not head or head[0] not in "=?":
            raise ProtocolError(f"malformed response line {head!r}")
        status = head[0]
        rest = head[1:]
        # optional id echo
        idx = 0
        while idx < len(rest) and rest[idx].isdigit():
            idx += 1
        echoed = rest[:idx]
        if echoed and int(echoed) != cmd_id:
            raise ProtocolError(f"response id {echoed} does not match {cmd_id}")
        payload = rest[idx:].strip()
        if len(lines) > 1:
            payload = "\n".join([payload] + lines[1:]) if payload else "\n".join(lines[1:])
        if status == "?":
            raise EngineFailure(payload or "engine reported failure")
        return payload

    def clear(self, size: int, komi: float) -> None:
        self.board_size = size
        self.command("boardsize", size)
        self.command("komi", komi)
        self.command("clear_board")

    def play(self, color: Color, move: Move) -> None:
        self.command("play", color.letter, move_to_vertex(move, self.board_size))

    def genmove(self, color: Color) -> Move:
        payload = self.command("genmove", color.letter)
        return vertex_to_move(payload, self.board_size)

    def quit(self) -> None:
        try:
            self.command("quit")
        except (TransportClosed, EngineFailure):
            pass
