"""The five-command control alphabet shared by the decoder, navigator and UI."""

from __future__ import annotations

from enum import Enum


class Command(Enum):
    UP = "up"
    DOWN = "down"
    LEFT = "left"
    RIGHT = "right"
    SELECT = "select"

    def __str__(self) -> str:
        return self.value


COMMANDS: tuple[Command, ...] = (
    Command.UP,
    Command.DOWN,
    Command.LEFT,
    Command.RIGHT,
    Command.SELECT,
)


def command_from_name(name: str) -> Command:
    try:
        return Command(name.lower())
    except ValueError:
        raise ValueError(f"unknown command {name!r}") from None
