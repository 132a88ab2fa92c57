"""Line-based engine control protocol.

Commands arrive one per line; every reply is `= <payload>` on success or
`? <message>` on failure, terminated by a blank line, so external match
scripts and referees built for GTP engines can drive this one. Replies are
byte-stable for a fixed command sequence, agent and weights.
"""

from __future__ import annotations

from typing import Iterable, TextIO

import numpy as np

from . import __version__
from .arena import Agent
from .board import (
    Board,
    Color,
    GameOverError,
    IllegalMoveError,
    cell_to_string,
    new_board,
    parse_cell,
)

ENGINE_NAME = "hexq"

_COLORS = {"white": Color.WHITE, "w": Color.WHITE, "black": Color.BLACK, "b": Color.BLACK}


def _ok(payload: str = "") -> str:
    return f"= {payload}\n\n"


def _fail(message: str) -> str:
    return f"? {message}\n\n"


class _Session:
    """Current board plus the undo stack of boards that preceded it."""

    def __init__(self, size: int):
        self.board = new_board(size)
        self.history: list[Board] = []

    def apply(self, color: Color, cell) -> None:
        board = self.board.with_to_move(color)
        nxt = board.play(cell)
        self.history.append(self.board)
        self.board = nxt

    def undo(self) -> bool:
        if not self.history:
            return False
        self.board = self.history.pop()
        return True


def engine_loop(
    commands: Iterable[str],
    out: TextIO,
    agent: Agent,
    size: int = 13,
) -> None:
    """Serve the command stream until `quit` or end of input."""
    session = _Session(size)
    rng = np.random.default_rng(0)
    for raw in commands:
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        cmd, args = parts[0], parts[1:]

        if cmd == "name":
            out.write(_ok(ENGINE_NAME))
        elif cmd == "version":
            out.write(_ok(__version__))
        elif cmd == "boardsize":
            try:
                session = _Session(int(args[0]))
            except (IndexError, ValueError):
                out.write(_fail("unacceptable size"))
                continue
            out.write(_ok())
        elif cmd == "clear_board":
            session = _Session(session.board.size)
            out.write(_ok())
        elif cmd == "play":
            if len(args) != 2 or args[0].lower() not in _COLORS:
                out.write(_fail("syntax error"))
                continue
            try:
                cell = parse_cell(args[1], session.board.size)
                session.apply(_COLORS[args[0].lower()], cell)
            except GameOverError:
                out.write(_fail("game over"))
            except (ValueError, IllegalMoveError):
                out.write(_fail("illegal move"))
            else:
                out.write(_ok())
        elif cmd == "genmove":
            if len(args) != 1 or args[0].lower() not in _COLORS:
                out.write(_fail("syntax error"))
                continue
            if session.board.winner() is not None:
                out.write(_fail("game over"))
                continue
            color = _COLORS[args[0].lower()]
            cell = agent.choose(session.board.with_to_move(color), rng)
            session.apply(color, cell)
            out.write(_ok(cell_to_string(cell)))
        elif cmd == "showboard":
            out.write(_ok("\n" + session.board.diagram()))
        elif cmd == "undo":
            out.write(_ok() if session.undo() else _fail("nothing to undo"))
        elif cmd == "quit":
            out.write(_ok())
            out.flush()
            break
        else:
            out.write(_fail("unknown command"))
        out.flush()
