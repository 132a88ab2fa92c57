"""HTTP JSON API for browser play against the engine.

One network is loaded read-only at startup and shared by every session; each
session serializes its own requests behind a lock. The human always owns the
next move after creation, whichever color they picked; the engine answers
within the same move request once it is its turn.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .arena import Agent
from .board import Board, Cell, Color, cell_to_string, new_board, parse_cell

_COLOR_NAMES = {Color.WHITE: "white", Color.BLACK: "black"}
_NAMED_COLORS = {"white": Color.WHITE, "black": Color.BLACK}


@dataclass
class GameSession:
    id: str
    board: Board
    human: Color
    history: list[Cell] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def status(self) -> str:
        return "finished" if self.board.winner() is not None else "in_progress"

    def state(self) -> dict:
        winner = self.board.winner()
        return {
            "id": self.id,
            "size": self.board.size,
            "cells": [
                _COLOR_NAMES.get(Color(v), "empty") if v else "empty" for v in self.board.grid
            ],
            "to_move": _COLOR_NAMES[self.board.to_move],
            "status": self.status,
            "winner": _COLOR_NAMES[winner] if winner is not None else None,
            "history": [cell_to_string(c) for c in self.history],
        }

    def apply(self, cell: Cell) -> None:
        self.board = self.board.play(cell)
        self.history.append(cell)


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def create_app(agent: Agent) -> FastAPI:
    app = FastAPI(title="hexq", docs_url=None, redoc_url=None)
    sessions: dict[str, GameSession] = {}
    counter = itertools.count(1)
    registry_lock = threading.Lock()
    rng = np.random.default_rng(0)

    async def read_json(request: Request) -> dict | None:
        try:
            body = await request.json()
        except Exception:
            return None
        return body if isinstance(body, dict) else None

    @app.post("/game")
    async def create_game(request: Request):
        body = await read_json(request)
        if body is None:
            return _error(400, "malformed body")
        size = body.get("size", 13)
        human = body.get("human_color", "black")
        if not isinstance(size, int) or not 5 <= size <= 13:
            return _error(400, "size must be an integer in 5..13")
        if agent.board_size is not None and size != agent.board_size:
            return _error(400, f"engine weights only support size {agent.board_size}")
        if human not in _NAMED_COLORS:
            return _error(400, "human_color must be white or black")
        color = _NAMED_COLORS[human]
        with registry_lock:
            sid = f"g{next(counter)}"
            session = GameSession(sid, new_board(size).with_to_move(color), color)
            sessions[sid] = session
        return {
            "id": sid,
            "board": session.state()["cells"],
            "to_move": _COLOR_NAMES[session.board.to_move],
        }

    @app.get("/game/{sid}")
    async def get_game(sid: str):
        session = sessions.get(sid)
        if session is None:
            return _error(404, "unknown game")
        with session.lock:
            return session.state()

    @app.post("/game/{sid}/move")
    async def post_move(sid: str, request: Request):
        session = sessions.get(sid)
        if session is None:
            return _error(404, "unknown game")
        body = await read_json(request)
        if body is None or not isinstance(body.get("cell"), str):
            return _error(400, "malformed body")
        with session.lock:
            if session.status == "finished":
                return _error(409, "game over")
            if session.board.to_move is not session.human:
                return _error(409, "wrong turn")
            try:
                cell = parse_cell(body["cell"], session.board.size)
            except ValueError:
                return _error(400, "malformed cell")
            if session.board.grid[cell[0] * session.board.size + cell[1]] != 0:
                return _error(409, "illegal move")
            session.apply(cell)
            engine_move = None
            if session.status != "finished":
                reply = agent.choose(session.board, rng)
                session.apply(reply)
                engine_move = cell_to_string(reply)
            state = session.state()
            state["engine_move"] = engine_move
            return state

    return app


def serve(agent: Agent, port: int, host: str = "127.0.0.1") -> None:
    import uvicorn

    uvicorn.run(create_app(agent), host=host, port=port, log_level="warning")
