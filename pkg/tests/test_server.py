import numpy as np
import pytest
from fastapi.testclient import TestClient

from hexq.arena import Agent, UniformRandom
from hexq.board import Board, Cell, from_moves, parse_cell
from hexq.server import create_app


class BottomRowAgent(Agent):
    """Deterministic filler that never threatens the top row."""

    label = "bottom"

    def choose(self, board: Board, rng) -> Cell:
        n = board.size
        for c in range(n):
            if board.grid[(n - 1) * n + c] == 0:
                return (n - 1, c)
        legal = board.legal_indices()
        return divmod(int(legal[0]), n)


@pytest.fixture
def client():
    return TestClient(create_app(BottomRowAgent()))


def new_game(client, size=5, human="white"):
    resp = client.post("/game", json={"size": size, "human_color": human})
    assert resp.status_code == 200
    return resp.json()


class TestCreate:
    def test_create_returns_id_board_to_move(self, client):
        body = new_game(client, size=5, human="white")
        assert set(body) == {"id", "board", "to_move"}
        assert body["to_move"] == "white"
        assert body["board"] == ["empty"] * 25

    def test_human_color_owns_first_move(self, client):
        assert new_game(client, human="black")["to_move"] == "black"
        assert new_game(client, human="white")["to_move"] == "white"

    def test_defaults(self, client):
        body = client.post("/game", json={}).json()
        assert len(body["board"]) == 169
        assert body["to_move"] == "black"

    def test_bad_requests(self, client):
        assert client.post("/game", json={"size": 4}).status_code == 400
        assert client.post("/game", json={"size": "13"}).status_code == 400
        assert client.post("/game", json={"human_color": "red"}).status_code == 400
        assert client.post("/game", json=[1, 2]).status_code == 400
        resp = client.post("/game", content=b"not json",
                           headers={"content-type": "application/json"})
        assert resp.status_code == 400
        assert "error" in resp.json()

    def test_ids_are_unique(self, client):
        ids = {new_game(client)["id"] for _ in range(5)}
        assert len(ids) == 5

    def test_size_must_match_engine_weights(self):
        from hexq.arena import NetGreedy
        from hexq.net import NetConfig, init_network

        engine = NetGreedy(init_network(NetConfig(5, 1, 2, 2)))
        client = TestClient(create_app(engine))
        resp = client.post("/game", json={"size": 7})
        assert resp.status_code == 400
        assert "size 5" in resp.json()["error"]
        assert client.post("/game", json={"size": 5}).status_code == 200


class TestGet:
    def test_unknown_game_404(self, client):
        resp = client.get("/game/nope")
        assert resp.status_code == 404
        assert resp.json() == {"error": "unknown game"}

    def test_full_state_shape(self, client):
        gid = new_game(client, size=5)["id"]
        state = client.get(f"/game/{gid}").json()
        assert set(state) == {"id", "size", "cells", "to_move", "status", "winner", "history"}
        assert state["size"] == 5
        assert state["status"] == "in_progress"
        assert state["winner"] is None
        assert state["history"] == []


class TestMove:
    def test_move_gets_engine_reply(self, client):
        gid = new_game(client, size=5, human="white")["id"]
        resp = client.post(f"/game/{gid}/move", json={"cell": "a1"})
        assert resp.status_code == 200
        state = resp.json()
        assert state["engine_move"] == "a5"
        assert state["history"] == ["a1", "a5"]
        assert state["to_move"] == "white"
        assert state["cells"][0] == "white"
        assert state["cells"][20] == "black"

    def test_response_matches_get(self, client):
        gid = new_game(client, size=5, human="white")["id"]
        posted = client.post(f"/game/{gid}/move", json={"cell": "c3"}).json()
        fetched = client.get(f"/game/{gid}").json()
        posted.pop("engine_move")
        assert posted == fetched

    def test_unknown_game(self, client):
        assert client.post("/game/zz/move", json={"cell": "a1"}).status_code == 404

    def test_malformed_bodies(self, client):
        gid = new_game(client, size=5)["id"]
        url = f"/game/{gid}/move"
        assert client.post(url, json={}).status_code == 400
        assert client.post(url, json={"cell": 3}).status_code == 400
        assert client.post(url, json={"cell": "z99"}).status_code == 400
        resp = client.post(url, content=b"{", headers={"content-type": "application/json"})
        assert resp.status_code == 400

    def test_occupied_cell_409_state_unchanged(self, client):
        gid = new_game(client, size=5, human="white")["id"]
        client.post(f"/game/{gid}/move", json={"cell": "a1"})
        before = client.get(f"/game/{gid}").json()
        resp = client.post(f"/game/{gid}/move", json={"cell": "a1"})
        assert resp.status_code == 409
        assert resp.json() == {"error": "illegal move"}
        assert client.get(f"/game/{gid}").json() == before

    def test_win_and_lockout(self, client):
        gid = new_game(client, size=5, human="white")["id"]
        last = None
        for col in "abcde":
            last = client.post(f"/game/{gid}/move", json={"cell": f"{col}1"})
            assert last.status_code == 200
        state = last.json()
        assert state["status"] == "finished"
        assert state["winner"] == "white"
        assert state["engine_move"] is None
        assert len(state["history"]) == 9
        resp = client.post(f"/game/{gid}/move", json={"cell": "b2"})
        assert resp.status_code == 409
        assert resp.json() == {"error": "game over"}

    def test_history_replays_to_cells(self, client):
        gid = new_game(client, size=5, human="white")["id"]
        for cell in ("c3", "a2", "b4"):
            client.post(f"/game/{gid}/move", json={"cell": cell})
        state = client.get(f"/game/{gid}").json()
        moves = [parse_cell(c, 5) for c in state["history"]]
        replayed = from_moves(5, moves)
        names = {0: "empty", 1: "white", 2: "black"}
        assert [names[int(v)] for v in replayed.grid] == state["cells"]

    def test_engine_aware_sessions_are_isolated(self, client):
        g1 = new_game(client, size=5, human="white")["id"]
        g2 = new_game(client, size=5, human="white")["id"]
        client.post(f"/game/{g1}/move", json={"cell": "a1"})
        assert client.get(f"/game/{g2}").json()["history"] == []


class TestRandomEngineGame:
    def test_random_engine_always_replies_legally(self):
        client = TestClient(create_app(UniformRandom()))
        gid = new_game(client, size=5, human="black")["id"]
        state = client.get(f"/game/{gid}").json()
        while state["status"] == "in_progress":
            empty = [i for i, v in enumerate(state["cells"]) if v == "empty"]
            cell = f"{'abcde'[empty[0] % 5]}{empty[0] // 5 + 1}"
            resp = client.post(f"/game/{gid}/move", json={"cell": cell})
            assert resp.status_code == 200
            state = client.get(f"/game/{gid}").json()
        assert state["winner"] in ("white", "black")
        assert len(state["history"]) <= 25
