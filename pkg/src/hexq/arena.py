"""Agent-vs-agent evaluation: single games and two tournament formats.

The first mover always plays White. Games inside a tournament each run on
their own child RNG stream indexed by game number, so a report is a pure
function of (agents, seed) no matter how the loop is scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .board import Board, Cell, Color, cell_to_string, new_board
from .circuit import heuristic_action_values
from .encoding import encode, normalize_white
from .net import QNetwork, forward


class Agent:
    """A move-picking policy; must return a legal cell for any live board."""

    label: str
    # None means the agent plays any size; networks are tied to one.
    board_size: int | None = None

    def choose(self, board: Board, rng: np.random.Generator) -> Cell:
        raise NotImplementedError


class UniformRandom(Agent):
    def __init__(self, label: str = "random"):
        self.label = label

    def choose(self, board: Board, rng: np.random.Generator) -> Cell:
        legal = board.legal_indices()
        return divmod(int(legal[rng.integers(legal.size)]), board.size)


class Heuristic1Ply(Agent):
    """Plays the highest resistance-heuristic value; ties split randomly."""

    def __init__(self, mode: str = "exact", label: str | None = None):
        if mode not in ("exact", "estimate"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.label = label if label is not None else f"heuristic-{mode}"

    def choose(self, board: Board, rng: np.random.Generator) -> Cell:
        hv = heuristic_action_values(board, mode=self.mode)
        legal = board.legal_indices()
        vals = hv.values[legal]
        best = legal[vals == vals.max()]
        return divmod(int(best[rng.integers(best.size)]), board.size)


class NetGreedy(Agent):
    """Argmax of the Q-network over legal cells, optionally epsilon-noisy.

    The net only understands white-to-move positions, so black-to-move
    boards are transpose-swapped in and the chosen cell mapped back.
    """

    def __init__(self, net: QNetwork, epsilon: float = 0.0, label: str = "net"):
        if not 0.0 <= epsilon <= 1.0:
            raise ValueError("epsilon must be in [0, 1]")
        self.net = net
        self.epsilon = epsilon
        self.label = label
        self.board_size = net.board_size

    def choose(self, board: Board, rng: np.random.Generator) -> Cell:
        swapped = board.to_move is not Color.WHITE
        view = normalize_white(board)
        legal = view.legal_indices()
        if self.epsilon > 0.0 and rng.random() < self.epsilon:
            pick = int(legal[rng.integers(legal.size)])
        else:
            q, _ = forward(self.net, encode(view, dtype=self.net.config.dtype),
                           keep_cache=False)
            pick = int(legal[np.argmax(q[legal])])
        r, c = divmod(pick, view.size)
        return (c, r) if swapped else (r, c)


@dataclass
class GameRecord:
    opening: Cell | None
    first_agent: str
    winner: str
    moves: list[Cell]


@dataclass
class MatchReport:
    """Tournament outcome from agent a's perspective."""

    agent_a: str
    agent_b: str
    seed: int
    records: list[GameRecord] = field(default_factory=list)

    @property
    def games(self) -> int:
        return len(self.records)

    def _wins(self, label: str, as_first: bool) -> int:
        return sum(
            1 for r in self.records if r.winner == label and (r.first_agent == label) == as_first
        )

    @property
    def wins_a_first(self) -> int:
        return self._wins(self.agent_a, True)

    @property
    def wins_a_second(self) -> int:
        return self._wins(self.agent_a, False)

    @property
    def wins_a(self) -> int:
        return self.wins_a_first + self.wins_a_second

    @property
    def wins_b(self) -> int:
        return self.games - self.wins_a

    def win_rate_a(self) -> float:
        return self.wins_a / self.games

    def summary(self) -> str:
        rows = [
            ("games", self.games, ""),
            (f"{self.agent_a} wins moving first", self.wins_a_first,
             f"of {sum(1 for r in self.records if r.first_agent == self.agent_a)}"),
            (f"{self.agent_a} wins moving second", self.wins_a_second,
             f"of {sum(1 for r in self.records if r.first_agent != self.agent_a)}"),
            (f"{self.agent_b} wins", self.wins_b, ""),
        ]
        width = max(len(name) for name, _, _ in rows)
        lines = [f"{self.agent_a} vs {self.agent_b} (seed {self.seed})"]
        lines += [f"  {name.ljust(width)}  {count:5d} {extra}".rstrip() for name, count, extra in rows]
        return "\n".join(lines)

    def to_csv(self, path) -> None:
        lines = ["opening,first_agent,winner,moves"]
        for r in self.records:
            opening = cell_to_string(r.opening) if r.opening is not None else "-"
            moves = " ".join(cell_to_string(m) for m in r.moves)
            lines.append(f"{opening},{r.first_agent},{r.winner},{moves}")
        Path(path).write_text("\n".join(lines) + "\n")


def play_game(
    first: Agent,
    second: Agent,
    size: int,
    rng: np.random.Generator,
    opening: Cell | None = None,
) -> GameRecord:
    """Play to termination; a supplied opening is forced as move 1."""
    board = new_board(size)
    moves: list[Cell] = []
    if opening is not None:
        board = board.play(opening)
        moves.append(opening)
    players = (first, second)
    while board.winner() is None:
        agent = players[len(moves) % 2]
        cell = agent.choose(board, rng)
        board = board.play(cell)
        moves.append(cell)
    winner = first if board.winner() is Color.WHITE else second
    return GameRecord(opening, first.label, winner.label, moves)


def _check_labels(a: Agent, b: Agent) -> None:
    if a.label == b.label:
        raise ValueError(f"agents need distinct labels, both are {a.label!r}")


def tournament_all_openings(a: Agent, b: Agent, size: int, seed: int = 0) -> MatchReport:
    """One game per opening cell per mover order: exactly 2 * N * N games."""
    _check_labels(a, b)
    report = MatchReport(a.label, b.label, seed)
    cells = [(r, c) for r in range(size) for c in range(size)]
    streams = np.random.default_rng(seed).spawn(2 * len(cells))
    for i, opening in enumerate(cells):
        report.records.append(play_game(a, b, size, streams[2 * i], opening))
        report.records.append(play_game(b, a, size, streams[2 * i + 1], opening))
    return report


def tournament_unrestricted(
    a: Agent, b: Agent, size: int, n_games: int, seed: int = 0
) -> MatchReport:
    """n games with free openings, the first-mover role alternating from a."""
    _check_labels(a, b)
    if n_games < 1:
        raise ValueError("n_games must be positive")
    report = MatchReport(a.label, b.label, seed)
    streams = np.random.default_rng(seed).spawn(n_games)
    for i in range(n_games):
        first, second = (a, b) if i % 2 == 0 else (b, a)
        report.records.append(play_game(first, second, size, streams[i]))
    return report
