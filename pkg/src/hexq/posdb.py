"""Starting-position databases built from noisy one-ply self-play.

Each recorded game opens with a uniformly random move; every later move is
drawn from a softmax over the mover's exact-mode action values. All plies of
every game count as stored positions and are sampled uniformly, duplicates
included. Databases round-trip through a small text format: a header line
followed by one game per line in letter-number notation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .board import Board, Cell, cell_to_string, from_moves, new_board, parse_cell
from .circuit import heuristic_action_values

DEFAULT_TEMPERATURE = 0.2


def softmax_select(values: np.ndarray, temperature: float, rng: np.random.Generator) -> int:
    """Sample an index with probability proportional to exp(value / temperature).

    The maximum is subtracted before exponentiating, so arbitrarily large
    values stay finite and a tiny temperature degenerates to argmax.
    """
    if temperature <= 0.0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("values must be a nonempty 1-D array")
    if not np.all(np.isfinite(v)):
        raise ValueError("values must be finite")
    weights = np.exp((v - v.max()) / temperature)
    cum = np.cumsum(weights)
    pick = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    return min(pick, v.size - 1)


@dataclass
class PositionDatabase:
    """Finished games whose prefixes serve as training start states."""

    size: int
    games: list[list[Cell]]
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self._cum = np.cumsum([len(g) for g in self.games], dtype=np.int64)

    @property
    def n_positions(self) -> int:
        """Count of stored positions: every pre-move ply of every game."""
        return int(self._cum[-1]) if self.games else 0

    def sample_position(self, rng: np.random.Generator) -> Board:
        """Uniform draw over all stored plies; the result never has a winner."""
        if not self.games:
            raise ValueError("empty database")
        k = int(rng.integers(self.n_positions))
        g = int(np.searchsorted(self._cum, k, side="right"))
        ply = k - (int(self._cum[g - 1]) if g else 0)
        return from_moves(self.size, self.games[g][:ply])


def generate_db(
    size: int,
    n_games: int,
    rng: np.random.Generator,
    temperature: float = DEFAULT_TEMPERATURE,
) -> PositionDatabase:
    """Self-play n_games to completion and record their move sequences.

    Each game runs on its own child RNG stream, so game k is reproducible
    from the root seed regardless of how many games follow it.
    """
    if n_games < 1:
        raise ValueError("n_games must be positive")
    games: list[list[Cell]] = []
    for child in rng.spawn(n_games):
        board = new_board(size)
        moves: list[Cell] = []
        while board.winner() is None:
            legal = board.legal_indices()
            if not moves:
                pick = int(legal[child.integers(legal.size)])
            else:
                hv = heuristic_action_values(board, mode="exact")
                pick = int(legal[softmax_select(hv.values[legal], temperature, child)])
            cell = divmod(pick, size)
            board = board.play(cell)
            moves.append(cell)
        games.append(moves)
    return PositionDatabase(size, games)


def save_db(db: PositionDatabase, path) -> None:
    lines = [f"size={db.size} count={len(db.games)}"]
    lines.extend(" ".join(cell_to_string(c) for c in g) for g in db.games)
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_db(path) -> PositionDatabase:
    """Parse and fully validate a database file.

    Every game line must replay legally from an empty board and end the
    moment a player wins; anything else is a corrupt file.
    """
    text = Path(path).read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty database file")
    head = lines[0].split()
    if len(head) != 2 or not head[0].startswith("size=") or not head[1].startswith("count="):
        raise ValueError(f"malformed header {lines[0]!r}")
    size = int(head[0][5:])
    count = int(head[1][6:])
    if not 5 <= size <= 13:
        raise ValueError(f"size {size} outside the supported 5..13 range")
    if len(lines) - 1 != count:
        raise ValueError(f"header promises {count} games, file has {len(lines) - 1}")
    games = []
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            moves = [parse_cell(tok, size) for tok in line.split()]
            board = from_moves(size, moves)
        except Exception as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
        if board.winner() is None:
            raise ValueError(f"line {lineno}: game does not end in a win")
        games.append(moves)
    return PositionDatabase(size, games)
