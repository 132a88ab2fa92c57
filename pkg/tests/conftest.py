import itertools

import numpy as np
import pytest

from hexq.board import Board, Color, from_grid


def bfs_winner(grid: np.ndarray, size: int) -> Color | None:
    """Reference winner detection: breadth-first search over stone chains.

    Deliberately independent of the union-find implementation under test.
    """
    sq = np.asarray(grid).reshape(size, size)

    def reaches(color: Color, starts, goal) -> bool:
        seen = set()
        stack = [(r, c) for r, c in starts if sq[r, c] == color]
        seen.update(stack)
        while stack:
            r, c = stack.pop()
            if goal(r, c):
                return True
            for dr, dc in ((-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0)):
                nr, nc = r + dr, c + dc
                if 0 <= nr < size and 0 <= nc < size and (nr, nc) not in seen:
                    if sq[nr, nc] == color:
                        seen.add((nr, nc))
                        stack.append((nr, nc))
        return False

    white = reaches(Color.WHITE, [(r, 0) for r in range(size)], lambda r, c: c == size - 1)
    black = reaches(Color.BLACK, [(0, c) for c in range(size)], lambda r, c: r == size - 1)
    assert not (white and black), "two crossing chains cannot coexist"
    if white:
        return Color.WHITE
    if black:
        return Color.BLACK
    return None


def random_game(size: int, rng: np.random.Generator, first: Color = Color.WHITE):
    """Play uniformly random legal moves to the end; yield every position."""
    b = Board(size).with_to_move(first)
    yield b
    while b.winner() is None:
        moves = b.legal_moves()
        b = b.play(moves[rng.integers(len(moves))])
        yield b


def all_full_3x3_grids():
    """Every complete 2-coloring of the 3x3 board (512 grids)."""
    for bits in itertools.product((Color.WHITE, Color.BLACK), repeat=9):
        yield np.array(bits, dtype=np.int8)


@pytest.fixture
def rng():
    return np.random.default_rng(20240511)


def board_from_full_grid(grid: np.ndarray) -> Board:
    return from_grid(grid, Color.WHITE, size=3)
