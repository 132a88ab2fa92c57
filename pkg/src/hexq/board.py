"""Hex rules: board state, incremental connectivity, transforms and coordinates.

The board is an N x N rhombus of hexagonal cells. White owns the left and
right edges, Black owns the top and bottom edges; whoever joins their two
edges with a chain of their stones wins, and a full board always has exactly
one winner. Connectivity is tracked incrementally with a union-find over the
cells plus four virtual edge nodes, so winner detection is O(alpha) per move.
"""

from __future__ import annotations

from enum import IntEnum
from functools import lru_cache

import numpy as np

Cell = tuple[int, int]

# Six hex neighbours under the axial convention used throughout the engine.
NEIGHBOR_OFFSETS: tuple[Cell, ...] = ((-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0))

EMPTY = 0

MIN_BOARD_SIZE = 5
MAX_BOARD_SIZE = 13

_COLUMN_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class Color(IntEnum):
    """Stone/player color. White connects left-right, Black connects top-bottom."""

    WHITE = 1
    BLACK = 2

    @property
    def opponent(self) -> "Color":
        return Color.BLACK if self is Color.WHITE else Color.WHITE


class IllegalMoveError(ValueError):
    """Raised when a move targets an occupied or out-of-range cell."""


class GameOverError(ValueError):
    """Raised when a move is attempted after the game has been decided."""


@lru_cache(maxsize=None)
def _neighbor_table(size: int) -> tuple[tuple[int, ...], ...]:
    """Flat-index neighbour lists for every cell of a `size` board."""
    table = []
    for r in range(size):
        for c in range(size):
            acc = []
            for dr, dc in NEIGHBOR_OFFSETS:
                nr, nc = r + dr, c + dc
                if 0 <= nr < size and 0 <= nc < size:
                    acc.append(nr * size + nc)
            table.append(tuple(acc))
    return tuple(table)


@lru_cache(maxsize=None)
def adjacency_pairs(size: int) -> np.ndarray:
    """All unordered adjacent cell pairs (flat indices), each listed once."""
    pairs = []
    for idx, nbrs in enumerate(_neighbor_table(size)):
        for n in nbrs:
            if n > idx:
                pairs.append((idx, n))
    return np.asarray(pairs, dtype=np.int64)


class Board:
    """Immutable-by-convention Hex position.

    All mutating operations return a new board; instances may be shared
    freely across threads. Virtual edge nodes live at indices n*n..n*n+3
    in the union-find array (white-left, white-right, black-top,
    black-bottom).
    """

    __slots__ = ("size", "grid", "to_move", "move_count", "_parent", "_winner", "_enc")

    def __init__(self, size: int, _internal: bool = False):
        if size < 2 or size > 26:
            raise ValueError(f"unsupported board size {size}")
        self.size = size
        self.grid = np.zeros(size * size, dtype=np.int8)
        self.to_move = Color.WHITE
        self.move_count = 0
        self._parent = np.arange(size * size + 4, dtype=np.int32)
        self._winner: Color | None = None
        self._enc = None  # packed-encoding memo owned by hexq.encoding

    # -- virtual edge node indices ------------------------------------
    @property
    def _white_left(self) -> int:
        return self.size * self.size

    @property
    def _white_right(self) -> int:
        return self.size * self.size + 1

    @property
    def _black_top(self) -> int:
        return self.size * self.size + 2

    @property
    def _black_bottom(self) -> int:
        return self.size * self.size + 3

    def _find(self, x: int) -> int:
        parent = self._parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def _union(self, a: int, b: int) -> None:
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self._parent[rb] = ra

    def _copy(self) -> "Board":
        b = Board.__new__(Board)
        b.size = self.size
        b.grid = self.grid.copy()
        b.to_move = self.to_move
        b.move_count = self.move_count
        b._parent = self._parent.copy()
        b._winner = self._winner
        b._enc = None
        return b

    def _place(self, idx: int, color: Color) -> None:
        """Set a stone and union it with same-color neighbours and edges."""
        n = self.size
        self.grid[idx] = color
        for nbr in _neighbor_table(n)[idx]:
            if self.grid[nbr] == color:
                self._union(idx, nbr)
        r, c = divmod(idx, n)
        if color is Color.WHITE:
            if c == 0:
                self._union(idx, self._white_left)
            if c == n - 1:
                self._union(idx, self._white_right)
        else:
            if r == 0:
                self._union(idx, self._black_top)
            if r == n - 1:
                self._union(idx, self._black_bottom)

    def _refresh_winner(self) -> None:
        if self._find(self._white_left) == self._find(self._white_right):
            self._winner = Color.WHITE
        elif self._find(self._black_top) == self._find(self._black_bottom):
            self._winner = Color.BLACK
        else:
            self._winner = None

    # -- public API ----------------------------------------------------
    def cell_index(self, cell: Cell) -> int:
        r, c = cell
        if not (0 <= r < self.size and 0 <= c < self.size):
            raise IllegalMoveError(f"cell {cell} outside {self.size}x{self.size} board")
        return r * self.size + c

    def cell_color(self, cell: Cell) -> Color | None:
        v = self.grid[self.cell_index(cell)]
        return None if v == EMPTY else Color(v)

    def winner(self) -> Color | None:
        return self._winner

    def play(self, cell: Cell) -> "Board":
        """Place the to-move player's stone at `cell` and toggle the mover."""
        if self._winner is not None:
            raise GameOverError(f"game already won by {self._winner.name}")
        idx = self.cell_index(cell)
        if self.grid[idx] != EMPTY:
            raise IllegalMoveError(f"cell {cell} is occupied")
        nxt = self._copy()
        nxt._place(idx, self.to_move)
        nxt.move_count += 1
        nxt.to_move = self.to_move.opponent
        nxt._refresh_winner()
        return nxt

    def legal_moves(self) -> list[Cell]:
        """Empty cells in index order, or nothing once the game is decided."""
        if self._winner is not None:
            return []
        n = self.size
        return [divmod(int(i), n) for i in np.flatnonzero(self.grid == EMPTY)]

    def legal_indices(self) -> np.ndarray:
        if self._winner is not None:
            return np.empty(0, dtype=np.int64)
        return np.flatnonzero(self.grid == EMPTY)

    def with_to_move(self, color: Color) -> "Board":
        """Same position with the mover forced to `color`.

        Used for starting self-play episodes from database positions with a
        randomly chosen first mover, and by protocol front-ends that allow
        consecutive same-color setup moves.
        """
        b = self._copy()
        b.to_move = color
        return b

    def transpose_swap(self) -> "Board":
        """Mirror the position across the main diagonal and exchange colors.

        The result is the same game situation with the color labels swapped,
        so the mover keeps the same winning chances. Involution.
        """
        n = self.size
        sq = self.grid.reshape(n, n).T.copy().reshape(-1)
        swapped = np.zeros_like(sq)
        swapped[sq == Color.WHITE] = Color.BLACK
        swapped[sq == Color.BLACK] = Color.WHITE
        b = from_grid(swapped, self.to_move.opponent, size=n)
        b.move_count = self.move_count
        return b

    def flip180(self) -> "Board":
        """Rotate the board 180 degrees; colors and winner are unchanged."""
        b = from_grid(self.grid[::-1].copy(), self.to_move, size=self.size)
        b.move_count = self.move_count
        return b

    def connectivity_planes(self) -> dict[str, np.ndarray]:
        """Boolean cell masks for edge-connected stone groups.

        Keys: white_left, white_right, black_top, black_bottom. A cell is set
        when it holds a stone of the matching color whose group reaches that
        edge.
        """
        n2 = self.size * self.size
        roots = np.fromiter((self._find(i) for i in range(n2)), dtype=np.int64, count=n2)
        white = self.grid == Color.WHITE
        black = self.grid == Color.BLACK
        return {
            "white_left": white & (roots == self._find(self._white_left)),
            "white_right": white & (roots == self._find(self._white_right)),
            "black_top": black & (roots == self._find(self._black_top)),
            "black_bottom": black & (roots == self._find(self._black_bottom)),
        }

    def group_roots(self) -> np.ndarray:
        """Union-find root of every node including the four edge nodes."""
        total = self.size * self.size + 4
        return np.fromiter((self._find(i) for i in range(total)), dtype=np.int64, count=total)

    def diagram(self) -> str:
        """ASCII board, O = white stones, @ = black stones."""
        n = self.size
        symbols = {EMPTY: ".", Color.WHITE: "O", Color.BLACK: "@"}
        header = "   " + " ".join(_COLUMN_LETTERS[:n])
        lines = [header]
        for r in range(n):
            row = " ".join(symbols[int(v)] for v in self.grid[r * n : (r + 1) * n])
            lines.append(" " * r + f"{r + 1:2d} " + row)
        return "\n".join(lines)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Board):
            return NotImplemented
        return (
            self.size == other.size
            and self.to_move == other.to_move
            and bool(np.array_equal(self.grid, other.grid))
        )

    def __hash__(self) -> int:
        return hash((self.size, self.to_move, self.grid.tobytes()))

    def __repr__(self) -> str:
        return f"Board(size={self.size}, to_move={self.to_move.name}, moves={self.move_count})"


def new_board(size: int) -> Board:
    """Start position for a game on a supported board size."""
    if not MIN_BOARD_SIZE <= size <= MAX_BOARD_SIZE:
        raise ValueError(
            f"board size must be within {MIN_BOARD_SIZE}..{MAX_BOARD_SIZE}, got {size}"
        )
    return Board(size)


def from_grid(grid: np.ndarray, to_move: Color, size: int | None = None) -> Board:
    """Rebuild a board (including connectivity) from a flat or square grid.

    Accepts any size >= 2; sizes below MIN_BOARD_SIZE are permitted here for
    analysis and testing, while `new_board` enforces the playable range.
    """
    flat = np.asarray(grid, dtype=np.int8).reshape(-1)
    n = size if size is not None else int(round(len(flat) ** 0.5))
    if n * n != len(flat):
        raise ValueError("grid is not square")
    b = Board(n)
    b.grid = flat.copy()
    occupied = np.flatnonzero(flat != EMPTY)
    for idx in occupied:
        b._place(int(idx), Color(int(flat[idx])))
    b.to_move = to_move
    b.move_count = int(len(occupied))
    b._refresh_winner()
    return b


def from_moves(size: int, moves: list[Cell], first: Color = Color.WHITE) -> Board:
    """Replay a move sequence from an empty board, alternating from `first`."""
    b = Board(size).with_to_move(first)
    for cell in moves:
        b = b.play(cell)
    return b


def parse_cell(text: str, size: int) -> Cell:
    """Parse "a1"-style notation: letter is the column, number the row."""
    t = text.strip().lower()
    if len(t) < 2 or not t[0].isalpha() or not t[1:].isdigit():
        raise ValueError(f"malformed cell {text!r}")
    col = _COLUMN_LETTERS.index(t[0])
    row = int(t[1:]) - 1
    if not (0 <= row < size and 0 <= col < size):
        raise ValueError(f"cell {text!r} outside {size}x{size} board")
    return (row, col)


def cell_to_string(cell: Cell) -> str:
    r, c = cell
    return f"{_COLUMN_LETTERS[c]}{r + 1}"
