"""hexq: a self-play deep Q-learning engine for the game of Hex."""

__version__ = "0.1.0"

from .board import (
    Board,
    Cell,
    Color,
    GameOverError,
    IllegalMoveError,
    cell_to_string,
    from_grid,
    from_moves,
    new_board,
    parse_cell,
)

__all__ = [
    "Board",
    "Cell",
    "Color",
    "GameOverError",
    "IllegalMoveError",
    "cell_to_string",
    "from_grid",
    "from_moves",
    "new_board",
    "parse_cell",
    "__version__",
]
