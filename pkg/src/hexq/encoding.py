"""Network input encoding: 6 binary channels over an (N+4) x (N+4) grid.

Channel order: white present, black present, white group connected to the
left edge, white connected right, black connected top, black connected
bottom. Two rows/columns of padding on every side belong to the owning edge
color and carry its connected flag; the 2x2 corner pads belong to both
colors at once. Boards are always encoded from White's perspective, so the
caller must transpose-swap a black-to-move position first.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .board import Board, Color

PAD = 2
NUM_CHANNELS = 6

CH_WHITE = 0
CH_BLACK = 1
CH_WHITE_LEFT = 2
CH_WHITE_RIGHT = 3
CH_BLACK_TOP = 4
CH_BLACK_BOTTOM = 5


def tensor_size(board_size: int) -> int:
    return board_size + 2 * PAD


@lru_cache(maxsize=None)
def _pad_template(board_size: int) -> np.ndarray:
    """Constant padding planes shared by every board of one size.

    Setting full columns for white and full rows for black makes the four
    corner blocks carry both colors and both owning-edge flags.
    """
    h = tensor_size(board_size)
    t = np.zeros((NUM_CHANNELS, h, h), dtype=np.float32)
    t[CH_WHITE, :, :PAD] = 1.0
    t[CH_WHITE_LEFT, :, :PAD] = 1.0
    t[CH_WHITE, :, h - PAD :] = 1.0
    t[CH_WHITE_RIGHT, :, h - PAD :] = 1.0
    t[CH_BLACK, :PAD, :] = 1.0
    t[CH_BLACK_TOP, :PAD, :] = 1.0
    t[CH_BLACK, h - PAD :, :] = 1.0
    t[CH_BLACK_BOTTOM, h - PAD :, :] = 1.0
    return t


def encode(board: Board, dtype: np.dtype = np.float32) -> np.ndarray:
    """Encode a white-to-move board as a (6, N+4, N+4) array of 0/1 values."""
    if board.to_move is not Color.WHITE:
        raise ValueError("encode expects a white-to-move board; transpose_swap first")
    n = board.size
    t = _pad_template(n).astype(dtype, copy=True)
    sq = board.grid.reshape(n, n)
    inner = t[:, PAD : PAD + n, PAD : PAD + n]
    inner[CH_WHITE] = sq == Color.WHITE
    inner[CH_BLACK] = sq == Color.BLACK
    planes = board.connectivity_planes()
    inner[CH_WHITE_LEFT] = planes["white_left"].reshape(n, n)
    inner[CH_WHITE_RIGHT] = planes["white_right"].reshape(n, n)
    inner[CH_BLACK_TOP] = planes["black_top"].reshape(n, n)
    inner[CH_BLACK_BOTTOM] = planes["black_bottom"].reshape(n, n)
    return t


def packed_planes(board: Board) -> np.ndarray:
    """One bit per plane cell, packed to uint8 and memoized on the board.

    Replayed boards get encoded once and unpacked per sampled batch, which
    keeps the buffer compact (tens of bytes per position) without paying the
    plane construction cost on every draw.
    """
    p = board._enc
    if p is None:
        p = np.packbits(encode(board, dtype=np.uint8).ravel())
        board._enc = p
    return p


def encode_batch(boards: list[Board], dtype: np.dtype = np.float32) -> np.ndarray:
    """Stack encodings of same-size boards into a (B, 6, N+4, N+4) array."""
    if not boards:
        raise ValueError("empty batch")
    h = tensor_size(boards[0].size)
    packed = np.stack([packed_planes(b) for b in boards])
    bits = np.unpackbits(packed, axis=1, count=NUM_CHANNELS * h * h)
    return bits.reshape(len(boards), NUM_CHANNELS, h, h).astype(dtype)


def rotate180_tensor(t: np.ndarray) -> np.ndarray:
    """Rotate an encoded state 180 degrees.

    Rotation maps the left edge onto the right edge and top onto bottom, so
    the two connected-flag channel pairs swap along with the spatial flip.
    """
    flipped = t[..., ::-1, ::-1]
    perm = [CH_WHITE, CH_BLACK, CH_WHITE_RIGHT, CH_WHITE_LEFT, CH_BLACK_BOTTOM, CH_BLACK_TOP]
    return flipped[..., perm, :, :].copy()


def normalize_white(board: Board) -> Board:
    """Return an equivalent white-to-move board (transpose-swap if needed)."""
    return board if board.to_move is Color.WHITE else board.transpose_swap()
