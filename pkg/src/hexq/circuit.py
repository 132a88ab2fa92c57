"""Electrical-resistance evaluation of Hex positions.

A player's position is scored by putting a unit voltage drop across their
two edges, treating their stones as perfect conductors, opponent stones as
perfect insulators, and empty cells as unit resistors (a link between
adjacent cells has resistance r(a)+r(b)). Moves are then rated in [-1, 1]
by comparing the post-move crossing currents of the two players:

    q = 1 - c2/c1   when c1 > c2
    q = c1/c2 - 1   when c2 > c1
    q = 0           when equal (or when both sides are dead)

Exact mode plays each candidate move and re-solves both circuits; estimate
mode adjusts the pre-move crossing currents by the current carried through
the candidate cell, costing one solve per player for the whole position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import cg as sparse_cg

from .board import Board, Cell, Color, adjacency_pairs

CURRENT_FLOOR = 1e-9
CG_TOLERANCE = 1e-12
_DENSE_LIMIT = 48  # unknown count below which direct elimination is used


@dataclass
class CircuitSolution:
    """Crossing current and per-cell current magnitudes for one player."""

    player: Color
    cell_current: np.ndarray  # (n*n,), zero on occupied cells
    total_current: float  # math.inf when the player's edges are already joined
    residual: float  # ||L v - b|| of the reduced linear solve


@dataclass
class HeuristicValues:
    """Action values in [-1, 1] for the legal moves; NaN elsewhere."""

    values: np.ndarray  # (n*n,)
    mode: str  # "exact" or "estimate"

    def ranked(self, size: int) -> list[tuple[Cell, float]]:
        order = np.argsort(-np.nan_to_num(self.values, nan=-np.inf))
        return [
            (divmod(int(i), size), float(self.values[i]))
            for i in order
            if not math.isnan(self.values[i])
        ]


@lru_cache(maxsize=None)
def _link_table(size: int, player: Color) -> np.ndarray:
    """Position-level links for one player: all cell-cell adjacencies plus
    links from the player's two border files to their virtual edge nodes."""
    n2 = size * size
    source = n2 if player is Color.WHITE else n2 + 2
    sink = n2 + 1 if player is Color.WHITE else n2 + 3
    links = [adjacency_pairs(size)]
    if player is Color.WHITE:
        first = np.arange(size) * size  # column 0
        last = first + size - 1
    else:
        first = np.arange(size)  # row 0
        last = first + size * (size - 1)
    links.append(np.stack([first, np.full(size, source)], axis=1))
    links.append(np.stack([last, np.full(size, sink)], axis=1))
    return np.concatenate(links, axis=0)


def solve_circuit(board: Board, player: Color) -> CircuitSolution:
    """Solve the player's resistor network for currents and potentials.

    Returns total_current = 0 (with zero cell currents) when the opponent
    has cut the player's edges apart, and total_current = inf when the
    player's edges are already joined by a chain.
    """
    n = board.size
    n2 = n * n
    source = n2 if player is Color.WHITE else n2 + 2
    sink = n2 + 1 if player is Color.WHITE else n2 + 3

    roots = board.group_roots()
    zero_currents = np.zeros(n2)
    if roots[source] == roots[sink]:
        return CircuitSolution(player, zero_currents, math.inf, 0.0)

    # Per-position resistance: empty 1, own stones/edges 0, opponent removed.
    res = np.empty(n2 + 4)
    res[:n2] = np.where(board.grid == 0, 1.0, np.where(board.grid == player, 0.0, np.inf))
    res[n2:] = np.inf
    res[source] = res[sink] = 0.0

    links = _link_table(n, player)
    r_link = res[links[:, 0]] + res[links[:, 1]]
    ends = roots[links]  # merged node ids (conductor groups collapse)
    keep = np.isfinite(r_link) & (r_link > 0.0)
    ends = ends[keep]
    cond = 1.0 / r_link[keep]
    link_pos = links[keep]

    # Compact node numbering over the surviving graph.
    node_ids, ends_c = np.unique(ends, return_inverse=True)
    ends_c = ends_c.reshape(ends.shape)
    n_nodes = len(node_ids)
    src = int(np.searchsorted(node_ids, roots[source]))
    snk = int(np.searchsorted(node_ids, roots[sink]))
    if (src >= n_nodes or node_ids[src] != roots[source]
            or snk >= n_nodes or node_ids[snk] != roots[sink]):
        return CircuitSolution(player, zero_currents, 0.0, 0.0)  # an edge is walled off

    adj = sp.coo_matrix(
        (np.ones(len(ends_c)), (ends_c[:, 0], ends_c[:, 1])), shape=(n_nodes, n_nodes)
    )
    _, comp = connected_components(adj, directed=False)
    if comp[src] != comp[snk]:
        return CircuitSolution(player, zero_currents, 0.0, 0.0)

    in_comp = comp == comp[src]
    unknown = in_comp.copy()
    unknown[src] = unknown[snk] = False
    col_of = np.full(n_nodes, -1, dtype=np.int64)
    col_of[unknown] = np.arange(int(unknown.sum()))
    n_unk = int(unknown.sum())

    potential = np.zeros(n_nodes)
    potential[src] = 1.0
    residual = 0.0
    if n_unk:
        a, b = ends_c[:, 0], ends_c[:, 1]
        ca, cb = col_of[a], col_of[b]
        diag = np.zeros(n_unk)
        np.add.at(diag, ca[ca >= 0], cond[ca >= 0])
        np.add.at(diag, cb[cb >= 0], cond[cb >= 0])
        rhs = np.zeros(n_unk)
        src_a = (b == src) & (ca >= 0)
        src_b = (a == src) & (cb >= 0)
        np.add.at(rhs, ca[src_a], cond[src_a])
        np.add.at(rhs, cb[src_b], cond[src_b])
        both = (ca >= 0) & (cb >= 0)
        if n_unk <= _DENSE_LIMIT:
            lap = np.diag(diag)
            np.subtract.at(lap, (ca[both], cb[both]), cond[both])
            np.subtract.at(lap, (cb[both], ca[both]), cond[both])
            x = np.linalg.solve(lap, rhs)
            residual = float(np.linalg.norm(lap @ x - rhs))
        else:
            off = sp.coo_matrix(
                (np.concatenate([-cond[both], -cond[both]]),
                 (np.concatenate([ca[both], cb[both]]),
                  np.concatenate([cb[both], ca[both]]))),
                shape=(n_unk, n_unk),
            )
            lap = (off + sp.diags(diag)).tocsr()
            x, info = sparse_cg(lap, rhs, rtol=CG_TOLERANCE, atol=0.0)
            if info != 0:  # fall back to direct elimination
                x = np.linalg.solve(lap.toarray(), rhs)
            residual = float(np.linalg.norm(lap @ x - rhs))
        potential[unknown] = x

    flow = cond * (potential[ends_c[:, 0]] - potential[ends_c[:, 1]])
    total = float(np.sum(flow[ends_c[:, 1] == src]) * -1 + np.sum(flow[ends_c[:, 0] == src]))

    # Through-current per empty cell: half the absolute current over its links.
    acc = np.zeros(n2 + 4)
    np.add.at(acc, link_pos[:, 0], np.abs(flow))
    np.add.at(acc, link_pos[:, 1], np.abs(flow))
    cell_current = 0.5 * acc[:n2]
    cell_current[board.grid != 0] = 0.0
    return CircuitSolution(player, cell_current, total, residual)


def action_value(c_mover: float, c_opponent: float) -> float:
    """Two-case current-ratio score in [-1, 1]; zero for dead areas."""
    if math.isinf(c_mover):
        return 0.0 if math.isinf(c_opponent) else 1.0
    if math.isinf(c_opponent):
        return -1.0
    if c_mover < CURRENT_FLOOR and c_opponent < CURRENT_FLOOR:
        return 0.0
    if c_mover > c_opponent:
        return 1.0 - c_opponent / c_mover
    if c_opponent > c_mover:
        return c_mover / c_opponent - 1.0
    return 0.0


def heuristic_action_values(board: Board, mode: str = "exact") -> HeuristicValues:
    """Rate every legal move from the to-move player's perspective."""
    if mode not in ("exact", "estimate"):
        raise ValueError(f"unknown mode {mode!r}")
    legal = board.legal_indices()
    if len(legal) == 0:
        raise ValueError("position has no legal moves")
    mover = board.to_move
    opponent = mover.opponent
    n = board.size
    values = np.full(n * n, np.nan)

    if mode == "exact":
        for idx in legal:
            nxt = board.play(divmod(int(idx), n))
            c1 = solve_circuit(nxt, mover).total_current
            c2 = solve_circuit(nxt, opponent).total_current
            values[idx] = action_value(c1, c2)
        return HeuristicValues(values, mode)

    own = solve_circuit(board, mover)
    opp = solve_circuit(board, opponent)
    c1 = own.total_current + own.cell_current[legal]
    c2 = np.maximum(opp.total_current - opp.cell_current[legal], CURRENT_FLOOR)
    dead = (c1 < CURRENT_FLOOR) & (c2 < CURRENT_FLOOR)
    q = np.where(c1 > c2, 1.0 - c2 / np.maximum(c1, CURRENT_FLOOR),
                 np.where(c2 > c1, c1 / c2 - 1.0, 0.0))
    values[legal] = np.where(dead, 0.0, q)
    return HeuristicValues(values, mode)
