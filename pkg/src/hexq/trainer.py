"""Mentoring and the deep Q-learning loop.

The network always evaluates white-to-move positions, so every state is
normalized by transpose_swap before it reaches the net. An episode starts
from a database position with a coin-flipped first mover and a coin-flipped
180-degree board flip; each move stores one experience (next states again
coin-flip rotated), samples one replay batch, and applies one RMSProp step on
the squared difference between the played action's value and the adversarial
target r - max Q(s_next).

There is no discounting: a win is worth +1 whenever it arrives, so gamma is
held at 1 and is not a tunable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .board import Cell, from_moves
from .circuit import heuristic_action_values
from .encoding import encode, encode_batch, normalize_white
from .net import (
    OptimizerState,
    QNetwork,
    Workspace,
    forward,
    backward,
    rmsprop_step,
    save_weights,
)
from .posdb import PositionDatabase
from .replay import Experience, ReplayBuffer


@dataclass(frozen=True)
class TrainConfig:
    episodes: int
    epsilon: float = 0.1
    replay_capacity: int = 100_000
    batch_size: int = 64
    gamma: float = 1.0
    alpha: float = 1e-3
    rho: float = 0.9
    eps_opt: float = 1e-6
    metrics_window: int = 200
    checkpoint_interval: int = 1_000
    flip_probability: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in [0, 1], got {self.epsilon}")
        if self.gamma != 1.0:
            raise ValueError("gamma is fixed at 1; rewards are undiscounted")
        if not 0.0 <= self.flip_probability <= 1.0:
            raise ValueError("flip_probability must be in [0, 1]")
        if self.episodes < 1 or self.batch_size < 1 or self.replay_capacity < 1:
            raise ValueError("episodes, batch_size and replay_capacity must be positive")

    def optimizer_for(self, net: QNetwork) -> OptimizerState:
        return OptimizerState.for_net(net, alpha=self.alpha, rho=self.rho, eps=self.eps_opt)


def load_train_config(path) -> TrainConfig:
    """Parse a flat key=value file into a TrainConfig."""
    known = {f.name: f.type for f in fields(TrainConfig)}
    kwargs = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        caster = int if known[key] in ("int", int) else float
        kwargs[key] = caster(value)
    if "episodes" not in kwargs:
        raise ValueError("config file must set episodes")
    return TrainConfig(**kwargs)


@dataclass
class EpisodeRecord:
    episode: int
    mean_abs_max_q: float
    mean_cost: float
    first_mover_win: int
    episode_len: int


@dataclass
class MetricsLog:
    """Per-episode records plus the coin-flip counters the loop exposes."""

    window: int = 200
    records: list[EpisodeRecord] = field(default_factory=list)
    start_flips: int = 0
    next_flips: int = 0
    next_flip_chances: int = 0
    mover_swaps: int = 0

    def add(self, rec: EpisodeRecord) -> None:
        self.records.append(rec)

    def trailing_mean(self, name: str, end: int | None = None) -> float:
        """Mean of one field over the last `window` records ending at `end`."""
        stop = len(self.records) if end is None else end
        chunk = self.records[max(0, stop - self.window) : stop]
        if not chunk:
            raise ValueError("no records in window")
        return float(np.mean([getattr(r, name) for r in chunk]))

    def to_csv(self, path) -> None:
        lines = ["episode,mean_abs_max_q,mean_cost,first_mover_win,episode_len"]
        for r in self.records:
            lines.append(
                f"{r.episode},{r.mean_abs_max_q:.6f},{r.mean_cost:.6f},"
                f"{r.first_mover_win},{r.episode_len}"
            )
        Path(path).write_text("\n".join(lines) + "\n")


def epsilon_greedy(
    action_values: np.ndarray,
    legal: set[Cell],
    epsilon: float,
    rng: np.random.Generator,
) -> Cell:
    """Argmax over legal cells with probability 1-epsilon, else uniform legal.

    Ties go to the lowest cell index, which argmax gives for free on the
    sorted index list.
    """
    if not legal:
        raise ValueError("no legal moves")
    size = math.isqrt(np.asarray(action_values).size)
    idx = np.array(sorted(r * size + c for r, c in legal))
    if rng.random() < epsilon:
        pick = int(idx[rng.integers(idx.size)])
    else:
        pick = int(idx[np.argmax(np.asarray(action_values).ravel()[idx])])
    return divmod(pick, size)


def q_target(
    batch: list[Experience],
    net: QNetwork,
    workspace: Workspace | None = None,
) -> np.ndarray:
    """Adversarial one-step targets, clamped to [-1, 1].

    Non-terminal: r - max over legal moves of Q(next state); the next state
    is the opponent's turn, so its best value counts against the mover.
    Terminal: r alone; a finished position has no meaningful action values.
    """
    if not batch:
        raise ValueError("empty batch")
    q_next, _ = forward(net, encode_batch([e.next_state for e in batch], dtype=net.config.dtype),
                        keep_cache=False, workspace=workspace)
    targets = np.empty(len(batch))
    for i, e in enumerate(batch):
        if e.terminal:
            targets[i] = e.reward
        else:
            targets[i] = e.reward - float(q_next[i, e.next_state.legal_indices()].max())
    return np.clip(targets, -1.0, 1.0)


def _mentor_targets(db: PositionDatabase):
    """White-normalized boards with exact heuristic values and legal masks."""
    boards, targets, masks = [], [], []
    for game in db.games:
        for ply in range(len(game)):
            b = normalize_white(from_moves(db.size, game[:ply]))
            hv = heuristic_action_values(b, mode="exact")
            mask = ~np.isnan(hv.values)
            boards.append(b)
            targets.append(np.where(mask, hv.values, 0.0))
            masks.append(mask)
    return boards, np.array(targets), np.array(masks)


def mentor(
    net: QNetwork,
    db: PositionDatabase,
    passes: int,
    config: TrainConfig,
    workspace: Workspace | None = None,
) -> tuple[QNetwork, list[float]]:
    """Regress net outputs onto exact heuristic values over legal cells.

    Visits every stored position once per pass in shuffled minibatches and
    returns the per-batch masked MSE curve. Illegal cells carry no loss, so
    the net is free to output anything there.
    """
    if not db.games:
        raise ValueError("empty database")
    rng = np.random.default_rng(config.seed)
    ws = workspace or Workspace()
    opt = config.optimizer_for(net)
    boards, targets, masks = _mentor_targets(db)
    n = len(boards)
    losses: list[float] = []
    for _ in range(passes):
        order = rng.permutation(n)
        for lo in range(0, n, config.batch_size):
            sel = order[lo : lo + config.batch_size]
            x = encode_batch([boards[i] for i in sel], dtype=net.config.dtype)
            out, cache = forward(net, x, keep_cache=True, workspace=ws)
            diff = (out - targets[sel]) * masks[sel]
            n_cells = int(masks[sel].sum())
            losses.append(float((diff ** 2).sum() / n_cells))
            grads = backward(net, cache, (2.0 / n_cells) * diff, workspace=ws)
            rmsprop_step(net, opt, grads)
    return net, losses


def _checkpoint_name(episode: int) -> str:
    return f"checkpoint_{episode:06d}.hxw"


def train_dql(
    net: QNetwork,
    db: PositionDatabase,
    config: TrainConfig,
    out_dir=None,
    workspace: Workspace | None = None,
) -> tuple[QNetwork, MetricsLog, list[tuple[int, QNetwork]]]:
    """Run the full Q-learning loop and return (net, metrics, checkpoints).

    One gradient step per move, not per episode. When out_dir is given,
    checkpoints are also written there in the binary weight format.
    """
    if not db.games:
        raise ValueError("empty database")
    if db.size != net.config.board_size:
        raise ValueError(f"database is {db.size}x{db.size}, net expects {net.config.board_size}")
    rng = np.random.default_rng(config.seed)
    ws = workspace or Workspace()
    opt = config.optimizer_for(net)
    buffer = ReplayBuffer(config.replay_capacity)
    metrics = MetricsLog(window=config.metrics_window)
    checkpoints: list[tuple[int, QNetwork]] = []
    size = db.size

    for episode in range(1, config.episodes + 1):
        start = db.sample_position(rng)
        if rng.random() < 0.5:
            start = start.with_to_move(start.to_move.opponent)
            metrics.mover_swaps += 1
        if rng.random() < config.flip_probability:
            start = start.flip180()
            metrics.start_flips += 1
        state = normalize_white(start)

        abs_max_q: list[float] = []
        costs: list[float] = []
        moves = 0
        while True:
            q, _ = forward(net, encode(state, dtype=net.config.dtype), keep_cache=False, workspace=ws)
            legal_idx = state.legal_indices()
            abs_max_q.append(abs(float(q[legal_idx].max())))
            action = epsilon_greedy(
                q, {divmod(int(i), size) for i in legal_idx}, config.epsilon, rng
            )
            after = state.play(action)
            moves += 1
            terminal = after.winner() is not None
            nxt = normalize_white(after)
            stored_next = nxt
            if not terminal:
                metrics.next_flip_chances += 1
                if rng.random() < config.flip_probability:
                    stored_next = nxt.flip180()
                    metrics.next_flips += 1
            buffer.add(Experience(state, action, 1.0 if terminal else 0.0, stored_next, terminal))

            batch = buffer.sample_batch(config.batch_size, rng)
            if batch is not None:
                targets = q_target(batch, net, workspace=ws)
                x = encode_batch([e.state for e in batch], dtype=net.config.dtype)
                out, cache = forward(net, x, keep_cache=True, workspace=ws)
                a_idx = np.array([e.action[0] * size + e.action[1] for e in batch])
                rows = np.arange(len(batch))
                diff = out[rows, a_idx] - targets
                costs.append(float(np.mean(diff ** 2)))
                dout = np.zeros_like(out)
                dout[rows, a_idx] = (2.0 / len(batch)) * diff
                grads = backward(net, cache, dout, workspace=ws)
                rmsprop_step(net, opt, grads)

            if terminal:
                break
            state = nxt

        metrics.add(
            EpisodeRecord(
                episode=episode,
                mean_abs_max_q=float(np.mean(abs_max_q)),
                mean_cost=float(np.mean(costs)) if costs else 0.0,
                first_mover_win=moves % 2,
                episode_len=moves,
            )
        )
        if episode % config.checkpoint_interval == 0:
            snap = net.copy()
            checkpoints.append((episode, snap))
            if out_dir is not None:
                save_weights(snap, Path(out_dir) / _checkpoint_name(episode))

    return net, metrics, checkpoints
