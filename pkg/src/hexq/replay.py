"""Experience replay memory: a FIFO ring sampled uniformly with replacement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .board import Board, Cell


@dataclass(frozen=True)
class Experience:
    """One transition; both boards are normalized to white-to-move."""

    state: Board
    action: Cell
    reward: float
    next_state: Board
    terminal: bool

    def __post_init__(self):
        if bool(self.reward == 1.0) != self.terminal:
            raise ValueError("reward must be 1 exactly when the move ended the game")
        if not self.terminal and self.reward != 0.0:
            raise ValueError(f"non-terminal reward must be 0, got {self.reward}")
        r, c = self.action
        if self.state.grid[r * self.state.size + c] != 0:
            raise ValueError(f"action {self.action} was not legal in its state")


class ReplayBuffer:
    """Fixed-capacity ring; eviction is strictly oldest-first."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.inserted = 0  # lifetime insertion count
        self._ring: list[Experience | None] = [None] * capacity

    def __len__(self) -> int:
        return min(self.inserted, self.capacity)

    def add(self, exp: Experience) -> None:
        self._ring[self.inserted % self.capacity] = exp
        self.inserted += 1

    def items(self) -> list[Experience]:
        """Current contents, oldest first."""
        n = len(self)
        start = self.inserted % self.capacity if self.inserted > self.capacity else 0
        return [self._ring[(start + i) % self.capacity] for i in range(n)]

    def sample_batch(self, n: int, rng: np.random.Generator):
        """n records uniform with replacement, or None while warming up."""
        size = len(self)
        if size < n:
            return None
        idx = rng.integers(0, size, size=n)
        return [self._ring[i] for i in idx]
