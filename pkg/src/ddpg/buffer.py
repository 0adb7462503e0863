from dataclasses import dataclass
from typing import List

import numpy as np

from exceptions import BufferNotReadyError, ParameterError


@dataclass(frozen=True)
class Transition:
    s: np.ndarray
    a: np.ndarray
    r: float
    s_next: np.ndarray
    done: bool

    def __post_init__(self):
        for name in ("s", "a", "s_next"):
            value = np.array(getattr(self, name), dtype=float)
            if not np.all(np.isfinite(value)):
                raise ParameterError(f"Transition field {name} must be finite.")
            object.__setattr__(self, name, value)
        if not np.isfinite(self.r):
            raise ParameterError("Transition reward must be finite.")
        if np.any(np.abs(self.a) > 1.0):
            raise ParameterError("Transition action must lie in the unit box.")
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "done", bool(self.done))


@dataclass(frozen=True)
class Minibatch:
    s: np.ndarray
    a: np.ndarray
    r: np.ndarray
    s_next: np.ndarray
    done: np.ndarray

    def __len__(self) -> int:
        return self.r.shape[0]


class ReplayBuffer:
    """Fixed-capacity FIFO of transitions kept in preallocated ring arrays."""

    def __init__(self, capacity: int, observation_size: int, action_size: int):
        if capacity <= 0:
            raise ParameterError(f"Buffer capacity must be positive, got {capacity}.")
        self.capacity = capacity
        self.observation_size = observation_size
        self.action_size = action_size
        self._s = np.zeros((capacity, observation_size))
        self._a = np.zeros((capacity, action_size))
        self._r = np.zeros(capacity)
        self._s_next = np.zeros((capacity, observation_size))
        self._done = np.zeros(capacity, dtype=bool)
        self.write_cursor = 0
        self.size = 0

    def __len__(self) -> int:
        return self.size

    def push(self, transition: Transition) -> None:
        if transition.s.shape != (self.observation_size,) or transition.s_next.shape != (self.observation_size,):
            raise ParameterError(f"Expected observations of size {self.observation_size}.")
        if transition.a.shape != (self.action_size,):
            raise ParameterError(f"Expected actions of size {self.action_size}.")
        cursor = self.write_cursor
        self._s[cursor] = transition.s
        self._a[cursor] = transition.a
        self._r[cursor] = transition.r
        self._s_next[cursor] = transition.s_next
        self._done[cursor] = transition.done
        self.write_cursor = (cursor + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def _ordered_slots(self) -> np.ndarray:
        start = (self.write_cursor - self.size) % self.capacity
        return (start + np.arange(self.size)) % self.capacity

    def transitions(self) -> List[Transition]:
        """Stored transitions, oldest first."""
        return [
            Transition(self._s[i], self._a[i], self._r[i], self._s_next[i], self._done[i])
            for i in self._ordered_slots()
        ]

    def sample(self, batch_size: int, rng: np.random.Generator, allow_underfull: bool = False) -> Minibatch:
        """
        Draw ``batch_size`` transitions uniformly with replacement.

        :param batch_size: Number of rows.
        :param rng: Generator the indices are drawn from.
        :param allow_underfull: Permit sampling while ``size < batch_size``.
        :return: A Minibatch of copies.
        :raises BufferNotReadyError: if the buffer is empty, or underfull and not allowed.
        """
        if batch_size <= 0:
            raise ParameterError(f"batch_size must be positive, got {batch_size}.")
        if self.size == 0 or (self.size < batch_size and not allow_underfull):
            raise BufferNotReadyError(
                f"Replay buffer holds {self.size} transitions, {batch_size} requested."
            )
        slots = self._ordered_slots()[rng.integers(0, self.size, size=batch_size)]
        return Minibatch(
            s=self._s[slots].copy(),
            a=self._a[slots].copy(),
            r=self._r[slots].copy(),
            s_next=self._s_next[slots].copy(),
            done=self._done[slots].copy(),
        )
