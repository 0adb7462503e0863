from typing import Optional, Tuple

import numpy as np

from envs.interfaces import EnvironmentInterface
from exceptions import EnvUsageError, ParameterError
from utils.seeding import make_rng


class PointMassEnv(EnvironmentInterface):
    """
    One-dimensional reach-the-goal task with a known optimal return.

    The point starts uniformly in [-0.5, 0.5] and moves ``max_speed * action`` per step.
    The reward is the decrease of the distance to the goal, so the best achievable return
    is the initial distance, which the horizon always allows covering.
    """

    name = "point-mass"

    def __init__(self, goal: float = 1.0, max_speed: float = 0.1, horizon: int = 20, seed: int = 0):
        if max_speed <= 0 or horizon <= 0:
            raise ParameterError("max_speed and horizon must be positive.")
        if 0.5 + abs(goal) > max_speed * horizon:
            raise ParameterError("Goal is not reachable within the horizon from every start.")
        self.goal = goal
        self.max_speed = max_speed
        self.horizon = horizon
        self._rng = make_rng(seed)
        self.position: Optional[float] = None
        self.start = 0.0
        self.steps = 0
        self.done = False

    @property
    def observation_size(self) -> int:
        return 1

    @property
    def action_size(self) -> int:
        return 1

    @property
    def displacement(self) -> float:
        return 0.0 if self.position is None else self.position - self.start

    @property
    def optimal_return(self) -> float:
        return abs(self.goal - self.start)

    def reset(self, seed: Optional[int] = None) -> np.ndarray:
        if seed is not None:
            self._rng = make_rng(seed)
        self.start = float(self._rng.uniform(-0.5, 0.5))
        self.position = self.start
        self.steps = 0
        self.done = False
        return self.observe()

    def observe(self) -> np.ndarray:
        if self.position is None:
            raise EnvUsageError("Call reset() before observe().")
        return np.array([self.position - self.goal])

    def step(self, action: np.ndarray) -> Tuple[np.ndarray, float, bool, dict]:
        if self.position is None:
            raise EnvUsageError("Call reset() before step().")
        if self.done:
            raise EnvUsageError("Episode is done; call reset() before stepping again.")
        action = np.asarray(action, dtype=float).reshape(-1)
        if action.shape != (1,) or not np.isfinite(action[0]):
            raise ParameterError("Expected one finite action component.")

        before = abs(self.position - self.goal)
        self.position += self.max_speed * float(np.clip(action[0], -1.0, 1.0))
        reward = before - abs(self.position - self.goal)

        self.steps += 1
        self.done = self.steps >= self.horizon
        return self.observe(), reward, self.done, {"position": self.position}
