from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np


class EnvironmentInterface(ABC):
    """
    Interface for episodic control environments.
    Observations and actions are flat float vectors; actions live in the unit box.
    """

    name: str = "environment"

    @property
    @abstractmethod
    def observation_size(self) -> int:
        """
        Length of every observation vector.
        """
        pass

    @property
    @abstractmethod
    def action_size(self) -> int:
        """
        Length of every action vector.
        """
        pass

    @abstractmethod
    def reset(self, seed: Optional[int] = None) -> np.ndarray:
        """
        Start a new episode and return its first observation.
        """
        pass

    @abstractmethod
    def step(self, action: np.ndarray) -> Tuple[np.ndarray, float, bool, dict]:
        """
        Apply one action; return (observation, reward, done, info).
        """
        pass

    @abstractmethod
    def observe(self) -> np.ndarray:
        """
        Observation of the current state.
        """
        pass

    @property
    @abstractmethod
    def displacement(self) -> float:
        """
        Forward progress since the last reset.
        """
        pass
