import logging
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
from tqdm import tqdm

from biped import GaitReference, ReferenceGaitController
from ddpg import Agent
from envs import BipedEnv, EnvironmentInterface
from exceptions import ParameterError

logger = logging.getLogger(__name__)

Policy = Callable[[np.ndarray], np.ndarray]
POLICY_NAMES = ("actor", "reference", "zero")


@dataclass(frozen=True)
class EvaluationResult:
    returns: List[float]
    displacements: List[float]

    @property
    def mean_return(self) -> float:
        return float(np.mean(self.returns)) if self.returns else 0.0

    @property
    def mean_displacement(self) -> float:
        return float(np.mean(self.displacements)) if self.displacements else 0.0


def actor_policy(agent: Agent) -> Policy:
    return lambda obs: agent.act(obs, explore=False)


def zero_policy(action_size: int) -> Policy:
    return lambda obs: np.zeros(action_size)


def reference_policy(env: BipedEnv, kp: float = 100.0, kd: float = 5.0) -> Policy:
    """Scripted cycloid gait; reads the robot state from ``env`` rather than the observation."""
    config = env.config
    controller = ReferenceGaitController(
        env.model,
        GaitReference(config.step_length, config.step_height, config.gait_period),
        kp=kp,
        kd=kd,
    )
    return lambda obs: controller(env.state)


def make_policy(name: str, env: EnvironmentInterface, agent: Optional[Agent] = None) -> Policy:
    if name == "actor":
        if agent is None:
            raise ParameterError("The actor policy needs a trained agent.")
        return actor_policy(agent)
    if name == "zero":
        return zero_policy(env.action_size)
    if name == "reference":
        if not isinstance(env, BipedEnv):
            raise ParameterError("The reference policy drives the biped environment only.")
        return reference_policy(env)
    raise ParameterError(f"Unknown policy {name!r}; choose from {', '.join(POLICY_NAMES)}.")


def evaluate(
        policy: Policy,
        env: EnvironmentInterface,
        episodes: int,
        seed: Optional[int] = None,
        progress: bool = False
) -> EvaluationResult:
    """
    Roll out ``policy`` for ``episodes`` episodes.

    The environment is reseeded with ``seed`` before the first episode and its stream
    continues from there, so equal seeds give equal results.
    """
    if episodes < 0:
        raise ParameterError(f"episodes must be non-negative, got {episodes}.")
    returns, displacements = [], []
    for episode in tqdm(range(episodes), desc="Evaluating", disable=not progress):
        obs = env.reset(seed if episode == 0 else None)
        done, total = False, 0.0
        while not done:
            obs, reward, done, _ = env.step(policy(obs))
            total += reward
        returns.append(total)
        displacements.append(float(env.displacement))
        logger.debug("evaluation episode %d: return=%.4f", episode, total)
    return EvaluationResult(returns, displacements)
