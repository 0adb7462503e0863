import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from ddpg.agent import Agent
from ddpg.buffer import Transition
from ddpg.checkpoint import save_checkpoint
from envs import EnvironmentInterface
from exceptions import ParameterError, TrainingError

logger = logging.getLogger(__name__)

METRICS_COLUMNS = ["episode", "steps", "return", "critic_loss", "actor_obj"]


@dataclass(frozen=True)
class EpisodeMetrics:
    episode: int
    steps: int
    ret: float
    critic_loss: float
    actor_obj: float
    displacement: float


@dataclass
class TrainingMetrics:
    episodes: List[EpisodeMetrics] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.episodes)

    def to_frame(self) -> pd.DataFrame:
        """Frame with the metrics CSV columns; losses are NaN for episodes without updates."""
        rows = [
            (item.episode, item.steps, item.ret, item.critic_loss, item.actor_obj)
            for item in self.episodes
        ]
        frame = pd.DataFrame(rows, columns=METRICS_COLUMNS)
        return frame.astype({"episode": "int64", "steps": "int64", "return": "float64",
                             "critic_loss": "float64", "actor_obj": "float64"})

    def write_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path

    def mean_return(self, last: Optional[int] = None) -> float:
        selected = self.episodes[-last:] if last else self.episodes
        return float(np.mean([item.ret for item in selected])) if selected else math.nan

    def mean_displacement(self, last: Optional[int] = None) -> float:
        selected = self.episodes[-last:] if last else self.episodes
        return float(np.mean([item.displacement for item in selected])) if selected else math.nan


def _mean_or_nan(values: List[float]) -> float:
    return float(np.mean(values)) if values else math.nan


def train(
        agent: Agent,
        env: EnvironmentInterface,
        episodes: int,
        checkpoint_dir=None,
        run_config: Optional[str] = None,
        progress: bool = False
) -> TrainingMetrics:
    """
    Run the DDPG loop for ``episodes`` episodes.

    Each environment step acts with exploration noise, stores the transition and, once
    ``warmup_steps`` steps have been taken and the buffer holds a full batch, performs
    ``updates_per_step`` rounds of critic, actor and target updates.

    :param agent: Agent to train, mutated in place.
    :param env: Environment with matching observation and action sizes.
    :param episodes: Number of episodes; zero leaves the agent untouched.
    :param checkpoint_dir: Where the checkpoint is dumped if training diverges.
    :param run_config: Serialized run configuration stored with that checkpoint.
    :param progress: Show a tqdm progress bar.
    :return: Per-episode metrics.
    :raises TrainingError: on non-finite losses or gradients, after dumping a checkpoint.
    """
    if episodes < 0:
        raise ParameterError(f"episodes must be non-negative, got {episodes}.")
    if env.observation_size != agent.observation_size or env.action_size != agent.action_size:
        raise ParameterError(
            f"Agent ({agent.observation_size}, {agent.action_size}) does not match "
            f"environment ({env.observation_size}, {env.action_size})."
        )

    cfg = agent.cfg
    metrics = TrainingMetrics()
    for episode in tqdm(range(episodes), desc="Training", disable=not progress):
        obs = env.reset()
        done = False
        steps, episode_return = 0, 0.0
        losses, objectives = [], []

        while not done:
            action = agent.act(obs, explore=True)
            next_obs, reward, done, _ = env.step(action)
            agent.buffer.push(Transition(obs, action, reward, next_obs, done))
            agent.total_steps += 1
            steps += 1
            episode_return += reward
            obs = next_obs

            if agent.total_steps >= cfg.warmup_steps and len(agent.buffer) >= cfg.batch_size:
                for _ in range(cfg.updates_per_step):
                    try:
                        loss, objective = agent.train_step()
                    except TrainingError:
                        if checkpoint_dir is not None:
                            save_checkpoint(agent, checkpoint_dir, run_config, env.name)
                            logger.error("training diverged in episode %d; checkpoint dumped to %s",
                                         episode, checkpoint_dir)
                        raise
                    losses.append(loss)
                    objectives.append(objective)

        item = EpisodeMetrics(
            episode=episode,
            steps=steps,
            ret=float(episode_return),
            critic_loss=_mean_or_nan(losses),
            actor_obj=_mean_or_nan(objectives),
            displacement=float(env.displacement),
        )
        metrics.episodes.append(item)
        logger.info(
            "episode %d: steps=%d return=%.4f critic_loss=%.6g actor_obj=%.6g",
            item.episode, item.steps, item.ret, item.critic_loss, item.actor_obj,
        )
    return metrics
