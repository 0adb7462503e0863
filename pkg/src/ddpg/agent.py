from typing import Optional, Tuple

import numpy as np

from ddpg.buffer import Minibatch, ReplayBuffer
from exceptions import ParameterError, TrainingError
from nn import (
    Activation,
    Gradients,
    Mlp,
    adam_new,
    adam_step,
    backward,
    copy_mlp,
    forward,
    mlp_new,
    same_architecture,
    soft_update
)
from schemas import DdpgConfig
from utils.seeding import make_rng


class Agent:
    """
    Deep deterministic policy gradient learner.

    Holds the actor, the critic (state and action concatenated at its input), their target
    copies, one Adam state per live network and the replay buffer. Every stochastic draw
    (initial weights, exploration noise, minibatch indices) comes from ``self.rng``.
    """

    def __init__(self, observation_size: int, action_size: int, cfg: DdpgConfig):
        if observation_size <= 0 or action_size <= 0:
            raise ParameterError("Observation and action sizes must be positive.")
        self.observation_size = observation_size
        self.action_size = action_size
        self.cfg = cfg
        self.rng = make_rng(cfg.seed)

        hidden = list(cfg.hidden_sizes)
        self.actor = mlp_new([observation_size, *hidden, action_size], Activation.TANH, self.rng)
        self.critic = mlp_new([observation_size + action_size, *hidden, 1], Activation.IDENTITY, self.rng)
        self.target_actor = copy_mlp(self.actor)
        self.target_critic = copy_mlp(self.critic)
        self.actor_opt = adam_new(self.actor, lr=cfg.actor_lr)
        self.critic_opt = adam_new(self.critic, lr=cfg.critic_lr)
        self.buffer = ReplayBuffer(cfg.buffer_capacity, observation_size, action_size)
        self.total_steps = 0

    def replace_networks(self, actor: Mlp, critic: Mlp, target_actor: Mlp, target_critic: Mlp) -> None:
        """Install restored networks; optimizer moments start fresh."""
        pairs = ((self.actor, actor), (self.critic, critic), (self.actor, target_actor), (self.critic, target_critic))
        for expected, given in pairs:
            if not same_architecture(expected, given):
                raise ParameterError(f"Network {given.layer_sizes} does not fit {expected.layer_sizes}.")
        self.actor, self.critic = actor, critic
        self.target_actor, self.target_critic = target_actor, target_critic
        self.actor_opt = adam_new(self.actor, lr=self.cfg.actor_lr)
        self.critic_opt = adam_new(self.critic, lr=self.cfg.critic_lr)

    def act(self, obs: np.ndarray, explore: bool = False) -> np.ndarray:
        action = forward(self.actor, obs)
        if explore and self.cfg.noise_sigma > 0:
            action = action + self.rng.normal(0.0, self.cfg.noise_sigma, size=action.shape)
        return np.clip(action, -1.0, 1.0)

    def q_values(self, critic: Mlp, s: np.ndarray, a: np.ndarray) -> np.ndarray:
        return forward(critic, np.hstack([s, a]))[:, 0]

    def critic_targets(self, batch: Minibatch) -> np.ndarray:
        """y = r + gamma * (1 - done) * Q'(s', mu'(s'))."""
        next_actions = forward(self.target_actor, batch.s_next)
        bootstrap = self.q_values(self.target_critic, batch.s_next, next_actions)
        return batch.r + self.cfg.gamma * np.where(batch.done, 0.0, bootstrap)

    def update_critic(self, batch: Minibatch) -> float:
        """
        One Adam step on the mean squared TD error.

        :param batch: Minibatch with at least one row.
        :return: The loss before the step.
        :raises TrainingError: if the loss or its gradient is non-finite.
        """
        if len(batch) == 0:
            raise ParameterError("Critic update needs a non-empty batch.")
        targets = self.critic_targets(batch)
        inputs = np.hstack([batch.s, batch.a])
        predictions = forward(self.critic, inputs)[:, 0]
        errors = targets - predictions
        loss = float(np.mean(errors ** 2))
        if not np.isfinite(loss):
            raise TrainingError(f"Critic loss became non-finite ({loss}) after {self.total_steps} steps.")

        upstream = (-2.0 / len(batch) * errors)[:, None]
        grads, _ = backward(self.critic, inputs, upstream)
        if not grads.is_finite():
            raise TrainingError("Critic gradient became non-finite.")
        adam_step(self.critic_opt, self.critic, grads)
        return loss

    def actor_gradient(self, batch: Minibatch) -> Tuple[Gradients, float]:
        """
        Gradient of the mean critic value of the actor's own actions with respect to the actor.

        :return: (gradients of the objective, objective value).
        """
        actions = forward(self.actor, batch.s)
        inputs = np.hstack([batch.s, actions])
        objective = float(np.mean(forward(self.critic, inputs)))
        upstream = np.full((len(batch), 1), 1.0 / len(batch))
        _, input_grad = backward(self.critic, inputs, upstream)
        grads, _ = backward(self.actor, batch.s, input_grad[:, self.observation_size:])
        return grads, objective

    def update_actor(self, batch: Minibatch) -> float:
        """One Adam ascent step on the mean critic value; returns that value before the step."""
        grads, objective = self.actor_gradient(batch)
        if not (np.isfinite(objective) and grads.is_finite()):
            raise TrainingError(f"Actor gradient became non-finite after {self.total_steps} steps.")
        ascent = Gradients([-w for w in grads.weights], [-b for b in grads.biases])
        adam_step(self.actor_opt, self.actor, ascent)
        return objective

    def update_targets(self) -> None:
        soft_update(self.target_actor, self.actor, self.cfg.tau)
        soft_update(self.target_critic, self.critic, self.cfg.tau)

    def train_step(self, batch: Optional[Minibatch] = None) -> Tuple[float, float]:
        """Sample (unless given), update critic then actor, then blend the targets."""
        if batch is None:
            batch = self.buffer.sample(self.cfg.batch_size, self.rng)
        loss = self.update_critic(batch)
        objective = self.update_actor(batch)
        self.update_targets()
        return loss, objective
