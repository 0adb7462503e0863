import math

import numpy as np
import pandas as pd
import pytest

from ddpg import (
    MANIFEST_NAME,
    METRICS_COLUMNS,
    Agent,
    Minibatch,
    ReplayBuffer,
    Transition,
    load_checkpoint,
    save_checkpoint,
    train
)
from envs import PointMassEnv
from exceptions import BufferNotReadyError, CheckpointError, ParameterError, TrainingError
from nn import Mlp, flat_parameters, forward


def transition(reward, obs_size=3, action_size=2, done=False):
    return Transition(
        s=np.full(obs_size, reward),
        a=np.zeros(action_size),
        r=reward,
        s_next=np.full(obs_size, reward + 1),
        done=done,
    )


def batch_of(agent, rewards, dones):
    n = len(rewards)
    return Minibatch(
        s=np.zeros((n, agent.observation_size)),
        a=np.zeros((n, agent.action_size)),
        r=np.array(rewards, dtype=float),
        s_next=np.ones((n, agent.observation_size)),
        done=np.array(dones, dtype=bool),
    )


def zero_network(mlp):
    for array in mlp.parameters():
        array[...] = 0.0


def test_buffer_evicts_oldest_first():
    """
    Test FIFO eviction: five pushes into a three-slot buffer keep the last three.
    """
    buffer = ReplayBuffer(3, 3, 2)
    for reward in range(5):
        buffer.push(transition(float(reward)))
    assert len(buffer) == 3, "Size must not exceed capacity."
    assert [item.r for item in buffer.transitions()] == [2.0, 3.0, 4.0]


def test_buffer_sampling_rules():
    buffer = ReplayBuffer(10, 3, 2)
    with pytest.raises(BufferNotReadyError):
        buffer.sample(2, np.random.default_rng(0))
    buffer.push(transition(1.0))
    with pytest.raises(BufferNotReadyError):
        buffer.sample(2, np.random.default_rng(0))
    batch = buffer.sample(4, np.random.default_rng(0), allow_underfull=True)
    assert len(batch) == 4 and np.all(batch.r == 1.0), "Underfull sampling draws with replacement."


def test_buffer_sampling_is_seeded():
    buffer = ReplayBuffer(20, 3, 2)
    for reward in range(20):
        buffer.push(transition(float(reward)))
    first = buffer.sample(8, np.random.Generator(np.random.PCG64(5)))
    second = buffer.sample(8, np.random.Generator(np.random.PCG64(5)))
    assert np.array_equal(first.r, second.r)
    assert np.array_equal(first.s[:, 0], first.r), "Rows must stay aligned across fields."


def test_transition_validation():
    with pytest.raises(ParameterError):
        Transition(np.zeros(3), np.array([1.5, 0.0]), 0.0, np.zeros(3), False)
    with pytest.raises(ParameterError):
        Transition(np.zeros(3), np.zeros(2), math.nan, np.zeros(3), False)
    with pytest.raises(ParameterError):
        ReplayBuffer(3, 3, 2).push(transition(0.0, obs_size=4))


def test_targets_are_exact_copies(small_agent):
    assert np.array_equal(flat_parameters(small_agent.actor), flat_parameters(small_agent.target_actor))
    assert np.array_equal(flat_parameters(small_agent.critic), flat_parameters(small_agent.target_critic))
    assert small_agent.actor.layer_sizes == (3, 8, 8, 2)
    assert small_agent.critic.layer_sizes == (5, 8, 8, 1)


def test_act_is_bounded_and_deterministic(small_ddpg_config):
    first = Agent(3, 2, small_ddpg_config)
    second = Agent(3, 2, small_ddpg_config)
    obs = np.array([10.0, -10.0, 3.0])
    greedy = first.act(obs)
    assert np.array_equal(greedy, second.act(obs)), "Same seed gives the same actor."
    noisy = first.act(obs, explore=True)
    assert np.array_equal(noisy, second.act(obs, explore=True)), "Same seed gives the same noise."
    assert np.all(np.abs(noisy) <= 1.0)
    assert np.array_equal(first.act(obs), greedy), "Greedy actions must not consume randomness."


def test_critic_targets_without_bootstrap(small_ddpg_config):
    """
    Test y = r when gamma is zero and when the transition is terminal.
    """
    agent = Agent(3, 2, small_ddpg_config.model_copy(update={"gamma": 0.0}))
    batch = batch_of(agent, [1.0, -2.0], [False, False])
    assert agent.critic_targets(batch) == pytest.approx([1.0, -2.0])

    agent = Agent(3, 2, small_ddpg_config)
    batch = batch_of(agent, [1.0, -2.0], [True, False])
    targets = agent.critic_targets(batch)
    bootstrap = agent.q_values(agent.target_critic, batch.s_next[1:], forward(agent.target_actor, batch.s_next[1:]))
    assert targets[0] == 1.0, "Terminal transitions do not bootstrap."
    assert targets[1] == pytest.approx(-2.0 + 0.9 * bootstrap[0])


def test_critic_loss_hand_computed(small_ddpg_config):
    agent = Agent(3, 2, small_ddpg_config.model_copy(update={"gamma": 0.0}))
    zero_network(agent.critic)
    loss = agent.update_critic(batch_of(agent, [1.0, 3.0], [False, False]))
    assert loss == pytest.approx(5.0, rel=1e-12), "Mean of 1^2 and 3^2 expected."
    assert np.any(flat_parameters(agent.critic) != 0.0), "The critic must take a step."


def test_actor_ascends_on_absolute_value_critic(small_ddpg_config):
    """
    Test the actor update against Q(s, a) = -|a| built from two relu units.
    """
    cfg = small_ddpg_config.model_copy(update={"hidden_sizes": (2, 2), "actor_lr": 1e-2})
    agent = Agent(1, 1, cfg)
    agent.critic = Mlp(
        (2, 2, 2, 1),
        [np.array([[0.0, 0.0], [1.0, -1.0]]), np.eye(2), np.array([[-1.0], [-1.0]])],
        [np.zeros(2), np.zeros(2), np.zeros(1)],
    )
    agent.actor.biases[-1][...] = 0.5
    states = np.linspace(-1.0, 1.0, 8)[:, None]
    batch = Minibatch(states, np.zeros((8, 1)), np.zeros(8), states, np.zeros(8, dtype=bool))

    initial = np.mean(np.abs(forward(agent.actor, states)))
    objective = agent.update_actor(batch)
    assert objective == pytest.approx(-initial), "Objective is the mean critic value."
    for _ in range(50):
        agent.update_actor(batch)
    assert np.mean(np.abs(forward(agent.actor, states))) < initial, "Actions must shrink toward zero."


def test_zero_critic_gives_zero_actor_gradient(small_agent):
    zero_network(small_agent.critic)
    batch = batch_of(small_agent, [0.0] * 4, [False] * 4)
    grads, objective = small_agent.actor_gradient(batch)
    assert objective == 0.0
    assert all(np.all(array == 0.0) for array in grads.parameters())
    before = flat_parameters(small_agent.actor)
    small_agent.update_actor(batch)
    assert np.array_equal(before, flat_parameters(small_agent.actor))


def random_batch(agent, rng, n=6):
    return Minibatch(
        s=rng.normal(size=(n, agent.observation_size)),
        a=rng.uniform(-1.0, 1.0, size=(n, agent.action_size)),
        r=rng.normal(size=n),
        s_next=rng.normal(size=(n, agent.observation_size)),
        done=rng.random(n) < 0.3,
    )


def test_actor_gradient_matches_finite_differences(small_agent, rng):
    """
    Test the actor gradient against central differences of the mean critic value of the actor's actions.
    """
    batch = random_batch(small_agent, rng)
    grads, _ = small_agent.actor_gradient(batch)

    def objective():
        actions = forward(small_agent.actor, batch.s)
        return float(np.mean(small_agent.q_values(small_agent.critic, batch.s, actions)))

    eps = 1e-5
    worst = 0.0
    for array, grad in zip(small_agent.actor.parameters(), grads.parameters()):
        for index in np.ndindex(array.shape):
            saved = array[index]
            array[index] = saved + eps
            ahead = objective()
            array[index] = saved - eps
            behind = objective()
            array[index] = saved
            numeric = (ahead - behind) / (2 * eps)
            error = abs(grad[index] - numeric) / max(abs(grad[index]), abs(numeric), 1e-4)
            worst = max(worst, error)
    assert worst < 1e-4, f"Worst relative gradient error {worst:.3e}."


def test_critic_loss_descends_on_frozen_batch(small_ddpg_config, rng):
    """
    Test that repeated critic steps at a small learning rate never raise the loss on a fixed batch.
    """
    agent = Agent(3, 2, small_ddpg_config.model_copy(update={"critic_lr": 1e-5}))
    batch = random_batch(agent, rng, n=8)
    losses = [agent.update_critic(batch) for _ in range(101)]
    for before, after in zip(losses, losses[1:]):
        assert after <= before + 1e-12, f"Loss rose from {before:.12e} to {after:.12e}."
    assert losses[-1] < losses[0]


def test_training_keeps_targets_lagging_and_buffer_intact(small_agent, rng):
    """
    Test that targets stay inside the envelope of past live weights and updates never touch stored transitions.
    """
    for _ in range(20):
        small_agent.buffer.push(Transition(
            s=rng.normal(size=3),
            a=rng.uniform(-1.0, 1.0, size=2),
            r=float(rng.normal()),
            s_next=rng.normal(size=3),
            done=bool(rng.random() < 0.2),
        ))
    stored = [(item.s.copy(), item.a.copy(), item.r, item.s_next.copy(), item.done)
              for item in small_agent.buffer.transitions()]

    history = {
        "actor": [flat_parameters(small_agent.actor)],
        "critic": [flat_parameters(small_agent.critic)],
    }
    for _ in range(30):
        small_agent.train_step()
        history["actor"].append(flat_parameters(small_agent.actor))
        history["critic"].append(flat_parameters(small_agent.critic))

        for name, target in (("actor", small_agent.target_actor), ("critic", small_agent.target_critic)):
            past = np.array(history[name])
            values = flat_parameters(target)
            assert np.all(values >= past.min(axis=0) - 1e-12), f"Target {name} left the envelope from below."
            assert np.all(values <= past.max(axis=0) + 1e-12), f"Target {name} left the envelope from above."

    after = small_agent.buffer.transitions()
    assert len(after) == len(stored)
    for (s, a, r, s_next, done), item in zip(stored, after):
        assert np.array_equal(s, item.s) and np.array_equal(a, item.a) and np.array_equal(s_next, item.s_next)
        assert r == item.r and done == item.done, "Training must not rewrite stored transitions."


def test_single_updates_touch_only_their_network(small_agent, rng):
    batch = random_batch(small_agent, rng)
    snapshot = {
        name: flat_parameters(getattr(small_agent, name))
        for name in ("actor", "critic", "target_actor", "target_critic")
    }
    small_agent.update_critic(batch)
    assert np.array_equal(flat_parameters(small_agent.actor), snapshot["actor"])
    assert np.array_equal(flat_parameters(small_agent.target_critic), snapshot["target_critic"])
    small_agent.update_actor(batch)
    assert np.array_equal(flat_parameters(small_agent.target_actor), snapshot["target_actor"])
    assert not np.array_equal(flat_parameters(small_agent.actor), snapshot["actor"])


def test_target_blend(small_agent):
    old = flat_parameters(small_agent.target_critic)
    for array in small_agent.critic.parameters():
        array += 1.0
    live = flat_parameters(small_agent.critic)
    small_agent.update_targets()
    assert flat_parameters(small_agent.target_critic) == pytest.approx(0.1 * live + 0.9 * old)


def test_non_finite_loss_raises(small_agent):
    small_agent.critic.weights[-1][...] = np.inf
    with pytest.raises(TrainingError):
        small_agent.update_critic(batch_of(small_agent, [1.0, 2.0], [False, False]))


def test_train_zero_episodes(small_ddpg_config, tmp_path):
    agent = Agent(1, 1, small_ddpg_config)
    before = flat_parameters(agent.actor)
    metrics = train(agent, PointMassEnv(), 0)
    assert len(metrics) == 0 and agent.total_steps == 0
    assert np.array_equal(before, flat_parameters(agent.actor))

    path = metrics.write_csv(tmp_path / "metrics.csv")
    assert path.read_text().strip() == ",".join(METRICS_COLUMNS), "Expected a header-only CSV."


def test_train_waits_for_warmup(small_ddpg_config):
    agent = Agent(1, 1, small_ddpg_config.model_copy(update={"warmup_steps": 1000}))
    before = flat_parameters(agent.critic)
    metrics = train(agent, PointMassEnv(horizon=20), 2)
    assert agent.total_steps == 40 and len(agent.buffer) == 40
    assert all(math.isnan(item.critic_loss) for item in metrics.episodes), "No updates before warmup."
    assert np.array_equal(before, flat_parameters(agent.critic))


def test_train_updates_after_warmup(small_ddpg_config):
    agent = Agent(1, 1, small_ddpg_config)
    metrics = train(agent, PointMassEnv(horizon=20), 1)
    frame = metrics.to_frame()
    assert list(frame.columns) == METRICS_COLUMNS
    assert frame.loc[0, "steps"] == 20
    assert math.isfinite(frame.loc[0, "critic_loss"]), "Updates start once a batch is available."


def test_train_rejects_mismatched_env(small_agent):
    with pytest.raises(ParameterError):
        train(small_agent, PointMassEnv(), 1)


def test_divergence_dumps_checkpoint(small_ddpg_config, tmp_path):
    agent = Agent(1, 1, small_ddpg_config)
    agent.critic.weights[-1][...] = np.nan
    with pytest.raises(TrainingError):
        train(agent, PointMassEnv(), 1, checkpoint_dir=tmp_path / "dump")
    assert (tmp_path / "dump" / MANIFEST_NAME).is_file(), "Expected a checkpoint dump on divergence."


def test_checkpoint_round_trip(small_ddpg_config, tmp_path):
    """
    Test that a restored agent acts identically and continues the same random stream.
    """
    agent = Agent(1, 1, small_ddpg_config)
    train(agent, PointMassEnv(), 1)
    save_checkpoint(agent, tmp_path, run_config="[ddpg]\n", environment="point-mass")
    restored, manifest = load_checkpoint(tmp_path)

    assert manifest.environment == "point-mass" and manifest.run_config == "[ddpg]\n"
    assert restored.total_steps == agent.total_steps
    for role in ("actor", "critic", "target_actor", "target_critic"):
        assert np.array_equal(flat_parameters(getattr(agent, role)), flat_parameters(getattr(restored, role)))
    obs = np.array([0.3])
    assert np.array_equal(agent.act(obs, explore=True), restored.act(obs, explore=True))


def test_broken_checkpoints(small_agent, tmp_path):
    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path)
    save_checkpoint(small_agent, tmp_path)
    (tmp_path / MANIFEST_NAME).write_text("{not json")
    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path)

    save_checkpoint(small_agent, tmp_path)
    (tmp_path / "critic.twk").write_text("TWK1 actor 5-8-8-1\n")
    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path)


def test_metrics_frame_types(small_ddpg_config):
    agent = Agent(1, 1, small_ddpg_config)
    frame = train(agent, PointMassEnv(), 2).to_frame()
    assert frame["episode"].tolist() == [0, 1]
    assert pd.api.types.is_integer_dtype(frame["steps"])
