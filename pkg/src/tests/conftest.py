import numpy as np
import pytest

from biped import build_model
from config import get_settings
from ddpg import Agent
from envs import BipedEnv
from schemas import DdpgConfig, EnvConfig, RewardConfig, RobotParams, SoilParams
from soil import new_grid


@pytest.fixture(scope="session")
def settings():
    """Process settings for the testing environment."""
    return get_settings()


@pytest.fixture
def soil_params():
    """Soil table defaults."""
    return SoilParams()


@pytest.fixture(scope="session")
def robot_model():
    """Robot table defaults as an immutable model."""
    return build_model()


@pytest.fixture
def grid():
    """Fresh 1 m x 1 m terrain with 1 cm spacing."""
    return new_grid(1.0, 1.0, 0.01)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(1234))


@pytest.fixture
def small_ddpg_config():
    """Tiny networks and batches so agent tests stay fast."""
    return DdpgConfig(
        gamma=0.9,
        tau=0.1,
        batch_size=4,
        buffer_capacity=50,
        warmup_steps=0,
        noise_sigma=0.1,
        hidden_sizes=(8, 8),
        seed=7,
    )


@pytest.fixture
def small_agent(small_ddpg_config):
    return Agent(3, 2, small_ddpg_config)


@pytest.fixture
def short_env_config():
    """Short biped episodes for environment tests."""
    return EnvConfig(max_episode_steps=5, initial_pose_noise=0.0, seed=42)


@pytest.fixture
def biped_env(short_env_config):
    return BipedEnv(SoilParams(), RobotParams(), short_env_config, RewardConfig())
