from ddpg.buffer import Minibatch, ReplayBuffer, Transition
from ddpg.agent import Agent
from ddpg.checkpoint import MANIFEST_NAME, load_checkpoint, load_manifest, save_checkpoint
from ddpg.training import METRICS_COLUMNS, EpisodeMetrics, TrainingMetrics, train
