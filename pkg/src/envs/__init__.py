from envs.interfaces import EnvironmentInterface
from envs.biped import (
    ACTION_SIZE,
    INFO_KEYS,
    OBSERVATION_INDEX,
    OBSERVATION_SIZE,
    BipedEnv,
    Observation,
    lateral_sample_offsets
)
from envs.point_mass import PointMassEnv
