from schemas.soil import SoilParams
from schemas.robot import RobotParams
from schemas.env import EnvConfig, RewardConfig
from schemas.ddpg import DdpgConfig
from schemas.config import RunConfig
from schemas.bodies import BodyId
from schemas.checkpoint import CheckpointManifest, NETWORK_ROLES
