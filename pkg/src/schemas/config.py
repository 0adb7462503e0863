from pydantic import BaseModel, Field

from schemas.ddpg import DdpgConfig
from schemas.env import EnvConfig, RewardConfig
from schemas.robot import RobotParams
from schemas.soil import SoilParams


class RunConfig(BaseModel):
    """Everything a run needs; defaults reproduce the robot and soil tables."""

    soil: SoilParams = Field(default_factory=SoilParams)
    robot: RobotParams = Field(default_factory=RobotParams)
    env: EnvConfig = Field(default_factory=EnvConfig)
    reward: RewardConfig = Field(default_factory=RewardConfig)
    ddpg: DdpgConfig = Field(default_factory=DdpgConfig)
    output_dir: str = "runs"

    model_config = {
        "frozen": True,
        "extra": "forbid",
    }

    def with_seed(self, seed: int) -> "RunConfig":
        return self.model_copy(update={
            "env": self.env.model_copy(update={"seed": seed}),
            "ddpg": self.ddpg.model_copy(update={"seed": seed}),
        })
