from pydantic import BaseModel, Field, model_validator


class EnvConfig(BaseModel):
    control_dt: float = Field(0.02, gt=0)
    physics_substeps: int = Field(20, gt=0)
    max_episode_steps: int = Field(1000, gt=0)
    seed: int = 0
    initial_pose_noise: float = Field(0.02, ge=0)
    grid_spacing: float = Field(0.01, gt=0)
    terrain_extent_x: float = Field(4.0, gt=0)
    terrain_extent_y: float = Field(1.0, gt=0)
    samples_per_foot: int = Field(10, ge=2)
    step_length: float = Field(0.1, gt=0)
    step_height: float = Field(0.03, gt=0)
    gait_period: float = Field(0.8, gt=0)

    model_config = {
        "frozen": True,
        "extra": "forbid",
        "allow_inf_nan": False,
    }

    @property
    def physics_dt(self) -> float:
        return self.control_dt / self.physics_substeps

    @model_validator(mode="after")
    def check_physics_dt(self):
        if self.physics_dt > 5e-3:
            raise ValueError(
                f"control_dt / physics_substeps = {self.physics_dt} s exceeds the 5e-3 s physics step limit."
            )
        return self


class RewardConfig(BaseModel):
    w_forward: float = Field(1.0, ge=0)
    w_lateral: float = Field(0.5, ge=0)
    w_vertical: float = Field(0.5, ge=0)
    fall_penalty: float = Field(10.0, ge=0)

    model_config = {
        "frozen": True,
        "extra": "forbid",
        "allow_inf_nan": False,
    }
