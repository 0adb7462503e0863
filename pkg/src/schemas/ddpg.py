from typing import Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from schemas.validators import parse_layer_sizes


class DdpgConfig(BaseModel):
    gamma: float = Field(0.99, ge=0, lt=1)
    tau: float = Field(0.005, gt=0, le=1)
    batch_size: int = Field(64, gt=0)
    buffer_capacity: int = Field(100_000, gt=0)
    warmup_steps: int = Field(1000, ge=0)
    noise_sigma: float = Field(0.1, ge=0)
    updates_per_step: int = Field(1, ge=0)
    seed: int = 0
    actor_lr: float = Field(1e-4, gt=0)
    critic_lr: float = Field(1e-3, gt=0)
    hidden_sizes: Tuple[int, ...] = (64, 64)

    model_config = {
        "frozen": True,
        "extra": "forbid",
        "allow_inf_nan": False,
    }

    @field_validator("hidden_sizes", mode="before")
    @classmethod
    def normalize_hidden_sizes(cls, value):
        return parse_layer_sizes(value)

    @model_validator(mode="after")
    def check_batch_fits_buffer(self):
        if self.batch_size > self.buffer_capacity:
            raise ValueError("batch_size must not exceed buffer_capacity.")
        return self
