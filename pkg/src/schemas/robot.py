from typing import Optional

from pydantic import BaseModel, Field, model_validator

from schemas.validators import validate_range


class RobotParams(BaseModel):
    """
    Link table of the planar biped.

    Masses in kg, lengths in m. The hip block is lumped into the torso when the model is built.
    """

    torso_mass: float = Field(4.0, gt=0)
    torso_length: float = Field(0.23, gt=0)
    hip_mass: float = Field(1.5, gt=0)
    thigh_mass: float = Field(2.5, gt=0)
    thigh_length: float = Field(0.23, gt=0)
    shank_mass: float = Field(2.5, gt=0)
    shank_length: float = Field(0.23, gt=0)
    foot_mass: float = Field(1.0, gt=0)
    foot_length: float = Field(0.09, gt=0)
    foot_width: float = Field(0.05, gt=0)
    foot_thickness: float = Field(0.03, ge=0)
    hip_spacing: float = Field(0.14, gt=0)
    torque_limit: float = Field(30.0, gt=0)

    torso_inertia: Optional[float] = Field(None, ge=0)
    thigh_inertia: Optional[float] = Field(None, ge=0)
    shank_inertia: Optional[float] = Field(None, ge=0)
    foot_inertia: Optional[float] = Field(None, ge=0)

    hip_min: float = -1.2
    hip_max: float = 1.2
    knee_min: float = 0.0
    knee_max: float = 2.2
    ankle_min: float = -0.8
    ankle_max: float = 0.8

    model_config = {
        "frozen": True,
        "extra": "forbid",
        "allow_inf_nan": False,
    }

    @model_validator(mode="after")
    def check_joint_limits(self):
        validate_range(self.hip_min, self.hip_max, "hip")
        validate_range(self.knee_min, self.knee_max, "knee")
        validate_range(self.ankle_min, self.ankle_max, "ankle")
        return self

    def scaled_masses(self, factor: float) -> "RobotParams":
        """Return a copy with every mass multiplied by ``factor``."""
        return self.model_copy(update={
            name: getattr(self, name) * factor
            for name in ("torso_mass", "hip_mass", "thigh_mass", "shank_mass", "foot_mass")
        })
