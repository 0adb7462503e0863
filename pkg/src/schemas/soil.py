import math

from pydantic import BaseModel, Field


class SoilParams(BaseModel):
    """Soil contact model parameters, SI units, friction angle in radians."""

    k_c: float = Field(0.0, ge=0)
    k_phi: float = Field(0.2e6, gt=0)
    n: float = Field(1.1, gt=0)
    cohesion_c: float = Field(0.0, ge=0)
    friction_angle: float = Field(math.radians(30.0), ge=0, lt=math.pi / 2)
    janosi_K: float = Field(0.01, gt=0)
    elastic_k: float = Field(4e7, gt=0)
    damping_R: float = Field(3e4, ge=0)

    model_config = {
        "frozen": True,
        "extra": "forbid",
        "allow_inf_nan": False,
    }
