from typing import Any, Dict, Optional

from pydantic import BaseModel, Field

from schemas.ddpg import DdpgConfig

NETWORK_ROLES = ("actor", "critic", "target_actor", "target_critic")


class CheckpointManifest(BaseModel):
    """Contents of ``manifest.json`` in a checkpoint directory."""

    format: str = "TWK1"
    environment: str = "biped"
    ddpg: DdpgConfig
    run_config: Optional[str] = None
    observation_size: int = Field(..., gt=0)
    action_size: int = Field(..., gt=0)
    total_steps: int = Field(0, ge=0)
    rng_state: Dict[str, Any]
    networks: Dict[str, str] = Field(default_factory=lambda: {role: f"{role}.twk" for role in NETWORK_ROLES})

    model_config = {
        "extra": "forbid",
    }
