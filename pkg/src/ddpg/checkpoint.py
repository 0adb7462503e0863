import json
import logging
from pathlib import Path
from typing import Optional, Tuple

from pydantic import ValidationError

from ddpg.agent import Agent
from exceptions import CheckpointError, ParameterError
from nn import load_mlp, save_mlp
from schemas import NETWORK_ROLES, CheckpointManifest
from utils.seeding import restore_rng, rng_state

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def save_checkpoint(
        agent: Agent,
        directory,
        run_config: Optional[str] = None,
        environment: str = "biped"
) -> Path:
    """
    Write the four networks and ``manifest.json`` into ``directory``.

    :param agent: Agent to persist.
    :param directory: Target directory, created if missing.
    :param run_config: Serialized run configuration stored alongside.
    :param environment: Name of the environment the agent was trained on.
    :return: The manifest path.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = CheckpointManifest(
        environment=environment,
        ddpg=agent.cfg,
        run_config=run_config,
        observation_size=agent.observation_size,
        action_size=agent.action_size,
        total_steps=agent.total_steps,
        rng_state=rng_state(agent.rng),
    )
    for role in NETWORK_ROLES:
        save_mlp(getattr(agent, role), role, directory / manifest.networks[role])

    path = directory / MANIFEST_NAME
    path.write_text(manifest.model_dump_json(indent=2), encoding="utf-8")
    logger.info("checkpoint written to %s", directory)
    return path


def load_manifest(directory) -> CheckpointManifest:
    path = Path(directory) / MANIFEST_NAME
    if not path.is_file():
        raise CheckpointError(f"No {MANIFEST_NAME} in {directory}.")
    try:
        return CheckpointManifest.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, ValidationError) as error:
        raise CheckpointError(f"Invalid manifest {path}: {error}")


def load_checkpoint(directory) -> Tuple[Agent, CheckpointManifest]:
    """
    Rebuild an agent from a checkpoint directory.

    Networks, the step counter and the random stream are restored; the replay buffer and the
    optimizer moments start empty.
    """
    directory = Path(directory)
    manifest = load_manifest(directory)
    agent = Agent(manifest.observation_size, manifest.action_size, manifest.ddpg)

    networks = {}
    for role in NETWORK_ROLES:
        mlp, stored_role = load_mlp(directory / manifest.networks[role])
        if stored_role != role:
            raise CheckpointError(f"{manifest.networks[role]} holds role {stored_role!r}, expected {role!r}.")
        networks[role] = mlp
    try:
        agent.replace_networks(**networks)
    except ParameterError as error:
        raise CheckpointError(str(error))

    try:
        agent.rng = restore_rng(manifest.rng_state)
    except (KeyError, TypeError, ValueError) as error:
        raise CheckpointError(f"Invalid random state in manifest: {error}")
    agent.total_steps = manifest.total_steps
    return agent, manifest
