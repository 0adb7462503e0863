from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from exceptions import ParameterError
from schemas import BodyId, SoilParams
from soil.grid import NodeIndex, NodeState, TerrainGrid
from soil.laws import janosi_shear, node_pressure, shear_limit
from soil.patches import detect_patches


@dataclass(frozen=True)
class ContactSample:
    """A point of a body that may touch the soil, with its world velocity."""

    world_pos: np.ndarray
    velocity: np.ndarray
    owner: BodyId


@dataclass(frozen=True)
class Wrench:
    force: np.ndarray
    torque: np.ndarray
    ref_point: np.ndarray


def _group_by_node(indices: np.ndarray, penetration: np.ndarray) -> Dict[NodeIndex, List[int]]:
    groups: Dict[NodeIndex, List[int]] = {}
    for sample, (i, j) in enumerate(indices.tolist()):
        if penetration[sample] > 0.0:
            groups.setdefault((i, j), []).append(sample)
    return groups


def step_contact(
        grid: TerrainGrid,
        samples: Sequence[ContactSample],
        dt: float,
        params: SoilParams
) -> Tuple[np.ndarray, TerrainGrid]:
    """
    Advance the soil by one physics step and return the force on every sample.

    Samples are mapped to their nearest node and penetration is measured against the rest
    height. Several samples on one node share the node: its sinkage is the deepest of them,
    its slip velocity their mean, and its force is split equally between them. Normal
    pressure follows ``node_pressure`` with the width of the node's patch; tangential stress
    follows Janosi-Hanamoto on the accumulated slip, capped by the Mohr-Coulomb limit, and
    opposes the slip. Nodes that lose contact forget their slip.

    :param grid: Terrain, mutated in place.
    :param samples: Contact candidates.
    :param dt: Physics step (s).
    :param params: Soil parameters.
    :return: (forces, grid) where forces is an (N, 3) array in sample order.
    """
    if not dt > 0:
        raise ParameterError(f"dt must be positive, got {dt}.")

    forces = np.zeros((len(samples), 3))
    contacting: Dict[NodeIndex, List[int]] = {}

    if samples:
        positions = np.array([sample.world_pos for sample in samples], dtype=float)
        velocities = np.array([sample.velocity for sample in samples], dtype=float)
        if not (np.all(np.isfinite(positions)) and np.all(np.isfinite(velocities))):
            raise ParameterError("Contact samples must have finite positions and velocities.")
        penetration = np.maximum(0.0, grid.rest_height - positions[:, 2])
        contacting = _group_by_node(grid.indices_of(positions[:, :2]), penetration)

    for index, node in list(grid.nodes.items()):
        if node.in_contact and index not in contacting:
            node.in_contact = False
            node.shear_j = 0.0
            if node.plastic_sinkage == 0.0:
                del grid.nodes[index]

    if not contacting:
        return forces, grid

    width_of = {}
    for patch in detect_patches(grid, contacting):
        for index in patch.node_indices:
            width_of[index] = patch.width_b

    cell_area = grid.spacing * grid.spacing
    for index, members in contacting.items():
        node = grid.nodes.get(index)
        if node is None:
            node = grid.nodes[index] = NodeState()

        y_total = float(penetration[members].max())
        node_velocity = velocities[members].mean(axis=0)
        v_n = -float(node_velocity[2])

        sigma = node_pressure(params, node, y_total, v_n, width_of[index])
        normal_force = sigma * cell_area

        slip = node_velocity[:2]
        slip_speed = float(np.hypot(slip[0], slip[1]))
        node.shear_j += slip_speed * dt
        node.in_contact = True

        tangential = np.zeros(2)
        if slip_speed > 0.0:
            tau = janosi_shear(shear_limit(sigma, params), node.shear_j, params.janosi_K)
            tangential = -(tau * cell_area) * slip / slip_speed

        node.plastic_sinkage = max(node.plastic_sinkage, y_total)

        share = 1.0 / len(members)
        forces[members, 0] = tangential[0] * share
        forces[members, 1] = tangential[1] * share
        forces[members, 2] = normal_force * share

    return forces, grid


def resultant_wrench(forces: Sequence[Tuple[np.ndarray, np.ndarray]], ref_point) -> Wrench:
    """Net force and the torque about ``ref_point`` of point forces given as (position, force)."""
    ref_point = np.asarray(ref_point, dtype=float)
    if len(forces) == 0:
        return Wrench(force=np.zeros(3), torque=np.zeros(3), ref_point=ref_point)
    positions = np.array([position for position, _ in forces], dtype=float)
    vectors = np.array([force for _, force in forces], dtype=float)
    return Wrench(
        force=vectors.sum(axis=0),
        torque=np.cross(positions - ref_point, vectors).sum(axis=0),
        ref_point=ref_point,
    )
