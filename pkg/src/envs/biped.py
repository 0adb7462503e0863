import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from biped import (
    FEET,
    DynamicsOptions,
    ExternalForce,
    RobotModel,
    RobotState,
    build_model,
    com,
    com_velocity,
    detect_fall,
    dynamics_step,
    foot_contact_samples,
    foot_lateral_position,
    forward_kinematics,
    nominal_standing_state,
    total_mass
)
from envs.interfaces import EnvironmentInterface
from exceptions import EnvUsageError, IntegrationError, ParameterError
from schemas import BodyId, EnvConfig, RewardConfig, RobotParams, RunConfig, SoilParams
from soil import TerrainGrid, new_grid, resultant_wrench, step_contact
from utils.seeding import make_rng

logger = logging.getLogger(__name__)

SETTLE_ITERATIONS = 200

OBSERVATION_SIZE = 22
ACTION_SIZE = 6

OBSERVATION_INDEX = {
    "com_lateral": slice(0, 1),
    "com_vertical": slice(1, 2),
    "joint_angles": slice(2, 8),
    "joint_velocities": slice(8, 14),
    "vel_forward": slice(14, 15),
    "vel_vertical": slice(15, 16),
    "prev_action": slice(16, 22),
}

INFO_KEYS = (
    "fz_left",
    "fz_right",
    "fx_left",
    "fx_right",
    "com_x",
    "com_z",
    "reward_forward",
    "reward_lateral",
    "reward_vertical",
)


@dataclass(frozen=True)
class Observation:
    """Named view of the 22-entry observation vector; see ``OBSERVATION_INDEX`` for the layout."""

    com_lateral: float
    com_vertical: float
    joint_angles: np.ndarray
    joint_velocities: np.ndarray
    vel_forward: float
    vel_vertical: float
    prev_action: np.ndarray

    def to_array(self) -> np.ndarray:
        return np.concatenate([
            [self.com_lateral, self.com_vertical],
            self.joint_angles,
            self.joint_velocities,
            [self.vel_forward, self.vel_vertical],
            self.prev_action,
        ]).astype(float)

    @classmethod
    def from_array(cls, vector: np.ndarray) -> "Observation":
        vector = np.asarray(vector, dtype=float)
        if vector.shape != (OBSERVATION_SIZE,):
            raise ParameterError(f"Expected an observation of length {OBSERVATION_SIZE}, got {vector.shape}.")
        fields = {name: vector[index].copy() for name, index in OBSERVATION_INDEX.items()}
        for name in ("com_lateral", "com_vertical", "vel_forward", "vel_vertical"):
            fields[name] = float(fields[name][0])
        return cls(**fields)


def lateral_sample_offsets(foot_width: float, spacing: float) -> List[float]:
    """Offsets across the sole, one per grid row the foot covers."""
    rows = max(1, int(round(foot_width / spacing)))
    return [(row - (rows - 1) / 2.0) * spacing for row in range(rows)]


class BipedEnv(EnvironmentInterface):
    """
    Planar biped walking on deformable soil.

    Every control step applies ``action * torque_limit`` at the six joints for
    ``physics_substeps`` physics steps. Each physics step samples both soles, advances the
    soil, and feeds each foot's resultant contact force and moment about its ankle to the
    dynamics.
    """

    name = "biped"

    def __init__(
            self,
            soil: SoilParams,
            robot: RobotParams,
            env: EnvConfig,
            reward: RewardConfig,
            options: DynamicsOptions = DynamicsOptions()
    ):
        self.soil = soil
        self.config = env
        self.reward_config = reward
        self.options = options
        self.model: RobotModel = build_model(robot)
        self.lateral_offsets = lateral_sample_offsets(self.model.foot_width, env.grid_spacing)

        self._rng = make_rng(env.seed)
        self.grid: Optional[TerrainGrid] = None
        self.state: Optional[RobotState] = None
        self.prev_action = np.zeros(ACTION_SIZE)
        self.steps = 0
        self.done = False
        self._start_com_x = 0.0
        self.stance_sinkage = 0.0

    @classmethod
    def from_config(cls, config: RunConfig) -> "BipedEnv":
        return cls(config.soil, config.robot, config.env, config.reward)

    @property
    def observation_size(self) -> int:
        return OBSERVATION_SIZE

    @property
    def action_size(self) -> int:
        return ACTION_SIZE

    @property
    def displacement(self) -> float:
        if self.state is None:
            return 0.0
        return float(com(self.model, self.state.q)[0] - self._start_com_x)

    def _fresh_grid(self) -> TerrainGrid:
        spacing = self.config.grid_spacing
        return new_grid(
            self.config.terrain_extent_x,
            self.config.terrain_extent_y,
            spacing,
            origin=(-spacing / 2.0, 0.0),
        )

    def _pressed_support(self, q: np.ndarray, sinkage: float) -> Tuple[float, TerrainGrid]:
        """Vertical soil force on the soles at rest with the robot lowered by ``sinkage``."""
        lowered = q.copy()
        lowered[1] -= sinkage
        samples = foot_contact_samples(
            self.model, lowered, np.zeros(9), self.config.samples_per_foot, self.lateral_offsets
        )
        forces, grid = step_contact(self._fresh_grid(), samples, self.config.physics_dt, self.soil)
        return float(forces[:, 2].sum()), grid

    def _settle(self, q: np.ndarray) -> Tuple[np.ndarray, TerrainGrid, float]:
        """
        Press the standing robot into fresh soil until the soles carry its weight at rest.

        Bisects on the sinkage; the returned grid holds the plastic sinkage of every node under
        the soles, so the first physics step starts from static support.

        :raises ParameterError: if the soil cannot carry the robot with the legs fully sunk.
        """
        weight = total_mass(self.model) * self.options.gravity
        if weight <= 0:
            return q, self._fresh_grid(), 0.0

        low, high = 0.0, self.model.leg_length + self.model.foot_thickness
        support, grid = self._pressed_support(q, high)
        if support < weight:
            raise ParameterError(
                f"Soil carries at most {support:.3f} N with the legs fully sunk; the robot weighs {weight:.3f} N."
            )
        for _ in range(SETTLE_ITERATIONS):
            middle = 0.5 * (low + high)
            if not low < middle < high:
                break
            if self._pressed_support(q, middle)[0] < weight:
                low = middle
            else:
                high = middle

        support, grid = self._pressed_support(q, high)
        settled = q.copy()
        settled[1] -= high
        logger.debug("stance settled %.6f m into the soil carrying %.3f N", high, support)
        return settled, grid, high

    def reset(self, seed: Optional[int] = None) -> np.ndarray:
        """
        Fresh terrain and a robot standing at rest with uniform joint noise.

        The robot is pressed into the soil until its soles carry its weight, so the episode
        starts from static support instead of dropping onto untouched soil.

        :param seed: Reseeds the environment stream when given; otherwise the stream continues.
        :return: The initial observation.
        """
        if seed is not None:
            self._rng = make_rng(seed)

        state = nominal_standing_state(self.model, rest_height=0.0)
        q = state.q.copy()
        noise = self.config.initial_pose_noise
        if noise > 0:
            q[3:9] += self._rng.uniform(-noise, noise, size=6)
            limits = np.array(self.model.joint_limits)
            q[3:9] = np.clip(q[3:9], limits[:, 0], limits[:, 1])
        q, self.grid, self.stance_sinkage = self._settle(q)
        self.state = RobotState(q=q, qd=state.qd, t=0.0)

        self.prev_action = np.zeros(ACTION_SIZE)
        self.steps = 0
        self.done = False
        self._start_com_x = float(com(self.model, q)[0])
        return self.observe()

    def observe(self) -> np.ndarray:
        if self.state is None:
            raise EnvUsageError("Call reset() before observe().")
        centre = com(self.model, self.state.q)
        velocity = com_velocity(self.model, self.state)
        return Observation(
            com_lateral=0.0,
            com_vertical=float(centre[1]),
            joint_angles=self.state.q[3:9].copy(),
            joint_velocities=self.state.qd[3:9].copy(),
            vel_forward=float(velocity[0]),
            vel_vertical=float(velocity[1]),
            prev_action=self.prev_action.copy(),
        ).to_array()

    def _contact_forces(self) -> Tuple[List[ExternalForce], Dict[BodyId, np.ndarray]]:
        kinematics = forward_kinematics(self.model, self.state.q)
        samples = foot_contact_samples(
            self.model,
            self.state.q,
            self.state.qd,
            self.config.samples_per_foot,
            self.lateral_offsets,
            kinematics,
        )
        forces, self.grid = step_contact(self.grid, samples, self.config.physics_dt, self.soil)

        owners = [sample.owner for sample in samples]
        positions = np.array([sample.world_pos for sample in samples])
        external, totals = [], {}
        for foot in FEET:
            mask = np.array([owner == foot for owner in owners])
            ankle = kinematics.feet[foot].ankle
            ref_point = np.array([ankle[0], positions[mask][0, 1], ankle[1]])
            wrench = resultant_wrench(list(zip(positions[mask], forces[mask])), ref_point)
            totals[foot] = wrench.force
            external.append(ExternalForce(
                owner=foot,
                point=ankle,
                force=wrench.force[[0, 2]],
                moment=-float(wrench.torque[1]),
            ))
        return external, totals

    def _on_soil_bed(self) -> bool:
        """Whether both ankles are still above nodes inside the terrain extent."""
        kinematics = forward_kinematics(self.model, self.state.q)
        for foot in FEET:
            ankle = kinematics.feet[foot].ankle
            index = self.grid.index_of(ankle[0], foot_lateral_position(self.model, foot))
            if not self.grid.in_extent(*index):
                return False
        return True

    def step(self, action: np.ndarray) -> Tuple[np.ndarray, float, bool, dict]:
        """
        Advance one control step.

        :param action: Six torque fractions; clamped to [-1, 1].
        :return: (observation, reward, done, info). The reward is
            ``reward_forward + reward_lateral + reward_vertical - fall_penalty`` with each
            term reported in ``info``.
        :raises EnvUsageError: if the episode is over or was never started.
        """
        if self.state is None:
            raise EnvUsageError("Call reset() before step().")
        if self.done:
            raise EnvUsageError("Episode is done; call reset() before stepping again.")
        action = np.asarray(action, dtype=float)
        if action.shape != (ACTION_SIZE,) or not np.all(np.isfinite(action)):
            raise ParameterError(f"Expected {ACTION_SIZE} finite action components.")
        action = np.clip(action, -1.0, 1.0)
        torques = action * self.model.torque_limit

        com_before = com(self.model, self.state.q)
        force_sums = {foot: np.zeros(3) for foot in FEET}
        substeps = 0
        diverged = False
        for _ in range(self.config.physics_substeps):
            external, totals = self._contact_forces()
            for foot in FEET:
                force_sums[foot] += totals[foot]
            substeps += 1
            try:
                self.state = dynamics_step(
                    self.model, self.state, torques, external, self.config.physics_dt, self.options
                )
            except IntegrationError as error:
                logger.warning("episode terminated at step %d: %s", self.steps, error)
                diverged = True
                break

        com_after = com(self.model, self.state.q)
        delta = com_after - com_before
        weights = self.reward_config
        reward_forward = weights.w_forward * float(delta[0])
        delta_lateral = 0.0  # planar model
        reward_lateral = -weights.w_lateral * abs(delta_lateral)
        reward_vertical = -weights.w_vertical * abs(float(delta[1]))

        fell = diverged or detect_fall(self.model, self.state, self.grid.rest_height)
        fall_penalty = weights.fall_penalty if fell else 0.0
        reward = reward_forward + reward_lateral + reward_vertical - fall_penalty

        off_terrain = not fell and not self._on_soil_bed()
        if off_terrain:
            logger.info("episode ended at step %d: a foot left the soil bed", self.steps)

        self.prev_action = action
        self.steps += 1
        self.done = fell or off_terrain or self.steps >= self.config.max_episode_steps

        left, right = (force_sums[foot] / substeps for foot in FEET)
        info = {
            "fz_left": float(left[2]),
            "fz_right": float(right[2]),
            "fx_left": float(left[0]),
            "fx_right": float(right[0]),
            "com_x": float(com_after[0]),
            "com_z": float(com_after[1]),
            "reward_forward": reward_forward,
            "reward_lateral": reward_lateral,
            "reward_vertical": reward_vertical,
            "fell": fell,
            "off_terrain": off_terrain,
            "fall_penalty": fall_penalty,
            "t": float(self.state.t),
        }
        return self.observe(), float(reward), self.done, info
