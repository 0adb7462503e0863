import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from biped.kinematics import ANGLE_MAP, SEGMENT_INDEX, Kinematics, forward_kinematics
from biped.model import RobotModel, total_mass
from exceptions import IntegrationError, ParameterError
from schemas import BodyId

GRAVITY = 9.81
MAX_DT = 5e-3
JOINTS = slice(3, 9)
FALL_HEIGHT_RATIO = 0.6
FALL_PITCH = 1.0


@dataclass(frozen=True)
class RobotState:
    q: np.ndarray
    qd: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        qd = np.array(self.qd, dtype=float)
        if q.shape != (9,) or qd.shape != (9,):
            raise ParameterError("RobotState needs 9 coordinates and 9 velocities.")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "qd", qd)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.qd)) and math.isfinite(self.t))


@dataclass(frozen=True)
class ExternalForce:
    """Planar force (x, z) at a world point attached to ``owner``, plus a pure moment (CCW positive)."""

    owner: BodyId
    point: np.ndarray
    force: np.ndarray
    moment: float = 0.0


@dataclass(frozen=True)
class DynamicsOptions:
    gravity: float = GRAVITY
    fixed_base: bool = False
    enforce_joint_limits: bool = True


DEFAULT_OPTIONS = DynamicsOptions()


@dataclass(frozen=True)
class _MassTerms:
    kinematics: Kinematics
    mass_matrix: np.ndarray
    bias: np.ndarray
    com_jacobians: dict = field(repr=False)


def _mass_terms(model: RobotModel, q: np.ndarray, qd: np.ndarray) -> _MassTerms:
    """Mass matrix M(q) and velocity-product forces h(q, qd) from link Jacobians."""
    kinematics = forward_kinematics(model, q)
    mass_matrix = np.zeros((9, 9))
    bias = np.zeros(9)
    jacobians = {}
    for body, link in model.links():
        com_point = kinematics.links[body].com
        jacobian = kinematics.point_jacobian(body, com_point)
        angular = ANGLE_MAP[SEGMENT_INDEX[body]]
        mass_matrix += link.mass * jacobian.T @ jacobian + link.inertia * np.outer(angular, angular)
        bias += link.mass * jacobian.T @ kinematics.point_bias(body, com_point, qd)
        jacobians[body] = jacobian
    return _MassTerms(kinematics, mass_matrix, bias, jacobians)


def mass_matrix(model: RobotModel, q: np.ndarray) -> np.ndarray:
    return _mass_terms(model, q, np.zeros(9)).mass_matrix


def _external_generalized(kinematics: Kinematics, external: Sequence[ExternalForce]) -> np.ndarray:
    generalized = np.zeros(9)
    for entry in external:
        point = np.asarray(entry.point, dtype=float)
        generalized += kinematics.point_jacobian(entry.owner, point).T @ np.asarray(entry.force, dtype=float)
        generalized += entry.moment * ANGLE_MAP[SEGMENT_INDEX[entry.owner]]
    return generalized


def _check_finite(state: RobotState, where: str) -> None:
    if not state.is_finite():
        raise IntegrationError(f"Non-finite robot state {where} integration.")


def generalized_acceleration(
        model: RobotModel,
        state: RobotState,
        torques: np.ndarray,
        external: Sequence[ExternalForce] = (),
        options: DynamicsOptions = DEFAULT_OPTIONS
) -> Tuple[np.ndarray, _MassTerms]:
    """
    Solve M(q) qdd = tau - h(q, qd) - g(q) + J^T f for qdd.

    Gravity on a floating base is a uniform base acceleration, so it is added to the base
    vertical acceleration directly; with a fixed base its generalized force -g * M[:, 1] is
    applied to the free coordinates.
    """
    terms = _mass_terms(model, state.q, state.qd)
    generalized = _external_generalized(terms.kinematics, external) - terms.bias
    generalized[JOINTS] += torques

    qdd = np.zeros(9)
    if options.fixed_base:
        free = slice(3, 9)
        rhs = generalized[free] - options.gravity * terms.mass_matrix[free, 1]
        qdd[free] = np.linalg.solve(terms.mass_matrix[free, free], rhs)
    else:
        qdd = np.linalg.solve(terms.mass_matrix, generalized)
        qdd[1] -= options.gravity
    return qdd, terms


def clamp_torques(model: RobotModel, torques) -> np.ndarray:
    torques = np.asarray(torques, dtype=float)
    if torques.shape != (6,):
        raise ParameterError("Expected 6 joint torques.")
    return np.clip(torques, -model.torque_limit, model.torque_limit)


def dynamics_step(
        model: RobotModel,
        state: RobotState,
        torques,
        external: Sequence[ExternalForce] = (),
        dt: float = 1e-3,
        options: DynamicsOptions = DEFAULT_OPTIONS
) -> RobotState:
    """
    Advance the robot by one semi-implicit Euler step (velocities first, then positions).

    Joint torques are clamped to the torque limit. After the velocity update the base linear
    velocity is corrected so that the total linear momentum changes by exactly
    dt * (external forces + weight). Joints pushed past their limits are clamped and their
    velocities zeroed.

    :param model: Robot model.
    :param state: Current state.
    :param torques: Six joint torques (N*m).
    :param external: External forces acting on the robot.
    :param dt: Step in (0, 5e-3] s.
    :param options: Gravity and harness switches.
    :return: The next state.
    :raises IntegrationError: if the state is non-finite before or after the step.
    """
    if not 0 < dt <= MAX_DT:
        raise ParameterError(f"dt must lie in (0, {MAX_DT}], got {dt}.")
    _check_finite(state, "before")
    torques = clamp_torques(model, torques)

    try:
        qdd, terms = generalized_acceleration(model, state, torques, external, options)
    except np.linalg.LinAlgError as error:
        raise IntegrationError(f"Singular mass matrix: {error}")

    qd = state.qd + dt * qdd
    q = state.q.copy()
    q[2:] += dt * qd[2:]

    if options.enforce_joint_limits:
        for offset, (low, high) in enumerate(model.joint_limits):
            index = 3 + offset
            if q[index] < low or q[index] > high:
                q[index] = min(high, max(low, q[index]))
                qd[index] = 0.0

    if options.fixed_base:
        q[0:3] = state.q[0:3]
        qd[0:3] = 0.0
    else:
        external_force = sum((np.asarray(entry.force, dtype=float) for entry in external), np.zeros(2))
        mass = total_mass(model)
        momentum_target = (
            terms.mass_matrix[0:2] @ state.qd
            + dt * (external_force + np.array([0.0, -options.gravity * mass]))
        )
        momentum_now = mass_matrix(model, q)[0:2] @ qd
        qd[0:2] += (momentum_target - momentum_now) / mass
        q[0:2] += dt * qd[0:2]

    next_state = RobotState(q=q, qd=qd, t=state.t + dt)
    _check_finite(next_state, "after")
    return next_state


def linear_momentum(model: RobotModel, state: RobotState) -> np.ndarray:
    return mass_matrix(model, state.q)[0:2] @ state.qd


def com_velocity(model: RobotModel, state: RobotState) -> np.ndarray:
    return linear_momentum(model, state) / total_mass(model)


def mechanical_energy(model: RobotModel, state: RobotState, gravity: float = GRAVITY) -> float:
    terms = _mass_terms(model, state.q, state.qd)
    kinetic = 0.5 * state.qd @ terms.mass_matrix @ state.qd
    potential = gravity * sum(link.mass * terms.kinematics.links[body].com[1] for body, link in model.links())
    return float(kinetic + potential)


def nominal_standing_state(model: RobotModel, rest_height: float = 0.0, x: float = 0.0) -> RobotState:
    """Straight legs, upright torso, flat soles resting on the surface at ``rest_height``."""
    q = np.zeros(9)
    q[0] = x
    q[1] = rest_height + model.leg_length + model.foot_thickness
    return RobotState(q=q, qd=np.zeros(9), t=0.0)


def mirror_state(state: RobotState) -> RobotState:
    """Swap the left and right joint blocks."""
    order = [0, 1, 2, 6, 7, 8, 3, 4, 5]
    return RobotState(q=state.q[order], qd=state.qd[order], t=state.t)


def detect_fall(model: RobotModel, state: RobotState, rest_height: float = 0.0) -> bool:
    """Torso CoM below 60 % of its standing height above the surface, or torso pitched past 1 rad."""
    if abs(state.q[2]) > FALL_PITCH:
        return True
    torso_com = forward_kinematics(model, state.q).links[BodyId.TORSO].com
    return (torso_com[1] - rest_height) < FALL_HEIGHT_RATIO * model.nominal_torso_com_height
