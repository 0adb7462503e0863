"""
Planar kinematics of the seven-link biped.

Generalized coordinates are ``q = [base_x, base_z, base_pitch, hip_L, knee_L, ankle_L, hip_R,
knee_R, ankle_R]`` with the base at the hip axis. Every segment angle is counter-clockwise in
the x-z plane (x forward, z up): a leg segment at angle 0 hangs straight down, the torso at
pitch 0 points straight up and a foot at angle 0 has a horizontal sole. A positive knee angle
folds the shank backwards.
"""
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from biped.model import RobotModel
from exceptions import ParameterError, ReachabilityError
from schemas import BodyId
from soil import ContactSample

SEGMENTS = (
    BodyId.TORSO,
    BodyId.LEFT_THIGH,
    BodyId.LEFT_SHANK,
    BodyId.LEFT_FOOT,
    BodyId.RIGHT_THIGH,
    BodyId.RIGHT_SHANK,
    BodyId.RIGHT_FOOT,
)
SEGMENT_INDEX = {body: index for index, body in enumerate(SEGMENTS)}
PARENT = {
    BodyId.TORSO: None,
    BodyId.LEFT_THIGH: None,
    BodyId.LEFT_SHANK: BodyId.LEFT_THIGH,
    BodyId.LEFT_FOOT: BodyId.LEFT_SHANK,
    BodyId.RIGHT_THIGH: None,
    BodyId.RIGHT_SHANK: BodyId.RIGHT_THIGH,
    BodyId.RIGHT_FOOT: BodyId.RIGHT_SHANK,
}
FEET = (BodyId.LEFT_FOOT, BodyId.RIGHT_FOOT)

# Rows: segment absolute angles, columns: generalized coordinates.
ANGLE_MAP = np.array([
    [0, 0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, -1, 0, 0, 0, 0],
    [0, 0, 1, 1, -1, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, -1, 0],
    [0, 0, 1, 0, 0, 0, 1, -1, 1],
], dtype=float)

QUARTER_TURN = np.array([[0.0, -1.0], [1.0, 0.0]])


def rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class LinkPose:
    body: BodyId
    origin: np.ndarray
    com: np.ndarray
    angle: float


@dataclass(frozen=True)
class FootPose:
    body: BodyId
    ankle: np.ndarray
    heel: np.ndarray
    toe: np.ndarray
    angle: float


@dataclass(frozen=True)
class Kinematics:
    """Result of ``forward_kinematics``: link and foot poses plus Jacobian helpers."""

    q: np.ndarray
    angles: np.ndarray
    links: Dict[BodyId, LinkPose]
    feet: Dict[BodyId, FootPose]

    def chain(self, body: BodyId) -> List[BodyId]:
        """Segments from the base down to ``body``."""
        chain = []
        while body is not None:
            chain.append(body)
            body = PARENT[body]
        return chain[::-1]

    def point_jacobian(self, body: BodyId, point: np.ndarray) -> np.ndarray:
        """2 x 9 Jacobian of a world point rigidly attached to ``body``."""
        jacobian = np.zeros((2, 9))
        jacobian[0, 0] = 1.0
        jacobian[1, 1] = 1.0
        chain = self.chain(body)
        for position, segment in enumerate(chain):
            origin = self.links[segment].origin
            end = self.links[chain[position + 1]].origin if position + 1 < len(chain) else point
            lever = QUARTER_TURN @ (end - origin)
            jacobian += np.outer(lever, ANGLE_MAP[SEGMENT_INDEX[segment]])
        return jacobian

    def point_bias(self, body: BodyId, point: np.ndarray, qd: np.ndarray) -> np.ndarray:
        """Acceleration of the attached point when all generalized accelerations are zero."""
        rates = ANGLE_MAP @ qd
        chain = self.chain(body)
        bias = np.zeros(2)
        for position, segment in enumerate(chain):
            origin = self.links[segment].origin
            end = self.links[chain[position + 1]].origin if position + 1 < len(chain) else point
            bias -= rates[SEGMENT_INDEX[segment]] ** 2 * (end - origin)
        return bias


def forward_kinematics(model: RobotModel, q: np.ndarray) -> Kinematics:
    """
    Chain transforms from the floating base through hips, knees and ankles.

    :param model: Robot model.
    :param q: Generalized coordinates (9,).
    :return: Kinematics with every link's proximal joint, CoM and angle, plus heel and toe points.
    """
    q = np.asarray(q, dtype=float)
    angles = ANGLE_MAP @ q
    base = q[0:2].copy()
    half_foot = model.foot_length / 2.0

    links = {
        BodyId.TORSO: LinkPose(
            BodyId.TORSO, base, base + rotation(angles[0]) @ (0.0, model.torso.com_offset), float(angles[0])
        )
    }
    feet = {}
    for thigh, shank, foot in (SEGMENTS[1:4], SEGMENTS[4:7]):
        r_thigh = rotation(angles[SEGMENT_INDEX[thigh]])
        r_shank = rotation(angles[SEGMENT_INDEX[shank]])
        r_foot = rotation(angles[SEGMENT_INDEX[foot]])

        knee = base + r_thigh @ (0.0, -model.thigh.length)
        ankle = knee + r_shank @ (0.0, -model.shank.length)

        links[thigh] = LinkPose(
            thigh, base, base + r_thigh @ (0.0, -model.thigh.com_offset), float(angles[SEGMENT_INDEX[thigh]])
        )
        links[shank] = LinkPose(
            shank, knee, knee + r_shank @ (0.0, -model.shank.com_offset), float(angles[SEGMENT_INDEX[shank]])
        )
        links[foot] = LinkPose(
            foot, ankle, ankle + r_foot @ (0.0, -model.foot.com_offset), float(angles[SEGMENT_INDEX[foot]])
        )
        feet[foot] = FootPose(
            body=foot,
            ankle=ankle,
            heel=ankle + r_foot @ (-half_foot, -model.foot_thickness),
            toe=ankle + r_foot @ (half_foot, -model.foot_thickness),
            angle=float(angles[SEGMENT_INDEX[foot]]),
        )

    return Kinematics(q=q, angles=angles, links=links, feet=feet)


def com(model: RobotModel, q: np.ndarray) -> np.ndarray:
    """Whole-body CoM (x, z)."""
    kinematics = forward_kinematics(model, q)
    weighted = sum(link.mass * kinematics.links[body].com for body, link in model.links())
    return weighted / sum(link.mass for _, link in model.links())


def foot_lateral_position(model: RobotModel, foot: BodyId) -> float:
    half = model.hip_spacing / 2.0
    return half if foot == BodyId.LEFT_FOOT else -half


def foot_contact_samples(
        model: RobotModel,
        q: np.ndarray,
        qd: np.ndarray,
        n_per_foot: int,
        lateral_offsets: Sequence[float] = (0.0,),
        kinematics: Kinematics = None
) -> List[ContactSample]:
    """
    Sole points of both feet with their rigid-body velocities.

    ``n_per_foot`` points run heel to toe along each sole at the foot centreline; each extra
    entry of ``lateral_offsets`` repeats that row shifted sideways.
    """
    if n_per_foot < 2:
        raise ParameterError("n_per_foot must be at least 2.")
    qd = np.asarray(qd, dtype=float)
    kinematics = kinematics or forward_kinematics(model, q)
    along = np.linspace(-model.foot_length / 2.0, model.foot_length / 2.0, n_per_foot)

    samples = []
    for foot in FEET:
        pose = kinematics.feet[foot]
        r_foot = rotation(pose.angle)
        ankle_velocity = kinematics.point_jacobian(foot, pose.ankle) @ qd
        rate = float(ANGLE_MAP[SEGMENT_INDEX[foot]] @ qd)
        centreline = foot_lateral_position(model, foot)

        for offset in along:
            point = pose.ankle + r_foot @ (offset, -model.foot_thickness)
            velocity = ankle_velocity + rate * (QUARTER_TURN @ (point - pose.ankle))
            for lateral in lateral_offsets:
                samples.append(ContactSample(
                    world_pos=np.array([point[0], centreline + lateral, point[1]]),
                    velocity=np.array([velocity[0], 0.0, velocity[1]]),
                    owner=foot,
                ))
    return samples


def leg_ik(model: RobotModel, hip_pos, ankle_target) -> Tuple[float, float]:
    """
    Closed-form planar two-link inverse kinematics, knee folding backwards.

    Angles are for an upright torso: the returned hip angle is the thigh's absolute angle.

    :param model: Robot model (thigh and shank lengths).
    :param hip_pos: Hip (x, z).
    :param ankle_target: Desired ankle (x, z).
    :return: (hip_angle, knee_angle) in radians, knee_angle in [0, pi].
    :raises ReachabilityError: if the target is nearer or farther than the leg can reach.
    """
    l1, l2 = model.thigh.length, model.shank.length
    dx = float(ankle_target[0]) - float(hip_pos[0])
    dz = float(ankle_target[1]) - float(hip_pos[1])
    distance = math.hypot(dx, dz)

    tolerance = 1e-12 * (l1 + l2)
    if distance > l1 + l2 + tolerance or distance < abs(l1 - l2) - tolerance:
        raise ReachabilityError(
            f"Ankle target at {distance:.6f} m from the hip is outside [{abs(l1 - l2):.6f}, {l1 + l2:.6f}] m."
        )

    cos_knee = (distance ** 2 - l1 ** 2 - l2 ** 2) / (2.0 * l1 * l2)
    knee = math.acos(min(1.0, max(-1.0, cos_knee)))
    direction = math.atan2(dx, -dz)
    hip = direction + math.atan2(l2 * math.sin(knee), l1 + l2 * math.cos(knee))
    return hip, knee
