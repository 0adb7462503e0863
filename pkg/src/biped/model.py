import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from exceptions import ParameterError
from schemas import BodyId, RobotParams

JOINT_NAMES = ("hip_L", "knee_L", "ankle_L", "hip_R", "knee_R", "ankle_R")


@dataclass(frozen=True)
class LinkParams:
    """Planar rigid link: CoM sits ``com_offset`` from the proximal joint, inertia is about the CoM."""

    mass: float
    length: float
    com_offset: float
    inertia: float

    def __post_init__(self):
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise ParameterError(f"Link mass must be positive, got {self.mass}.")
        if not (math.isfinite(self.length) and self.length >= 0):
            raise ParameterError(f"Link length must be non-negative, got {self.length}.")
        if not 0 <= self.com_offset <= self.length:
            raise ParameterError(f"CoM offset {self.com_offset} must lie within the link length {self.length}.")
        if not (math.isfinite(self.inertia) and self.inertia >= 0):
            raise ParameterError(f"Link inertia must be non-negative, got {self.inertia}.")


@dataclass(frozen=True)
class RobotModel:
    """
    Seven-link sagittal biped with identical left and right legs.

    The foot link runs heel to toe; its ``com_offset`` is the depth of the foot CoM below the
    ankle, and ``foot_thickness`` is the ankle height above the sole.
    """

    torso: LinkParams
    thigh: LinkParams
    shank: LinkParams
    foot: LinkParams
    foot_length: float
    foot_width: float
    foot_thickness: float
    hip_spacing: float
    torque_limit: float
    joint_limits: Tuple[Tuple[float, float], ...]

    def links(self) -> List[Tuple[BodyId, LinkParams]]:
        return [
            (BodyId.TORSO, self.torso),
            (BodyId.LEFT_THIGH, self.thigh),
            (BodyId.LEFT_SHANK, self.shank),
            (BodyId.LEFT_FOOT, self.foot),
            (BodyId.RIGHT_THIGH, self.thigh),
            (BodyId.RIGHT_SHANK, self.shank),
            (BodyId.RIGHT_FOOT, self.foot),
        ]

    @property
    def leg_length(self) -> float:
        return self.thigh.length + self.shank.length

    @property
    def nominal_torso_com_height(self) -> float:
        """Torso CoM height above the soles in the straight standing pose."""
        return self.leg_length + self.foot_thickness + self.torso.com_offset


def _rod(mass: float, length: float, inertia: Optional[float]) -> LinkParams:
    return LinkParams(
        mass=mass,
        length=length,
        com_offset=length / 2.0,
        inertia=mass * length ** 2 / 12.0 if inertia is None else inertia,
    )


def _lumped_torso(params: RobotParams) -> LinkParams:
    """Torso rod standing on the hip axis plus the hip block as a point mass on that axis."""
    mass = params.torso_mass + params.hip_mass
    rod_com = params.torso_length / 2.0
    com = params.torso_mass * rod_com / mass
    if params.torso_inertia is not None:
        inertia = params.torso_inertia
    else:
        inertia = (
            params.torso_mass * params.torso_length ** 2 / 12.0
            + params.torso_mass * (rod_com - com) ** 2
            + params.hip_mass * com ** 2
        )
    return LinkParams(mass=mass, length=params.torso_length, com_offset=com, inertia=inertia)


def build_model(params: Optional[RobotParams] = None) -> RobotModel:
    """
    Build the biped from its link table; defaults are the robot table values.

    :param params: Link masses, lengths and limits.
    :return: The immutable RobotModel.
    """
    params = params or RobotParams()

    foot_inertia = params.foot_inertia
    if foot_inertia is None:
        foot_inertia = params.foot_mass * params.foot_length ** 2 / 12.0

    return RobotModel(
        torso=_lumped_torso(params),
        thigh=_rod(params.thigh_mass, params.thigh_length, params.thigh_inertia),
        shank=_rod(params.shank_mass, params.shank_length, params.shank_inertia),
        foot=LinkParams(
            mass=params.foot_mass,
            length=params.foot_length,
            com_offset=min(params.foot_thickness / 2.0, params.foot_length),
            inertia=foot_inertia,
        ),
        foot_length=params.foot_length,
        foot_width=params.foot_width,
        foot_thickness=params.foot_thickness,
        hip_spacing=params.hip_spacing,
        torque_limit=params.torque_limit,
        joint_limits=(
            (params.hip_min, params.hip_max),
            (params.knee_min, params.knee_max),
            (params.ankle_min, params.ankle_max),
        ) * 2,
    )


def total_mass(model: RobotModel) -> float:
    return sum(link.mass for _, link in model.links())
