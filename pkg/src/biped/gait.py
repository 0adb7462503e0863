import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from biped.dynamics import RobotState
from biped.kinematics import leg_ik
from biped.model import RobotModel
from exceptions import ParameterError

NOMINAL_DEPTH_RATIO = 0.95


@dataclass(frozen=True)
class GaitReference:
    step_length: float
    step_height: float
    period: float

    def __post_init__(self):
        for name in ("step_length", "step_height", "period"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive, got {value}.")


def cycloid_reference(gait: GaitReference, t: float) -> Tuple[float, float]:
    """
    Swing-ankle target along one cycloid arch, relative to the lift-off point.

    The phase restarts every period; the end of a period (t = k * period, k >= 1) maps to the
    touch-down point rather than back to the start.

    :param gait: Step length, step height and period.
    :param t: Time since the cycle began (s), non-negative.
    :return: (x, z) offsets of the ankle target (m).
    """
    if not (math.isfinite(t) and t >= 0):
        raise ParameterError(f"t must be a non-negative time, got {t}.")
    remainder = math.fmod(t, gait.period)
    if t > 0 and remainder == 0.0:
        phi = 2.0 * math.pi
    else:
        phi = 2.0 * math.pi * remainder / gait.period
    x = gait.step_length * (phi - math.sin(phi)) / (2.0 * math.pi)
    z = gait.step_height * (1.0 - math.cos(phi)) / 2.0
    return x, z


class ReferenceGaitController:
    """
    Scripted walking baseline.

    The left leg swings during the first half of every period and the right leg during the
    second. The swing ankle follows a cycloid from ``-step_length / 2`` to ``+step_length / 2``
    relative to the hip while the stance ankle slides back linearly; ankle targets sit
    ``0.95 * leg_length`` below the hip. Joint targets come from ``leg_ik`` with flat feet and
    are tracked by a PD law whose torques are returned as unit-box actions.
    """

    def __init__(self, model: RobotModel, gait: GaitReference, kp: float = 100.0, kd: float = 5.0):
        if kp < 0 or kd < 0:
            raise ParameterError("PD gains must be non-negative.")
        self.model = model
        self.gait = gait
        self.kp = kp
        self.kd = kd
        self._swing = GaitReference(gait.step_length, gait.step_height, gait.period / 2.0)
        self._depth = NOMINAL_DEPTH_RATIO * model.leg_length

    def ankle_targets(self, t: float) -> Tuple[np.ndarray, np.ndarray]:
        """Left and right ankle targets in the hip frame at time ``t``."""
        half = self.gait.period / 2.0
        phase = math.fmod(t, self.gait.period)
        swing_time = math.fmod(phase, half)
        swing_x, swing_z = cycloid_reference(self._swing, swing_time)
        swing = np.array([swing_x - self.gait.step_length / 2.0, swing_z - self._depth])
        stance = np.array([self.gait.step_length * (0.5 - swing_time / half), -self._depth])
        if phase < half:
            return swing, stance
        return stance, swing

    def joint_targets(self, state: RobotState) -> np.ndarray:
        pitch = state.q[2]
        targets = np.zeros(6)
        for offset, ankle in zip((0, 3), self.ankle_targets(state.t)):
            thigh, knee = leg_ik(self.model, (0.0, 0.0), ankle)
            hip = thigh - pitch
            targets[offset:offset + 3] = (hip, knee, knee - hip - pitch)
        limits = np.array(self.model.joint_limits)
        return np.clip(targets, limits[:, 0], limits[:, 1])

    def __call__(self, state: RobotState) -> np.ndarray:
        targets = self.joint_targets(state)
        torques = self.kp * (targets - state.q[3:9]) - self.kd * state.qd[3:9]
        return np.clip(torques / self.model.torque_limit, -1.0, 1.0)
