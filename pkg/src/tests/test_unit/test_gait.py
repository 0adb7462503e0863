import math

import numpy as np
import pytest

from biped import (
    GaitReference,
    ReferenceGaitController,
    RobotState,
    cycloid_reference,
    forward_kinematics,
    nominal_standing_state
)
from exceptions import ParameterError
from schemas import BodyId

GAIT = GaitReference(step_length=0.1, step_height=0.03, period=1.0)


def test_cycloid_key_points():
    """
    Test the cycloid arch at lift-off, mid-swing and touch-down.
    """
    assert cycloid_reference(GAIT, 0.0) == pytest.approx((0.0, 0.0)), "Expected lift-off at the origin."
    assert cycloid_reference(GAIT, 0.5) == pytest.approx((0.05, 0.03)), "Expected the apex at mid-swing."
    assert cycloid_reference(GAIT, 1.0) == pytest.approx((0.1, 0.0)), "End of period is touch-down."
    assert cycloid_reference(GAIT, 2.5) == pytest.approx((0.05, 0.03)), "Phase must wrap every period."


def test_cycloid_is_monotone_forward():
    xs = [cycloid_reference(GAIT, t)[0] for t in np.linspace(0.0, 0.999, 200)]
    assert np.all(np.diff(xs) >= 0), "The swing foot must never move backwards."
    heights = [cycloid_reference(GAIT, t)[1] for t in np.linspace(0.0, 0.999, 200)]
    assert min(heights) >= 0.0 and max(heights) <= 0.03 + 1e-12


@pytest.mark.parametrize("t", [-0.1, math.nan, math.inf])
def test_cycloid_rejects_bad_time(t):
    with pytest.raises(ParameterError):
        cycloid_reference(GAIT, t)


@pytest.mark.parametrize("field", ["step_length", "step_height", "period"])
def test_gait_reference_rejects_non_positive(field):
    values = {"step_length": 0.1, "step_height": 0.03, "period": 1.0, field: 0.0}
    with pytest.raises(ParameterError):
        GaitReference(**values)


def test_controller_ankle_targets_alternate(robot_model):
    controller = ReferenceGaitController(robot_model, GAIT)
    depth = 0.95 * robot_model.leg_length

    left, right = controller.ankle_targets(0.0)
    assert left == pytest.approx([-0.05, -depth]), "Left swing starts behind the hip."
    assert right == pytest.approx([0.05, -depth]), "Right stance starts in front of the hip."

    left, right = controller.ankle_targets(0.75)
    assert left[1] == pytest.approx(-depth), "Left leg is in stance during the second half."
    assert right[1] > -depth, "Right foot is lifted mid-swing."


def test_controller_tracks_targets_with_flat_feet(robot_model):
    """
    Test that joint targets put the ankles on their targets with level soles.
    """
    controller = ReferenceGaitController(robot_model, GAIT)
    state = RobotState(q=nominal_standing_state(robot_model).q, qd=np.zeros(9), t=0.25)
    targets = controller.joint_targets(state)

    q = state.q.copy()
    q[3:9] = targets
    kinematics = forward_kinematics(robot_model, q)
    for foot, target in zip((BodyId.LEFT_FOOT, BodyId.RIGHT_FOOT), controller.ankle_targets(0.25)):
        assert kinematics.feet[foot].ankle - q[0:2] == pytest.approx(target, abs=1e-9)
        assert kinematics.feet[foot].angle == pytest.approx(0.0, abs=1e-12), "Soles must stay level."


def test_controller_actions_are_unit_box(robot_model, rng):
    controller = ReferenceGaitController(robot_model, GAIT)
    for t in np.linspace(0.0, 2.0, 9):
        q = nominal_standing_state(robot_model).q
        q[2:] += rng.uniform(-0.5, 0.5, size=7)
        action = controller(RobotState(q=q, qd=rng.normal(size=9) * 5, t=t))
        assert action.shape == (6,)
        assert np.all(np.abs(action) <= 1.0), "Actions must stay within [-1, 1]."


def test_controller_rejects_negative_gains(robot_model):
    with pytest.raises(ParameterError):
        ReferenceGaitController(robot_model, GAIT, kp=-1.0)
