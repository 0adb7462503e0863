import math

import numpy as np
import pytest

from biped import (
    DynamicsOptions,
    ExternalForce,
    RobotState,
    detect_fall,
    dynamics_step,
    forward_kinematics,
    generalized_acceleration,
    linear_momentum,
    mass_matrix,
    mechanical_energy,
    mirror_state,
    nominal_standing_state
)
from biped.dynamics import GRAVITY
from biped.kinematics import SEGMENTS
from exceptions import IntegrationError, ParameterError
from schemas import BodyId


def test_free_fall_without_contact(robot_model):
    """
    Test that an unsupported robot falls with qd_z = -k * g * dt and keeps its joints still.
    """
    dt = 1e-3
    state = nominal_standing_state(robot_model, rest_height=1.0)
    initial_q = state.q.copy()
    for _ in range(200):
        state = dynamics_step(robot_model, state, np.zeros(6), dt=dt)

    assert state.qd[1] == pytest.approx(-200 * GRAVITY * dt, rel=1e-12), "Expected free-fall velocity."
    assert np.allclose(state.q[2:], initial_q[2:], atol=1e-12), "Joints must not move in free fall."
    assert state.q[0] == pytest.approx(initial_q[0], abs=1e-12)
    assert state.t == pytest.approx(0.2)


def test_fixed_base_energy_is_conserved(robot_model):
    """
    Test that unpowered legs swinging from a fixed hip keep their energy within 1 % of the swing energy.
    """
    options = DynamicsOptions(fixed_base=True, enforce_joint_limits=False)
    rest = nominal_standing_state(robot_model, rest_height=1.0)
    q = rest.q.copy()
    q[3], q[6] = 0.15, -0.1
    state = RobotState(q=q, qd=np.zeros(9))

    rest_energy = mechanical_energy(robot_model, rest)
    initial_energy = mechanical_energy(robot_model, state)
    swing = initial_energy - rest_energy
    assert swing > 0, "Raised legs must store potential energy."

    worst = 0.0
    for _ in range(2000):
        state = dynamics_step(robot_model, state, np.zeros(6), dt=5e-4, options=options)
        worst = max(worst, abs(mechanical_energy(robot_model, state) - initial_energy))

    assert worst <= 0.01 * swing, f"Energy drifted by {worst:.3e} J against a swing energy of {swing:.3e} J."
    assert np.all(state.q[0:3] == rest.q[0:3]), "Fixed base must not move."


def test_momentum_is_conserved_without_gravity(robot_model, rng):
    """
    Test that internal joint torques cannot change the total linear momentum.
    """
    options = DynamicsOptions(gravity=0.0)
    state = nominal_standing_state(robot_model)
    qd = np.zeros(9)
    qd[0:2] = [0.3, 0.1]
    state = RobotState(q=state.q, qd=qd)
    initial = linear_momentum(robot_model, state)
    torques = rng.uniform(-2.0, 2.0, size=6)

    for _ in range(1000):
        state = dynamics_step(robot_model, state, torques, dt=1e-3, options=options)

    drift = np.linalg.norm(linear_momentum(robot_model, state) - initial)
    assert drift <= 1e-6 * np.linalg.norm(initial), f"Momentum drifted by {drift:.3e}."


def random_pose(model, rng):
    q = nominal_standing_state(model).q.copy()
    q[2] = rng.uniform(-0.3, 0.3)
    limits = np.array(model.joint_limits)
    q[3:9] = rng.uniform(limits[:, 0] * 0.8, limits[:, 1] * 0.8)
    return q


def test_point_jacobians_match_finite_differences(robot_model, rng):
    """
    Test every link's CoM Jacobian and both sole end points against central differences of the kinematics.
    """
    eps = 1e-6
    for _ in range(5):
        q = random_pose(robot_model, rng)
        kinematics = forward_kinematics(robot_model, q)
        points = [(body, lambda k, body=body: k.links[body].com) for body in SEGMENTS]
        for foot in (BodyId.LEFT_FOOT, BodyId.RIGHT_FOOT):
            points.append((foot, lambda k, foot=foot: k.feet[foot].heel))
            points.append((foot, lambda k, foot=foot: k.feet[foot].toe))

        for body, locate in points:
            analytic = kinematics.point_jacobian(body, locate(kinematics))
            numeric = np.zeros((2, 9))
            for column in range(9):
                step = np.zeros(9)
                step[column] = eps
                ahead = locate(forward_kinematics(robot_model, q + step))
                behind = locate(forward_kinematics(robot_model, q - step))
                numeric[:, column] = (ahead - behind) / (2 * eps)
            assert np.allclose(analytic, numeric, atol=1e-7), f"Jacobian of a point on {body.value} is off."


def test_velocity_forces_match_lagrangian(robot_model, rng):
    """
    Test h(q, qd) against dM/dt qd - 1/2 d(qd^T M qd)/dq built from finite differences of M(q).
    """
    eps = 1e-6
    options = DynamicsOptions(gravity=0.0, enforce_joint_limits=False)
    for _ in range(3):
        q = random_pose(robot_model, rng)
        qd = rng.uniform(-2.0, 2.0, size=9)
        derivatives = []
        for column in range(9):
            step = np.zeros(9)
            step[column] = eps
            derivatives.append((mass_matrix(robot_model, q + step) - mass_matrix(robot_model, q - step)) / (2 * eps))

        m_dot = sum(derivative * rate for derivative, rate in zip(derivatives, qd))
        expected = m_dot @ qd - 0.5 * np.array([qd @ derivative @ qd for derivative in derivatives])

        qdd, _ = generalized_acceleration(robot_model, RobotState(q=q, qd=qd), np.zeros(6), options=options)
        actual = -mass_matrix(robot_model, q) @ qdd
        assert np.allclose(actual, expected, atol=1e-5 * max(1.0, np.abs(expected).max())), (
            f"Velocity-product forces differ by {np.abs(actual - expected).max():.3e}."
        )


def test_energy_drift_shrinks_with_step(robot_model):
    """
    Test that halving the step roughly halves the worst energy error of a free swing.
    """
    options = DynamicsOptions(fixed_base=True, enforce_joint_limits=False)
    q = nominal_standing_state(robot_model, rest_height=1.0).q.copy()
    q[3], q[4], q[6] = 0.3, 0.2, -0.2

    drifts = []
    for dt in (1e-3, 5e-4):
        state = RobotState(q=q, qd=np.zeros(9))
        initial = mechanical_energy(robot_model, state)
        worst = 0.0
        for _ in range(int(round(0.5 / dt))):
            state = dynamics_step(robot_model, state, np.zeros(6), dt=dt, options=options)
            worst = max(worst, abs(mechanical_energy(robot_model, state) - initial))
        drifts.append(worst)

    assert drifts[1] < 0.75 * drifts[0], f"Energy error {drifts[1]:.3e} J did not shrink from {drifts[0]:.3e} J."


def test_weight_supported_at_every_link_stays_at_rest(robot_model):
    """
    Test static equilibrium: an upward force m_i * g at every link CoM cancels gravity.
    """
    state = nominal_standing_state(robot_model)
    q = state.q.copy()
    q[4], q[7] = 0.3, 0.5
    state = RobotState(q=q, qd=np.zeros(9))
    kinematics = forward_kinematics(robot_model, q)
    support = [
        ExternalForce(body, kinematics.links[body].com, np.array([0.0, link.mass * GRAVITY]))
        for body, link in robot_model.links()
    ]

    qdd, _ = generalized_acceleration(robot_model, state, np.zeros(6), support)
    assert np.allclose(qdd, 0.0, atol=1e-9), f"Expected no acceleration, got {qdd}."

    after = dynamics_step(robot_model, state, np.zeros(6), support, dt=1e-3)
    assert np.allclose(after.qd, 0.0, atol=1e-9)


def test_mirrored_state_gives_mirrored_acceleration(robot_model, rng):
    for _ in range(5):
        q = nominal_standing_state(robot_model).q
        q[2:] += rng.uniform(-0.3, 0.3, size=7)
        q[[4, 7]] = rng.uniform(0.1, 1.0, size=2)
        qd = rng.uniform(-1.0, 1.0, size=9)
        torques = rng.uniform(-5.0, 5.0, size=6)
        state = RobotState(q=q, qd=qd)

        qdd, _ = generalized_acceleration(robot_model, state, torques)
        mirrored, _ = generalized_acceleration(robot_model, mirror_state(state), torques[[3, 4, 5, 0, 1, 2]])
        expected = mirror_state(RobotState(q=qdd, qd=qdd)).q
        assert np.allclose(mirrored, expected, atol=1e-9), "Swapping legs must swap accelerations."


def test_detect_fall_thresholds(robot_model):
    nominal = robot_model.nominal_torso_com_height
    offset = robot_model.torso.com_offset

    def at_ratio(ratio, pitch=0.0):
        q = np.zeros(9)
        q[1] = ratio * nominal - offset
        q[2] = pitch
        return RobotState(q=q, qd=np.zeros(9))

    assert detect_fall(robot_model, at_ratio(0.59)), "59 % of standing height is a fall."
    assert not detect_fall(robot_model, at_ratio(0.61)), "61 % of standing height is not a fall."
    assert detect_fall(robot_model, at_ratio(1.0, pitch=1.1)), "Pitch beyond 1 rad is a fall."
    assert not detect_fall(robot_model, nominal_standing_state(robot_model))


def test_step_guards(robot_model):
    state = nominal_standing_state(robot_model)
    for dt in (0.0, -1e-3, 6e-3):
        with pytest.raises(ParameterError):
            dynamics_step(robot_model, state, np.zeros(6), dt=dt)
    with pytest.raises(ParameterError):
        dynamics_step(robot_model, state, np.zeros(5))
    with pytest.raises(ParameterError):
        RobotState(q=np.zeros(8), qd=np.zeros(9))

    broken = state.q.copy()
    broken[4] = math.nan
    with pytest.raises(IntegrationError):
        dynamics_step(robot_model, RobotState(q=broken, qd=np.zeros(9)), np.zeros(6))


def test_torques_are_clamped(robot_model):
    state = nominal_standing_state(robot_model, rest_height=1.0)
    limit = robot_model.torque_limit
    clamped = dynamics_step(robot_model, state, np.full(6, limit), dt=1e-3)
    excessive = dynamics_step(robot_model, state, np.full(6, 10 * limit), dt=1e-3)
    assert np.allclose(clamped.q, excessive.q) and np.allclose(clamped.qd, excessive.qd)


def test_joint_limit_clamps_position_and_velocity(robot_model):
    low, high = robot_model.joint_limits[1]
    q = nominal_standing_state(robot_model, rest_height=1.0).q
    q[4] = high - 0.01
    qd = np.zeros(9)
    qd[4] = 100.0
    after = dynamics_step(robot_model, RobotState(q=q, qd=qd), np.zeros(6), dt=1e-3)
    assert after.q[4] == high, "Knee must stop at its upper limit."
    assert after.qd[4] == 0.0, "Knee velocity must be zeroed at the limit."


def test_pure_moment_on_foot_turns_only_that_ankle(robot_model):
    options = DynamicsOptions(gravity=0.0, fixed_base=True)
    state = nominal_standing_state(robot_model)
    ankle = forward_kinematics(robot_model, state.q).feet[BodyId.LEFT_FOOT].ankle
    moment = ExternalForce(BodyId.LEFT_FOOT, ankle, np.zeros(2), moment=0.1)
    qdd, _ = generalized_acceleration(robot_model, state, np.zeros(6), [moment], options)
    foot_rate = qdd[3] - qdd[4] + qdd[5]
    assert foot_rate > 0, "A positive moment spins the left foot counter-clockwise."
    assert np.allclose(qdd[6:9], 0.0, atol=1e-12), "The right leg must not react."
