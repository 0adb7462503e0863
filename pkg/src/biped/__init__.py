from biped.model import JOINT_NAMES, LinkParams, RobotModel, build_model, total_mass
from biped.kinematics import (
    FEET,
    SEGMENTS,
    FootPose,
    Kinematics,
    LinkPose,
    com,
    foot_contact_samples,
    foot_lateral_position,
    forward_kinematics,
    leg_ik
)
from biped.dynamics import (
    DynamicsOptions,
    ExternalForce,
    RobotState,
    com_velocity,
    detect_fall,
    dynamics_step,
    generalized_acceleration,
    linear_momentum,
    mass_matrix,
    mechanical_energy,
    mirror_state,
    nominal_standing_state
)
from biped.gait import GaitReference, ReferenceGaitController, cycloid_reference
