"""Teleoperation simulator for minimally invasive surgery with an adaptive
remote-center-of-motion constraint resolved through an augmented Jacobian."""

from .admittance import (AdmittanceConfig, ForceEstimate, LowPassFilter,
                         admittance_velocity, force_error, projected_gain,
                         projector, shaft_direction)
from .errors import ConfigError, DegenerateShaftError, FaultError, NotEngagedError
from .geometry import Pose, Twist
from .harness import (ControlLoop, ExperimentConfig, MetricsSummary, compare,
                      run)
from .kinematics import (JointDescriptor, KinematicChain, end_effector_position,
                         forward_kinematics, full_jacobian_ins,
                         geometric_jacobian, instrument_pose, load_chain,
                         load_default_chain, position_jacobian_end)
from .rcm import (AugmentedState, RcmContext, augmented_twist, build_context,
                  rcm_jacobian, rcm_position, shaft_vector, total_jacobian)
from .resolved_rate import (RateConfig, desired_twist, orientation_error,
                            position_error, speed_schedule)
from .simenv import (SimState, TrocarModel, Waveform, lateral_deviation,
                     scripted_trajectory, sense_force, trocar_force,
                     trocar_position)
from .solver import (SolverConfig, integrate, null_space_gradient,
                     pseudo_inverse, resolve)
from .teleop import (ClutchState, FrameRegistry, TeleopCommand, TeleopTracker,
                     desired_pose, disengage, engage, map_to_instrument_frame,
                     relative_stylus_motion)

__version__ = "0.1.0"
