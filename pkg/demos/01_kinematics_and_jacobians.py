# Forward kinematics and geometric Jacobians of the default chain:
# a 7-DoF arm carrying a 4-DoF wristed instrument (11 joints total).
# The instrument tip frame is frame 11, the arm flange is frame 7, and
# the 0.40 m shaft between them is what the trocar constrains.

import numpy as np

from rcmteleop import (end_effector_position, forward_kinematics,
                       full_jacobian_ins, geometric_jacobian, instrument_pose,
                       load_default_chain)

np.set_printoptions(precision=4, suppress=True)

chain = load_default_chain()
print(f"chain '{chain.name}': {chain.n_joints} joints, "
      f"end-effector frame {chain.end_effector_index}, "
      f"instrument frame {chain.instrument_index}")

home = np.array([0.0, 0.6, 0.0, 1.3, 0.0, 1.2416, 0.0, 0.0, 0.0, 0.0, 0.0])
poses = forward_kinematics(chain, home)
for k in (0, 3, 6, 8, 10):
    print(f"frame {k + 1:2d} at {poses[k].position}")

print("\nflange:", end_effector_position(chain, home))
tip = instrument_pose(chain, home)
print("instrument tip:", tip.position)
print("shaft vector:", tip.position - end_effector_position(chain, home))

# The Jacobian maps joint velocities to the tip twist. Column 11 (gripper)
# is zero: opening the jaws is a pass-through channel, not task motion.
jac = full_jacobian_ins(chain, home)
print(f"\nJ_ins shape {jac.shape}, gripper column max |.| = "
      f"{np.max(np.abs(jac[:, 10])):.1e}")

# Cross-check one column against a finite difference of the tip position.
k = 3   # elbow
h = 1e-6
dq = np.zeros(11)
dq[k] = h
fd = (instrument_pose(chain, home + dq).position
      - instrument_pose(chain, home - dq).position) / (2 * h)
print(f"elbow column, analytic {jac[:3, k]} vs finite diff {fd}")

# Joints distal to a frame cannot move it.
j4 = geometric_jacobian(chain, home, frame_index=4)
print(f"\nframe-4 Jacobian, columns 5..11 all zero: "
      f"{np.allclose(j4[:, 4:], 0.0)}")
