# Leader-follower mapping with clutching. The stylus anchors on engage;
# its relative motion is carried into the instrument frame by the rotation
# part of the registration, so translations keep their magnitude and
# rotations keep their angle. Releasing the clutch freezes the target.

import numpy as np

from rcmteleop import (FrameRegistry, Pose, TeleopCommand, TeleopTracker,
                       engage, map_to_instrument_frame, relative_stylus_motion)
from rcmteleop.geometry import rot_z

np.set_printoptions(precision=4, suppress=True)

# Haptic base rotated 90 degrees about z relative to the robot base, desk
# offset half a meter away: stylus +x should become instrument +y.
registry = FrameRegistry(
    base_t_haptic=Pose(rot_z(np.pi / 2), np.array([0.5, 0.2, 0.0])))

stylus_anchor = Pose(np.eye(3), np.array([0.05, 0.0, 0.1]))
instrument_anchor = Pose(np.eye(3), np.array([0.6, 0.0, 0.0]))
clutch = engage(stylus_anchor, instrument_anchor, registry)

stylus_now = Pose(np.eye(3), stylus_anchor.position + [0.01, 0.0, 0.0])
rel = relative_stylus_motion(clutch, stylus_now)
mapped = map_to_instrument_frame(clutch, rel)
print("stylus moved +1 cm x in the haptic frame")
print("mapped instrument displacement:", mapped.position)
print("norm preserved:",
      np.isclose(np.linalg.norm(mapped.position), 0.01))

# The tracker drives the control loop: engage, drag, release, re-engage.
tracker = TeleopTracker(registry)
instrument = instrument_anchor
samples = [
    (TeleopCommand(stylus=stylus_anchor, clutch=True), "engage"),
    (TeleopCommand(stylus=stylus_now, clutch=True), "drag +1 cm"),
    (TeleopCommand(stylus=stylus_now, clutch=False), "release"),
    (TeleopCommand(stylus=Pose(np.eye(3), [9.9, 9.9, 9.9]), clutch=False),
     "wave around unclutched"),
    (TeleopCommand(stylus=Pose(np.eye(3), [9.9, 9.9, 9.9]), clutch=True),
     "re-engage far away"),
]
for cmd, label in samples:
    desired = tracker.update(cmd, instrument)
    print(f"{label:26s} -> desired {desired.position}")
