"""Leader-follower mapping from stylus motion to desired instrument pose.

On clutch engage, the current stylus and instrument poses are stored as
anchors together with a registration transform between their frames.
Subsequent stylus motion relative to its anchor is carried over to the
instrument anchor frame by a similarity transform, so the instrument
reproduces the operator's hand motion in its own frame. Releasing the
clutch freezes the desired pose until re-engage.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import NotEngagedError
from .geometry import Pose


@dataclass
class FrameRegistry:
    """Fixed registration of the haptic base frame in the robot base frame."""

    base_t_haptic: Pose = field(default_factory=Pose.identity)
    motion_scale: float = 1.0

    def __post_init__(self):
        self.base_t_haptic.validate()
        if not (np.isfinite(self.motion_scale) and self.motion_scale > 0.0):
            raise ValueError("motion_scale must be finite and positive")


@dataclass
class ClutchState:
    engaged: bool = False
    stylus_anchor: Optional[Pose] = None
    instrument_anchor: Optional[Pose] = None
    registration: Optional[Pose] = None
    motion_scale: float = 1.0


def engage(stylus_pose: Pose, instrument_pose: Pose, reg: FrameRegistry) -> ClutchState:
    """Anchor the two poses and precompute the registration transform."""
    stylus_pose.validate(1e-6)
    instrument_pose.validate(1e-6)
    registration = (instrument_pose.inverse() @ reg.base_t_haptic @ stylus_pose)
    return ClutchState(
        engaged=True,
        stylus_anchor=stylus_pose.copy(),
        instrument_anchor=instrument_pose.copy(),
        registration=registration.renormalized(),
        motion_scale=reg.motion_scale,
    )


def _require_engaged(clutch: ClutchState):
    if not clutch.engaged:
        raise NotEngagedError("clutch is not engaged")


def relative_stylus_motion(clutch: ClutchState, stylus_current: Pose) -> Pose:
    """Stylus displacement from the anchor, expressed in the anchor frame."""
    _require_engaged(clutch)
    return (clutch.stylus_anchor.inverse() @ stylus_current).renormalized()


def map_to_instrument_frame(clutch: ClutchState, rel: Pose) -> Pose:
    """Carry the relative stylus motion into the instrument anchor frame.

    Conjugation uses the rotation part of the registration only: a full
    rigid conjugation would add a lever-arm translation (I - R_out) t_reg
    on every stylus rotation, with t_reg the stylus-to-instrument offset.
    Rotation-only conjugation keeps the rotation angle and (at scale 1)
    the translation norm invariant; the translation is additionally
    multiplied by the motion scale.
    """
    _require_engaged(clutch)
    r_reg = Pose(clutch.registration.rotation.copy(), np.zeros(3))
    mapped = (r_reg @ rel @ r_reg.inverse()).renormalized()
    if clutch.motion_scale != 1.0:
        mapped = Pose(mapped.rotation, clutch.motion_scale * mapped.position)
    return mapped


def desired_pose(clutch: ClutchState, mapped: Pose) -> Pose:
    """Desired instrument pose in the robot base frame."""
    _require_engaged(clutch)
    return (clutch.instrument_anchor @ mapped).renormalized()


def disengage(clutch: ClutchState) -> ClutchState:
    """Drop the anchors; the controller holds the last desired pose."""
    return replace(clutch, engaged=False)


def track(clutch: ClutchState, stylus_current: Pose) -> Pose:
    """Full mapping pipeline for one stylus sample."""
    rel = relative_stylus_motion(clutch, stylus_current)
    return desired_pose(clutch, map_to_instrument_frame(clutch, rel))


@dataclass
class TeleopCommand:
    """One inbound leader-device sample."""

    stylus: Pose
    clutch: bool
    gripper: float = 0.0
    timestamp: float = 0.0


class TeleopTracker:
    """Clutch-aware consumer of leader commands for the control loop.

    Keeps the last desired pose between engagements (hold-position) and
    re-anchors on every engage edge so the pose error at that tick is zero.
    """

    def __init__(self, registry: FrameRegistry):
        self.registry = registry
        self.clutch = ClutchState(motion_scale=registry.motion_scale)
        self.desired: Optional[Pose] = None
        self.gripper: float = 0.0

    def update(self, command: Optional[TeleopCommand],
               instrument_now: Pose) -> Optional[Pose]:
        """Process the latest command; returns the desired pose or None (hold)."""
        if command is None:
            return self.desired
        self.gripper = float(np.clip(command.gripper, 0.0, 1.0))
        if command.clutch:
            if not self.clutch.engaged:
                self.clutch = engage(command.stylus, instrument_now, self.registry)
            self.desired = track(self.clutch, command.stylus)
        elif self.clutch.engaged:
            self.clutch = disengage(self.clutch)
        return self.desired


def gripper_to_joint(value: float, limits: tuple) -> float:
    """Map the [0, 1] gripper channel linearly onto the joint's limit range."""
    lo, hi = limits
    return lo + float(np.clip(value, 0.0, 1.0)) * (hi - lo)
