"""Serial-chain forward kinematics and geometric Jacobians.

The chain convention: frame k is obtained from frame k-1 by the joint's
fixed transform followed by the joint motion, so for a revolute joint the
world axis passes through the origin of frame k. Jacobian column k of a
target frame m is [o_k x (p_m - p_k); o_k] for revolute joints with
k <= m, [o_k; 0] for prismatic, and zero otherwise. The gripper joint is
a pass-through command channel and always contributes a zero column.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import yaml

from .geometry import Pose, is_rotation, rotation_about_axis, rotation_from_axis_angle

log = logging.getLogger(__name__)

REVOLUTE = "revolute"
PRISMATIC = "prismatic"

AXIS_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class JointDescriptor:
    """One joint: fixed transform from the parent frame plus a motion axis."""

    kind: str
    axis: np.ndarray
    translation: np.ndarray
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    name: str = ""
    limits: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "axis", np.asarray(self.axis, dtype=float).reshape(3))
        object.__setattr__(self, "translation",
                           np.asarray(self.translation, dtype=float).reshape(3))
        object.__setattr__(self, "rotation", np.asarray(self.rotation, dtype=float))
        if self.kind not in (REVOLUTE, PRISMATIC):
            raise ValueError(f"unknown joint kind {self.kind!r}")
        if abs(np.linalg.norm(self.axis) - 1.0) > AXIS_UNIT_TOL:
            raise ValueError(f"joint axis must be unit length, got {self.axis}")
        if not is_rotation(self.rotation):
            raise ValueError("joint fixed rotation is not a proper rotation")
        if self.limits is not None:
            lo, hi = self.limits
            if not lo < hi:
                raise ValueError(f"joint limits must satisfy lo < hi, got {self.limits}")


@dataclass(frozen=True)
class KinematicChain:
    """Ordered serial chain. Frame indices are 1-based as in the model."""

    joints: tuple
    end_effector_index: int = 0   # 0 means "last frame"
    instrument_index: int = 0
    gripper_index: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "joints", tuple(self.joints))
        n = len(self.joints)
        if n == 0:
            raise ValueError("chain has no joints")
        if self.end_effector_index == 0:
            object.__setattr__(self, "end_effector_index", n)
        if self.instrument_index == 0:
            object.__setattr__(self, "instrument_index", n)
        for idx in (self.end_effector_index, self.instrument_index):
            if not 1 <= idx <= n:
                raise ValueError(f"frame index {idx} out of range 1..{n}")
        if self.gripper_index is not None and not 1 <= self.gripper_index <= n:
            raise ValueError("gripper_index out of range")

    @property
    def n_joints(self) -> int:
        return len(self.joints)

    def require_surgical(self) -> "KinematicChain":
        """Validate the 7-DoF arm + 4-DoF instrument layout (11 joints)."""
        if self.n_joints != 11:
            raise ValueError(f"surgical chain needs 11 joints, got {self.n_joints}")
        if not self.end_effector_index < self.instrument_index:
            raise ValueError("end_effector_index must precede instrument_index")
        return self

    def limits_lo_hi(self):
        """(lo, hi) arrays with +-inf where a joint is unlimited."""
        lo = np.full(self.n_joints, -np.inf)
        hi = np.full(self.n_joints, np.inf)
        for i, j in enumerate(self.joints):
            if j.limits is not None:
                lo[i], hi[i] = j.limits
        return lo, hi


@dataclass
class FrameData:
    """Per-frame world rotation, origin, and joint axis, as stacked arrays."""

    rotations: np.ndarray   # (n, 3, 3)
    positions: np.ndarray   # (n, 3)
    axes: np.ndarray        # (n, 3) world-frame joint axes


def _check_q(chain: KinematicChain, q: Sequence[float]) -> np.ndarray:
    q = np.asarray(q, dtype=float).reshape(-1)
    if q.shape[0] != chain.n_joints:
        raise ValueError(f"expected {chain.n_joints} joint values, got {q.shape[0]}")
    if not np.all(np.isfinite(q)):
        raise ValueError("joint vector has non-finite entries")
    return q


def frame_data(chain: KinematicChain, q: Sequence[float]) -> FrameData:
    """Sweep the chain once, returning all frames and world joint axes."""
    q = _check_q(chain, q)
    n = chain.n_joints
    rotations = np.empty((n, 3, 3))
    positions = np.empty((n, 3))
    axes = np.empty((n, 3))
    r = np.eye(3)
    p = np.zeros(3)
    for k in range(n):
        joint = chain.joints[k]
        p = r @ joint.translation + p
        r = r @ joint.rotation
        a = r @ joint.axis
        if joint.kind == REVOLUTE:
            r = r @ rotation_about_axis(joint.axis, q[k])
        else:
            p = p + a * q[k]
        rotations[k] = r
        positions[k] = p
        axes[k] = a
    return FrameData(rotations, positions, axes)


def forward_kinematics(chain: KinematicChain, q: Sequence[float]) -> list:
    """Poses of every frame 1..n in base coordinates."""
    fd = frame_data(chain, q)
    return [Pose(fd.rotations[k].copy(), fd.positions[k].copy())
            for k in range(chain.n_joints)]


def instrument_pose(chain: KinematicChain, q: Sequence[float],
                    frames: Optional[FrameData] = None) -> Pose:
    """Pose of the instrument frame (wrist center)."""
    fd = frames if frames is not None else frame_data(chain, q)
    k = chain.instrument_index - 1
    return Pose(fd.rotations[k].copy(), fd.positions[k].copy())


def end_effector_position(chain: KinematicChain, q: Sequence[float],
                          frames: Optional[FrameData] = None) -> np.ndarray:
    """Position of the manipulator end-effector frame."""
    fd = frames if frames is not None else frame_data(chain, q)
    return fd.positions[chain.end_effector_index - 1].copy()


def geometric_jacobian(chain: KinematicChain, q: Sequence[float], frame_index: int,
                       frames: Optional[FrameData] = None) -> np.ndarray:
    """6 x n Jacobian of the given frame, linear rows above angular rows."""
    if not 1 <= frame_index <= chain.n_joints:
        raise ValueError(f"frame_index {frame_index} out of range 1..{chain.n_joints}")
    fd = frames if frames is not None else frame_data(chain, q)
    target = fd.positions[frame_index - 1]
    jac = np.zeros((6, chain.n_joints))
    for k in range(frame_index):
        if chain.gripper_index is not None and k + 1 == chain.gripper_index:
            continue
        a = fd.axes[k]
        if chain.joints[k].kind == REVOLUTE:
            jac[:3, k] = np.cross(a, target - fd.positions[k])
            jac[3:, k] = a
        else:
            jac[:3, k] = a
    return jac


def position_jacobian_end(chain: KinematicChain, q: Sequence[float],
                          frames: Optional[FrameData] = None) -> np.ndarray:
    """3 x n linear Jacobian of the end-effector frame."""
    return geometric_jacobian(chain, q, chain.end_effector_index, frames)[:3]


def full_jacobian_ins(chain: KinematicChain, q: Sequence[float],
                      frames: Optional[FrameData] = None) -> np.ndarray:
    """6 x n Jacobian of the instrument frame."""
    return geometric_jacobian(chain, q, chain.instrument_index, frames)


def clamp_to_limits(chain: KinematicChain, q: np.ndarray):
    """Clamp q into the chain's joint limits; returns (q_clamped, clamped_mask)."""
    lo, hi = chain.limits_lo_hi()
    clamped = np.clip(q, lo, hi)
    mask = clamped != q
    if np.any(mask):
        names = [chain.joints[i].name or f"joint{i + 1}" for i in np.nonzero(mask)[0]]
        log.warning("joint limit clamp on %s", ", ".join(names))
    return clamped, mask


def load_chain(path) -> KinematicChain:
    """Load a surgical chain description (YAML: per-joint kind/axis/transform)."""
    with open(path, "r") as fh:
        doc = yaml.safe_load(fh)
    joints = []
    for entry in doc["joints"]:
        joints.append(JointDescriptor(
            kind=entry["kind"],
            axis=np.asarray(entry["axis"], dtype=float),
            translation=np.asarray(entry.get("translation", [0, 0, 0]), dtype=float),
            rotation=rotation_from_axis_angle(
                np.asarray(entry.get("rotation_axis_angle", [0, 0, 0]), dtype=float)),
            name=entry.get("name", ""),
            limits=tuple(entry["limits"]) if entry.get("limits") is not None else None,
        ))
    chain = KinematicChain(
        joints=tuple(joints),
        end_effector_index=int(doc["end_effector_index"]),
        instrument_index=int(doc["instrument_index"]),
        gripper_index=int(doc["gripper_index"]) if doc.get("gripper_index") else None,
        name=doc.get("name", Path(path).stem),
    )
    return chain.require_surgical()


def default_chain_path() -> Path:
    return Path(__file__).parent / "data" / "default_chain.yaml"


def load_default_chain() -> KinematicChain:
    return load_chain(default_chain_path())
