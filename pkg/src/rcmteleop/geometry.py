"""Rigid-transform and rotation helpers shared across the library.

Rotations are plain 3x3 numpy arrays, positions are length-3 arrays in
meters. Quaternions use [x, y, z, w] ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ORTHONORMAL_TOL = 1e-9


def skew(v: np.ndarray) -> np.ndarray:
    """3x3 skew-symmetric matrix of a 3-vector (hat operator)."""
    x, y, z = v
    return np.array([
        [0.0, -z, y],
        [z, 0.0, -x],
        [-y, x, 0.0],
    ])


def vex(m: np.ndarray) -> np.ndarray:
    """Inverse of skew() for (possibly approximately) antisymmetric matrices."""
    return 0.5 * np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])


def rotation_about_axis(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation about a unit axis."""
    k = skew(axis)
    return np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)


def rotation_from_axis_angle(rotvec: np.ndarray) -> np.ndarray:
    """Rotation matrix from an axis-angle 3-vector (norm = angle in rad)."""
    rotvec = np.asarray(rotvec, dtype=float)
    angle = float(np.linalg.norm(rotvec))
    if angle < 1e-12:
        return np.eye(3)
    return rotation_about_axis(rotvec / angle, angle)


def rot_x(a: float) -> np.ndarray:
    return rotation_about_axis(np.array([1.0, 0.0, 0.0]), a)


def rot_y(a: float) -> np.ndarray:
    return rotation_about_axis(np.array([0.0, 1.0, 0.0]), a)


def rot_z(a: float) -> np.ndarray:
    return rotation_about_axis(np.array([0.0, 0.0, 1.0]), a)


def orthonormality_error(rotation: np.ndarray) -> float:
    """max |R^T R - I| entry; 0 for a perfect rotation."""
    return float(np.max(np.abs(rotation.T @ rotation - np.eye(3))))


def is_rotation(rotation: np.ndarray, tol: float = ORTHONORMAL_TOL) -> bool:
    rotation = np.asarray(rotation)
    if rotation.shape != (3, 3) or not np.all(np.isfinite(rotation)):
        return False
    if orthonormality_error(rotation) > tol:
        return False
    return np.linalg.det(rotation) > 0.0


def orthonormalize(rotation: np.ndarray) -> np.ndarray:
    """Nearest proper rotation in the Frobenius sense (via SVD)."""
    u, _, vt = np.linalg.svd(rotation)
    r = u @ vt
    if np.linalg.det(r) < 0.0:
        u[:, -1] *= -1.0
        r = u @ vt
    return r


def quat_to_matrix(q: np.ndarray) -> np.ndarray:
    """Rotation matrix from an [x, y, z, w] quaternion (normalized here)."""
    x, y, z, w = np.asarray(q, dtype=float) / np.linalg.norm(q)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def matrix_to_quat(r: np.ndarray) -> np.ndarray:
    """[x, y, z, w] quaternion of a rotation matrix, w >= 0."""
    t = np.trace(r)
    if t > 0.0:
        s = np.sqrt(t + 1.0) * 2.0
        q = np.array([(r[2, 1] - r[1, 2]) / s, (r[0, 2] - r[2, 0]) / s,
                      (r[1, 0] - r[0, 1]) / s, 0.25 * s])
    elif r[0, 0] > r[1, 1] and r[0, 0] > r[2, 2]:
        s = np.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2]) * 2.0
        q = np.array([0.25 * s, (r[0, 1] + r[1, 0]) / s,
                      (r[0, 2] + r[2, 0]) / s, (r[2, 1] - r[1, 2]) / s])
    elif r[1, 1] > r[2, 2]:
        s = np.sqrt(1.0 + r[1, 1] - r[0, 0] - r[2, 2]) * 2.0
        q = np.array([(r[0, 1] + r[1, 0]) / s, 0.25 * s,
                      (r[1, 2] + r[2, 1]) / s, (r[0, 2] - r[2, 0]) / s])
    else:
        s = np.sqrt(1.0 + r[2, 2] - r[0, 0] - r[1, 1]) * 2.0
        q = np.array([(r[0, 2] + r[2, 0]) / s, (r[1, 2] + r[2, 1]) / s,
                      0.25 * s, (r[1, 0] - r[0, 1]) / s])
    if q[3] < 0.0:
        q = -q
    return q / np.linalg.norm(q)


def rotation_angle(r: np.ndarray) -> float:
    """Rotation angle in [0, pi] of a rotation matrix."""
    c = np.clip((np.trace(r) - 1.0) / 2.0, -1.0, 1.0)
    return float(np.arccos(c))


@dataclass
class Pose:
    """Rigid transform: 3x3 rotation plus position in meters."""

    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    position: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.rotation = np.asarray(self.rotation, dtype=float)
        self.position = np.asarray(self.position, dtype=float).reshape(3)

    @classmethod
    def identity(cls) -> "Pose":
        return cls()

    @classmethod
    def from_quat(cls, position: np.ndarray, quat_xyzw: np.ndarray) -> "Pose":
        return cls(quat_to_matrix(quat_xyzw), np.asarray(position, dtype=float))

    def validate(self, tol: float = ORTHONORMAL_TOL) -> "Pose":
        if not np.all(np.isfinite(self.position)):
            raise ValueError("pose position has non-finite entries")
        if not is_rotation(self.rotation, tol):
            raise ValueError("pose rotation is not a proper rotation matrix")
        return self

    def compose(self, other: "Pose") -> "Pose":
        """self * other (apply other in self's frame)."""
        return Pose(self.rotation @ other.rotation,
                    self.rotation @ other.position + self.position)

    def __matmul__(self, other: "Pose") -> "Pose":
        return self.compose(other)

    def inverse(self) -> "Pose":
        rt = self.rotation.T
        return Pose(rt, -rt @ self.position)

    def transform_point(self, p: np.ndarray) -> np.ndarray:
        return self.rotation @ np.asarray(p, dtype=float) + self.position

    def renormalized(self, drift_tol: float = ORTHONORMAL_TOL) -> "Pose":
        """Re-orthonormalize the rotation if accumulated drift exceeds tol."""
        if orthonormality_error(self.rotation) > drift_tol:
            return Pose(orthonormalize(self.rotation), self.position.copy())
        return self

    def quat(self) -> np.ndarray:
        return matrix_to_quat(self.rotation)

    def copy(self) -> "Pose":
        return Pose(self.rotation.copy(), self.position.copy())

    def as_matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.position
        return m


@dataclass
class Twist:
    """Spatial velocity: linear (m/s) stacked over angular (rad/s)."""

    linear: np.ndarray = field(default_factory=lambda: np.zeros(3))
    angular: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.linear = np.asarray(self.linear, dtype=float).reshape(3)
        self.angular = np.asarray(self.angular, dtype=float).reshape(3)
        if not (np.all(np.isfinite(self.linear)) and np.all(np.isfinite(self.angular))):
            raise ValueError("twist has non-finite entries")

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.linear, self.angular])

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "Twist":
        v = np.asarray(v, dtype=float).reshape(6)
        return cls(v[:3], v[3:])

    @classmethod
    def zero(cls) -> "Twist":
        return cls()
