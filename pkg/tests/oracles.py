"""Brute-force reference implementations used only by the tests.

Everything here is deliberately independent of the production code paths:
forward kinematics is a straight homogeneous-matrix product built on
scipy rotations, Jacobians come from central finite differences of that
product, and orientation errors come from scipy's quaternion-based
rotation vector. Slow is fine.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation


def _joint_matrix(joint, value: float) -> np.ndarray:
    """Homogeneous transform of one joint at the given value."""
    fixed = np.eye(4)
    fixed[:3, :3] = joint.rotation
    fixed[:3, 3] = joint.translation
    motion = np.eye(4)
    if joint.kind == "revolute":
        motion[:3, :3] = Rotation.from_rotvec(value * joint.axis).as_matrix()
    else:
        motion[:3, 3] = value * joint.axis
    return fixed @ motion


def homogeneous_fk(chain, q) -> list:
    """All frame transforms as 4x4 matrices by straight-line product."""
    out = []
    t = np.eye(4)
    for joint, value in zip(chain.joints, q):
        t = t @ _joint_matrix(joint, value)
        out.append(t.copy())
    return out


def frame_position(chain, q, frame_index: int) -> np.ndarray:
    return homogeneous_fk(chain, q)[frame_index - 1][:3, 3]


def frame_rotation(chain, q, frame_index: int) -> np.ndarray:
    return homogeneous_fk(chain, q)[frame_index - 1][:3, :3]


def fd_jacobian(chain, q, frame_index: int, step: float = 1e-6) -> np.ndarray:
    """6 x n central-difference Jacobian of one frame.

    Linear rows from positional differences, angular rows from the rotation
    log of R(q+h) R(q-h)^T divided by the step span.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    jac = np.zeros((6, n))
    for k in range(n):
        dq = np.zeros(n)
        dq[k] = step
        t_plus = homogeneous_fk(chain, q + dq)[frame_index - 1]
        t_minus = homogeneous_fk(chain, q - dq)[frame_index - 1]
        jac[:3, k] = (t_plus[:3, 3] - t_minus[:3, 3]) / (2.0 * step)
        r_rel = t_plus[:3, :3] @ t_minus[:3, :3].T
        jac[3:, k] = Rotation.from_matrix(r_rel).as_rotvec() / (2.0 * step)
    return jac


def fd_rcm_jacobian(chain, q, lam: float, end_index: int, ins_index: int,
                    step: float = 1e-6) -> np.ndarray:
    """3 x (n+1) central-difference Jacobian of the interpolated RCM point."""
    q = np.asarray(q, dtype=float)
    n = q.shape[0]

    def point(qv, lv):
        frames = homogeneous_fk(chain, qv)
        p_end = frames[end_index - 1][:3, 3]
        p_ins = frames[ins_index - 1][:3, 3]
        return p_end + lv * (p_ins - p_end)

    jac = np.zeros((3, n + 1))
    for k in range(n):
        dq = np.zeros(n)
        dq[k] = step
        jac[:, k] = (point(q + dq, lam) - point(q - dq, lam)) / (2.0 * step)
    jac[:, n] = (point(q, lam + step) - point(q, lam - step)) / (2.0 * step)
    return jac


def quat_log_error(r_d: np.ndarray, r_c: np.ndarray) -> np.ndarray:
    """Axis-angle orientation error via the quaternion-backed rotation log."""
    return Rotation.from_matrix(r_d @ np.asarray(r_c).T).as_rotvec()


def closest_point_on_segment(a: np.ndarray, b: np.ndarray,
                             p: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    if ab @ ab == 0.0:
        return a.copy()
    s = np.clip((np.asarray(p) - a) @ ab / (ab @ ab), 0.0, 1.0)
    return a + s * ab


@dataclass
class OracleReport:
    case_id: str
    max_abs_error: float
    max_rel_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_rel_error < self.tol


def mp_identities(m: np.ndarray, m_pinv: np.ndarray,
                  tol: float = 1e-9, case_id: str = "") -> OracleReport:
    """Check the four Moore-Penrose identities."""
    m = np.asarray(m, dtype=float)
    mp = np.asarray(m_pinv, dtype=float)
    mmp = m @ mp
    mpm = mp @ m
    errors = [
        np.max(np.abs(m @ mpm - m)) if m.size else 0.0,
        np.max(np.abs(mp @ mmp - mp)) if mp.size else 0.0,
        np.max(np.abs(mmp - mmp.T)),
        np.max(np.abs(mpm - mpm.T)),
    ]
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
    max_abs = float(max(errors))
    return OracleReport(case_id=case_id, max_abs_error=max_abs,
                        max_rel_error=max_abs / scale, tol=tol)


def normalized_jacobian_error(analytic: np.ndarray, reference: np.ndarray,
                              mask: np.ndarray = None) -> float:
    """max |a - r| / (1 + |a|) over entries, optionally column-masked."""
    analytic = np.asarray(analytic, dtype=float)
    reference = np.asarray(reference, dtype=float)
    err = np.abs(analytic - reference) / (1.0 + np.abs(analytic))
    if mask is not None:
        err = err[:, mask]
    return float(np.max(err))
