"""Remote-center-of-motion point, its Jacobian, and the augmented constraint.

The RCM point is the interpolation p_end + lambda (p_ins - p_end) along the
instrument shaft. Stacking the 6-DoF instrument twist constraint over the
3-DoF RCM velocity constraint against the joint vector extended by lambda
gives a 9x12 system for the 11-joint chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kinematics
from .errors import DegenerateShaftError
from .geometry import Twist
from .kinematics import FrameData, KinematicChain

D_MIN = 1e-3            # shaft shorter than this has no usable direction (m)
LAMBDA_MIN = 0.05       # clamp range keeping lambda strictly inside (0, 1)
LAMBDA_MAX = 0.95


@dataclass
class AugmentedState:
    """Joint vector plus the RCM interpolation variable lambda."""

    q: np.ndarray
    lam: float

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float).reshape(-1)
        self.lam = float(self.lam)

    def copy(self) -> "AugmentedState":
        return AugmentedState(self.q.copy(), self.lam)


def rcm_position(p_end: np.ndarray, p_ins: np.ndarray, lam: float) -> np.ndarray:
    """Interpolated RCM point p_end + lam (p_ins - p_end)."""
    p_end = np.asarray(p_end, dtype=float)
    p_ins = np.asarray(p_ins, dtype=float)
    if not (np.all(np.isfinite(p_end)) and np.all(np.isfinite(p_ins))
            and np.isfinite(lam)):
        raise ValueError("non-finite input to rcm_position")
    return p_end + lam * (p_ins - p_end)


def shaft_vector(p_end: np.ndarray, p_ins: np.ndarray) -> np.ndarray:
    """Vector from the end-effector to the instrument wrist center."""
    d = np.asarray(p_ins, dtype=float) - np.asarray(p_end, dtype=float)
    if not np.all(np.isfinite(d)):
        raise ValueError("non-finite input to shaft_vector")
    if np.linalg.norm(d) < D_MIN:
        raise DegenerateShaftError(
            f"shaft length {np.linalg.norm(d):.2e} m below {D_MIN} m")
    return d


def rcm_jacobian(j_end: np.ndarray, j_ins_linear: np.ndarray,
                 d_ins: np.ndarray, lam: float) -> np.ndarray:
    """3 x (n+1) RCM Jacobian: interpolated linear block with d_ins last."""
    j_end = np.asarray(j_end, dtype=float)
    j_ins_linear = np.asarray(j_ins_linear, dtype=float)
    if j_end.shape != j_ins_linear.shape or j_end.shape[0] != 3:
        raise ValueError(f"bad Jacobian shapes {j_end.shape} vs {j_ins_linear.shape}")
    left = j_end + lam * (j_ins_linear - j_end)
    return np.hstack([left, np.asarray(d_ins, dtype=float).reshape(3, 1)])


def total_jacobian(j_ins: np.ndarray, j_rcm: np.ndarray) -> np.ndarray:
    """Stack [J_ins | 0] over J_rcm into the (6+3) x (n+1) constraint matrix."""
    j_ins = np.asarray(j_ins, dtype=float)
    j_rcm = np.asarray(j_rcm, dtype=float)
    if j_ins.shape[0] != 6 or j_rcm.shape[0] != 3:
        raise ValueError(f"bad row counts {j_ins.shape} / {j_rcm.shape}")
    if j_rcm.shape[1] != j_ins.shape[1] + 1:
        raise ValueError("J_rcm must have one more column than J_ins")
    top = np.hstack([j_ins, np.zeros((6, 1))])
    return np.vstack([top, j_rcm])


def augmented_twist(xi_ins: Twist, p_rcm_dot: np.ndarray) -> np.ndarray:
    """Stack the commanded instrument twist over the commanded RCM velocity."""
    p_rcm_dot = np.asarray(p_rcm_dot, dtype=float).reshape(3)
    if not np.all(np.isfinite(p_rcm_dot)):
        raise ValueError("non-finite RCM velocity")
    return np.concatenate([xi_ins.as_vector(), p_rcm_dot])


@dataclass
class RcmContext:
    """Per-tick snapshot of the constraint geometry."""

    p_end: np.ndarray
    p_ins: np.ndarray
    p_rcm: np.ndarray
    d_ins: np.ndarray
    j_end: np.ndarray        # 3 x n
    j_ins: np.ndarray        # 6 x n
    j_rcm: np.ndarray        # 3 x (n+1)
    j_total: np.ndarray      # 9 x (n+1)
    xi_aug: Optional[np.ndarray] = field(default=None)


def build_context(chain: KinematicChain, q: np.ndarray, lam: float,
                  frames: Optional[FrameData] = None) -> RcmContext:
    """Compute the full constraint snapshot for the current configuration."""
    fd = frames if frames is not None else kinematics.frame_data(chain, q)
    p_end = fd.positions[chain.end_effector_index - 1]
    p_ins = fd.positions[chain.instrument_index - 1]
    d_ins = shaft_vector(p_end, p_ins)
    j_end = kinematics.position_jacobian_end(chain, q, fd)
    j_ins = kinematics.full_jacobian_ins(chain, q, fd)
    j_rcm = rcm_jacobian(j_end, j_ins[:3], d_ins, lam)
    return RcmContext(
        p_end=p_end.copy(),
        p_ins=p_ins.copy(),
        p_rcm=rcm_position(p_end, p_ins, lam),
        d_ins=d_ins,
        j_end=j_end,
        j_ins=j_ins,
        j_rcm=j_rcm,
        j_total=total_jacobian(j_ins, j_rcm),
    )
