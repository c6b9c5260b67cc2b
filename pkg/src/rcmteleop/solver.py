"""Pseudo-inverse redundancy resolution with null-space lambda regulation.

Solves the stacked constraint J_total qdot_aug = xi_aug for the augmented
velocity and adds a null-space descent term that pulls lambda toward a
reference value. The descent uses the negative cost gradient: inserting
the raw gradient would drive lambda away from the reference.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import FaultError
from .kinematics import KinematicChain, clamp_to_limits
from .rcm import LAMBDA_MAX, LAMBDA_MIN, AugmentedState

log = logging.getLogger(__name__)


@dataclass
class SolverConfig:
    svd_cutoff: float = 1e-8     # relative singular value threshold
    damping: float = 0.0         # damped least squares factor, 0 = plain pinv
    dt: float = 0.005            # control period (s)
    lambda_ref: float = 0.4      # null-space target for lambda
    null_gain: float = 1.0       # step size on the null-space descent

    def __post_init__(self):
        if self.svd_cutoff <= 0.0:
            raise ValueError("svd_cutoff must be positive")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if not 0.0 < self.lambda_ref < 1.0:
            raise ValueError("lambda_ref must lie in (0, 1)")
        if self.damping < 0.0:
            raise ValueError("damping must be non-negative")


@dataclass
class ResolveInfo:
    """Diagnostics from one resolve() call."""

    rank: int
    residual_inf: float
    singular_values: np.ndarray = field(repr=False, default=None)


def pseudo_inverse(m: np.ndarray, cfg: SolverConfig = SolverConfig()) -> np.ndarray:
    """SVD pseudo-inverse with relative cutoff and optional damping."""
    m = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((m.shape[1], m.shape[0]))
    keep = s > cfg.svd_cutoff * s[0]
    inv_s = np.zeros_like(s)
    if cfg.damping > 0.0:
        inv_s[keep] = s[keep] / (s[keep] ** 2 + cfg.damping ** 2)
    else:
        inv_s[keep] = 1.0 / s[keep]
    return (vt.T * inv_s) @ u.T


def matrix_rank(m: np.ndarray, cfg: SolverConfig = SolverConfig()) -> int:
    s = np.linalg.svd(np.asarray(m, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > cfg.svd_cutoff * s[0]))


def null_space_gradient(lam: float, cfg: SolverConfig, size: int = 12) -> np.ndarray:
    """Gradient of 1/2 (lambda - lambda_ref)^2 in augmented coordinates."""
    eta = np.zeros(size)
    eta[-1] = lam - cfg.lambda_ref
    return eta


def resolve(j_total: np.ndarray, xi_aug: np.ndarray, eta: np.ndarray,
            cfg: SolverConfig, return_info: bool = False):
    """Particular pseudo-inverse solution minus the projected cost gradient.

    Returns qdot_aug, or (qdot_aug, ResolveInfo) when return_info is set.
    Rank deficiency falls back to the least-squares solution with a warning.
    """
    j_total = np.asarray(j_total, dtype=float)
    xi_aug = np.asarray(xi_aug, dtype=float).reshape(-1)
    eta = np.asarray(eta, dtype=float).reshape(-1)
    rows, cols = j_total.shape
    if xi_aug.shape[0] != rows or eta.shape[0] != cols:
        raise ValueError(
            f"shape mismatch: J {j_total.shape}, xi {xi_aug.shape}, eta {eta.shape}")
    j_pinv = pseudo_inverse(j_total, cfg)
    qdot = j_pinv @ xi_aug - cfg.null_gain * (eta - j_pinv @ (j_total @ eta))
    if not return_info:
        return qdot
    rank = matrix_rank(j_total, cfg)
    if rank < rows:
        log.warning("constraint rank %d < %d, least-squares fallback", rank, rows)
    residual = float(np.max(np.abs(j_total @ qdot - xi_aug)))
    return qdot, ResolveInfo(rank=rank, residual_inf=residual)


def integrate(state: AugmentedState, qdot_aug: np.ndarray, cfg: SolverConfig,
              chain: KinematicChain = None) -> AugmentedState:
    """Explicit Euler step on (q, lambda); lambda and joint limits clamped.

    A non-finite velocity raises FaultError and leaves the state untouched.
    """
    qdot_aug = np.asarray(qdot_aug, dtype=float).reshape(-1)
    if qdot_aug.shape[0] != state.q.shape[0] + 1:
        raise ValueError(f"expected {state.q.shape[0] + 1} velocities")
    if not np.all(np.isfinite(qdot_aug)):
        raise FaultError("non-finite commanded velocity")
    q = state.q + qdot_aug[:-1] * cfg.dt
    lam = float(np.clip(state.lam + qdot_aug[-1] * cfg.dt, LAMBDA_MIN, LAMBDA_MAX))
    if chain is not None:
        q, _ = clamp_to_limits(chain, q)
    return AugmentedState(q, lam)
