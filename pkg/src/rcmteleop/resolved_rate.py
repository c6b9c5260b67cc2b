"""Resolved motion-rate law: pose error to bounded desired twist.

Speed magnitude follows a piecewise schedule: capped at the maximum beyond
the error knee gamma*eps, and interpolated between the minimum and maximum
inside it. The angle-axis orientation error carries small-angle and
near-pi branches to avoid the 0/0 and axis-ambiguity degeneracies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Twist, is_rotation, vex

SMALL_ANGLE = 1e-6
NEAR_PI = 1e-4
ROTATION_INPUT_TOL = 1e-8


@dataclass
class RateConfig:
    v_max: float = 0.05      # m/s
    v_min: float = 0.002
    w_max: float = 1.0       # rad/s
    w_min: float = 0.05
    gamma_p: float = 0.002   # position error knee (m)
    gamma_mu: float = 0.01   # orientation error knee (rad)
    eps_p: float = 5.0       # knee multiplier, > 1
    eps_mu: float = 5.0
    zero_tol_p: float = 1e-7
    zero_tol_mu: float = 1e-7
    literal_threshold: bool = False   # use the eps/gamma branch predicate as printed

    def __post_init__(self):
        if not (self.v_max >= self.v_min > 0.0):
            raise ValueError("need v_max >= v_min > 0")
        if not (self.w_max >= self.w_min > 0.0):
            raise ValueError("need w_max >= w_min > 0")
        if self.eps_p <= 1.0 or self.eps_mu <= 1.0:
            raise ValueError("eps parameters must exceed 1")


def position_error(p_d: np.ndarray, p_c: np.ndarray) -> np.ndarray:
    """Desired minus current instrument position."""
    return np.asarray(p_d, dtype=float) - np.asarray(p_c, dtype=float)


def orientation_error(r_d: np.ndarray, r_c: np.ndarray) -> np.ndarray:
    """Angle-axis error vector of R_e = R_d R_c^T."""
    r_d = np.asarray(r_d, dtype=float)
    r_c = np.asarray(r_c, dtype=float)
    if not (is_rotation(r_d, ROTATION_INPUT_TOL) and is_rotation(r_c, ROTATION_INPUT_TOL)):
        raise ValueError("orientation_error needs orthonormal rotations")
    r_e = r_d @ r_c.T
    cos_theta = np.clip((np.trace(r_e) - 1.0) / 2.0, -1.0, 1.0)
    theta = float(np.arccos(cos_theta))
    w = vex(r_e - r_e.T)          # equals (R32-R23, R13-R31, R21-R12)
    if theta < SMALL_ANGLE:
        return 0.5 * w
    if theta > np.pi - NEAR_PI:
        # sin(theta) ~ 0: recover the axis from the rank-one part of (R_e + I)/2
        b = 0.5 * (r_e + np.eye(3))
        j = int(np.argmax(np.diag(b)))
        axis = b[:, j] / np.linalg.norm(b[:, j])
        if axis @ w < 0.0:
            axis = -axis
        return theta * axis
    return (theta / (2.0 * np.sin(theta))) * w


def speed_schedule(e_norm: float, kind: str, cfg: RateConfig) -> float:
    """Speed magnitude for a given error norm; kind is 'linear' or 'angular'."""
    if e_norm < 0.0:
        raise ValueError("error norm must be non-negative")
    if kind == "linear":
        lo, hi, gamma, eps = cfg.v_min, cfg.v_max, cfg.gamma_p, cfg.eps_p
    elif kind == "angular":
        lo, hi, gamma, eps = cfg.w_min, cfg.w_max, cfg.gamma_mu, cfg.eps_mu
    else:
        raise ValueError(f"unknown schedule kind {kind!r}")
    threshold = eps / gamma if cfg.literal_threshold else gamma * eps
    if e_norm > threshold:
        return hi
    beta = (e_norm - gamma) / (gamma * (eps - 1.0))
    return lo + (hi - lo) * float(np.clip(beta, 0.0, 1.0))


def desired_twist(e_p: np.ndarray, e_mu: np.ndarray, cfg: RateConfig) -> Twist:
    """Bounded twist pointing along the pose error."""
    e_p = np.asarray(e_p, dtype=float)
    e_mu = np.asarray(e_mu, dtype=float)
    p_norm = float(np.linalg.norm(e_p))
    mu_norm = float(np.linalg.norm(e_mu))
    v = np.zeros(3)
    w = np.zeros(3)
    if p_norm > cfg.zero_tol_p:
        v = speed_schedule(p_norm, "linear", cfg) * (e_p / p_norm)
    if mu_norm > cfg.zero_tol_mu:
        w = speed_schedule(mu_norm, "angular", cfg) * (e_mu / mu_norm)
    return Twist(v, w)
