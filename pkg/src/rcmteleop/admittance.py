"""Projected admittance law commanding the RCM-point velocity from force.

The trocar interaction force estimate is projected onto the plane normal
to the instrument shaft, so the commanded RCM velocity never pushes along
the shaft axis: pdot_rcm = k_adm (I - n n^T) (f_hat - f_desired).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateShaftError
from .rcm import D_MIN

UNIT_TOL = 1e-6


@dataclass
class AdmittanceConfig:
    k_adm: float = 0.002                    # m/(s N)
    f_desired: np.ndarray = field(default_factory=lambda: np.zeros(3))
    filter_cutoff_hz: Optional[float] = 10.0   # None or 0 disables the filter

    def __post_init__(self):
        self.f_desired = np.asarray(self.f_desired, dtype=float).reshape(3)
        if self.k_adm < 0.0:
            raise ValueError("k_adm must be non-negative")


@dataclass
class ForceEstimate:
    f_hat: np.ndarray
    timestamp: float

    def __post_init__(self):
        self.f_hat = np.asarray(self.f_hat, dtype=float).reshape(3)
        if not (np.all(np.isfinite(self.f_hat)) and np.isfinite(self.timestamp)):
            raise ValueError("non-finite force estimate")


def shaft_direction(d_ins: np.ndarray) -> np.ndarray:
    """Unit vector along the instrument shaft."""
    d_ins = np.asarray(d_ins, dtype=float)
    norm = np.linalg.norm(d_ins)
    if norm < D_MIN:
        raise DegenerateShaftError(f"shaft length {norm:.2e} m below {D_MIN} m")
    return d_ins / norm


def projector(n_d: np.ndarray) -> np.ndarray:
    """Rank-one projector n n^T onto the shaft axis."""
    n_d = np.asarray(n_d, dtype=float).reshape(3)
    if abs(np.linalg.norm(n_d) - 1.0) > UNIT_TOL:
        raise ValueError(f"projector needs a unit vector, |n| = {np.linalg.norm(n_d)}")
    return np.outer(n_d, n_d)


def force_error(f_hat: np.ndarray, f_desired: np.ndarray) -> np.ndarray:
    """Force tracking error at the RCM."""
    f_hat = np.asarray(f_hat, dtype=float)
    f_desired = np.asarray(f_desired, dtype=float)
    if not (np.all(np.isfinite(f_hat)) and np.all(np.isfinite(f_desired))):
        raise ValueError("non-finite force input")
    return f_hat - f_desired


def admittance_velocity(cfg: AdmittanceConfig, omega: np.ndarray,
                        f_e: np.ndarray) -> np.ndarray:
    """Commanded RCM velocity, orthogonal to the shaft axis."""
    omega = np.asarray(omega, dtype=float)
    return cfg.k_adm * ((np.asarray(f_e, dtype=float)) - omega @ f_e)


def projected_gain(cfg: AdmittanceConfig, omega: np.ndarray) -> np.ndarray:
    """Gain matrix k_adm (I - Omega); eigenvalues {k_adm, k_adm, 0}."""
    return cfg.k_adm * (np.eye(3) - np.asarray(omega, dtype=float))


class LowPassFilter:
    """First-order low-pass on vector samples at a fixed rate."""

    def __init__(self, cutoff_hz: Optional[float], dt: float):
        self.enabled = bool(cutoff_hz) and cutoff_hz > 0.0
        self.alpha = 1.0 - np.exp(-2.0 * np.pi * cutoff_hz * dt) if self.enabled else 1.0
        self.state: Optional[np.ndarray] = None

    def reset(self):
        self.state = None

    def __call__(self, sample: np.ndarray) -> np.ndarray:
        sample = np.asarray(sample, dtype=float)
        if not self.enabled:
            return sample
        if self.state is None:
            self.state = sample.copy()
        else:
            self.state = self.state + self.alpha * (sample - self.state)
        return self.state.copy()
