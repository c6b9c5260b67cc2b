"""Virtual plant: kinematic robot, synthetic trocar forces, scripted paths.

The trocar is modeled as a lateral spring acting at the point of the
instrument shaft closest to it, so the tissue pushes the shaft back toward
the port. Sensor output adds seeded Gaussian noise and an optional
first-order low-pass, standing in for the force-estimation pipeline of a
real base-mounted F/T sensor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kinematics, solver
from .admittance import LowPassFilter
from .errors import DegenerateShaftError
from .geometry import Pose
from .kinematics import FrameData, KinematicChain
from .rcm import D_MIN, AugmentedState, rcm_position


@dataclass
class Waveform:
    """Sinusoidal per-axis displacement."""

    amplitude: np.ndarray = field(default_factory=lambda: np.zeros(3))   # m
    frequency_hz: float = 0.25
    phase: float = 0.0

    def __post_init__(self):
        self.amplitude = np.asarray(self.amplitude, dtype=float).reshape(3)
        if self.frequency_hz < 0.0:
            raise ValueError("frequency must be non-negative")


@dataclass
class TrocarModel:
    p_trocar_0: np.ndarray = field(default_factory=lambda: np.zeros(3))
    k_t: float = 500.0                 # lateral stiffness (N/m)
    disturbance: Waveform = field(default_factory=Waveform)
    noise_sigma: float = 0.05          # force sensor noise std (N)

    def __post_init__(self):
        self.p_trocar_0 = np.asarray(self.p_trocar_0, dtype=float).reshape(3)
        if self.k_t < 0.0:
            raise ValueError("k_t must be non-negative")
        if self.noise_sigma < 0.0:
            raise ValueError("noise_sigma must be non-negative")


def trocar_position(model: TrocarModel, t: float) -> np.ndarray:
    """Trocar location at time t under the disturbance waveform."""
    if t < 0.0:
        raise ValueError("t must be non-negative")
    w = model.disturbance
    return model.p_trocar_0 + w.amplitude * np.sin(
        2.0 * np.pi * w.frequency_hz * t + w.phase)


def closest_point_on_shaft(p_end: np.ndarray, p_ins: np.ndarray,
                           point: np.ndarray) -> np.ndarray:
    """Closest point to `point` on the segment from p_end to p_ins."""
    a = np.asarray(p_end, dtype=float)
    ab = np.asarray(p_ins, dtype=float) - a
    denom = float(ab @ ab)
    if denom < D_MIN ** 2:
        raise DegenerateShaftError("shaft segment too short")
    s = float(np.clip((np.asarray(point, dtype=float) - a) @ ab / denom, 0.0, 1.0))
    return a + s * ab


def trocar_force(p_end: np.ndarray, p_ins: np.ndarray, trocar_now: np.ndarray,
                 k_t: float) -> np.ndarray:
    """Spring force pushing the shaft toward the trocar point."""
    c = closest_point_on_shaft(p_end, p_ins, trocar_now)
    return k_t * (np.asarray(trocar_now, dtype=float) - c)


def sense_force(f_true: np.ndarray, noise_sigma: float,
                rng: np.random.Generator) -> np.ndarray:
    """Per-component Gaussian measurement noise; deterministic under a seed."""
    f_true = np.asarray(f_true, dtype=float)
    if noise_sigma == 0.0:
        return f_true.copy()
    return f_true + rng.normal(0.0, noise_sigma, size=3)


def lateral_deviation(p_end: np.ndarray, p_ins: np.ndarray,
                      trocar_now: np.ndarray) -> float:
    """Distance from the trocar to the infinite shaft line."""
    a = np.asarray(p_end, dtype=float)
    d = np.asarray(p_ins, dtype=float) - a
    norm = np.linalg.norm(d)
    if norm < D_MIN:
        raise DegenerateShaftError("shaft segment too short")
    return float(np.linalg.norm(np.cross(d / norm, np.asarray(trocar_now) - a)))


@dataclass
class SimState:
    """Plant snapshot after a tick; frames are cached for the controller."""

    aug: AugmentedState
    t: float
    trocar_now: np.ndarray
    f_true: np.ndarray
    f_hat: np.ndarray
    frames: FrameData
    tick: int = 0


def _sense(chain: KinematicChain, model: TrocarModel, frames: FrameData, t: float,
           rng: np.random.Generator, force_filter: Optional[LowPassFilter]):
    p_end = frames.positions[chain.end_effector_index - 1]
    p_ins = frames.positions[chain.instrument_index - 1]
    trocar_now = trocar_position(model, t)
    f_true = trocar_force(p_end, p_ins, trocar_now, model.k_t)
    f_hat = sense_force(f_true, model.noise_sigma, rng)
    if force_filter is not None:
        f_hat = force_filter(f_hat)
    return trocar_now, f_true, f_hat


def init_sim(chain: KinematicChain, model: TrocarModel, q0: np.ndarray, lam0: float,
             rng: np.random.Generator,
             force_filter: Optional[LowPassFilter] = None) -> SimState:
    """Initial plant state at t = 0."""
    aug = AugmentedState(np.asarray(q0, dtype=float).copy(), lam0)
    frames = kinematics.frame_data(chain, aug.q)
    trocar_now, f_true, f_hat = _sense(chain, model, frames, 0.0, rng, force_filter)
    return SimState(aug=aug, t=0.0, trocar_now=trocar_now, f_true=f_true,
                    f_hat=f_hat, frames=frames, tick=0)


def step(chain: KinematicChain, model: TrocarModel, sim: SimState,
         qdot_aug: np.ndarray, cfg: solver.SolverConfig, rng: np.random.Generator,
         force_filter: Optional[LowPassFilter] = None,
         gripper_cmd: Optional[float] = None) -> SimState:
    """Integrate one control period and refresh the sensing channel."""
    aug = solver.integrate(sim.aug, qdot_aug, cfg, chain)
    if gripper_cmd is not None and chain.gripper_index is not None:
        aug.q[chain.gripper_index - 1] = gripper_cmd
    t = sim.t + cfg.dt
    frames = kinematics.frame_data(chain, aug.q)
    trocar_now, f_true, f_hat = _sense(chain, model, frames, t, rng, force_filter)
    return SimState(aug=aug, t=t, trocar_now=trocar_now, f_true=f_true,
                    f_hat=f_hat, frames=frames, tick=sim.tick + 1)


def auto_trocar(chain: KinematicChain, q0: np.ndarray, lam0: float) -> np.ndarray:
    """Place the trocar on the home-configuration RCM point."""
    frames = kinematics.frame_data(chain, q0)
    p_end = frames.positions[chain.end_effector_index - 1]
    p_ins = frames.positions[chain.instrument_index - 1]
    return rcm_position(p_end, p_ins, lam0)


# --- scripted reference paths -------------------------------------------

def _frame_in_plane(normal: np.ndarray):
    """Two unit vectors spanning the plane orthogonal to `normal`."""
    n = normal / np.linalg.norm(normal)
    seed = np.array([1.0, 0.0, 0.0])
    if abs(n @ seed) > 0.9:
        seed = np.array([0.0, 1.0, 0.0])
    e1 = seed - (seed @ n) * n
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(n, e1)


@dataclass
class CirclePath:
    """Constant-orientation circle traced at constant speed."""

    center: np.ndarray
    e1: np.ndarray           # unit, center -> start point
    e2: np.ndarray           # unit, orthogonal to e1 in the circle plane
    radius: float
    speed: float             # m/s along the arc
    rotation: np.ndarray

    def pose(self, t: float) -> Pose:
        ang = self.speed / self.radius * t
        p = self.center + self.radius * (np.cos(ang) * self.e1 + np.sin(ang) * self.e2)
        return Pose(self.rotation.copy(), p)


@dataclass
class LinePath:
    """Constant-orientation straight segment; holds the endpoint when done."""

    start: np.ndarray
    direction: np.ndarray    # unit
    length: float
    speed: float
    rotation: np.ndarray

    @property
    def duration(self) -> float:
        return self.length / self.speed

    def pose(self, t: float) -> Pose:
        s = min(self.speed * t, self.length)
        return Pose(self.rotation.copy(), self.start + s * self.direction)


@dataclass
class HoldPath:
    """Fixed desired pose."""

    target: Pose

    def pose(self, t: float) -> Pose:
        return self.target.copy()


def scripted_trajectory(kind: str, params: dict, t: float) -> Pose:
    """Desired instrument pose of a scripted path at time t."""
    path = make_path(kind, params)
    return path.pose(t)


def make_path(kind: str, params: dict):
    """Build a path object from plain parameters."""
    if kind == "circle":
        radius = float(params["radius"])
        speed = float(params["speed"])
        if radius <= 0.0 or speed <= 0.0:
            raise ValueError("circle needs positive radius and speed")
        return CirclePath(
            center=np.asarray(params["center"], dtype=float),
            e1=np.asarray(params["e1"], dtype=float),
            e2=np.asarray(params["e2"], dtype=float),
            radius=radius, speed=speed,
            rotation=np.asarray(params["rotation"], dtype=float))
    if kind == "line":
        length = float(params["length"])
        speed = float(params["speed"])
        if length <= 0.0 or speed <= 0.0:
            raise ValueError("line needs positive length and speed")
        return LinePath(
            start=np.asarray(params["start"], dtype=float),
            direction=np.asarray(params["direction"], dtype=float),
            length=length, speed=speed,
            rotation=np.asarray(params["rotation"], dtype=float))
    if kind == "hold":
        return HoldPath(target=params["target"])
    raise ValueError(f"unknown trajectory kind {kind!r}")


def path_for_scenario(chain: KinematicChain, q0: np.ndarray, scenario: str,
                      circle_params: dict, line_params: dict):
    """Scenario path anchored at the home tip, in the plane normal to the shaft."""
    frames = kinematics.frame_data(chain, q0)
    p_end = frames.positions[chain.end_effector_index - 1]
    x_ins = kinematics.instrument_pose(chain, q0, frames)
    shaft = x_ins.position - p_end
    e1, e2 = _frame_in_plane(shaft)
    if scenario == "circle":
        radius = float(circle_params.get("radius", 0.10))
        return CirclePath(center=x_ins.position - radius * e1, e1=e1, e2=e2,
                          radius=radius,
                          speed=float(circle_params.get("speed", 0.0018)),
                          rotation=x_ins.rotation.copy())
    if scenario == "line":
        return LinePath(start=x_ins.position.copy(), direction=e2,
                        length=float(line_params.get("length", 0.20)),
                        speed=float(line_params.get("speed", 0.0016)),
                        rotation=x_ins.rotation.copy())
    return HoldPath(target=x_ins)


@dataclass
class RunningMetrics:
    """Streaming aggregates over a run."""

    n: int = 0
    sum_dev: float = 0.0
    max_dev: float = 0.0
    sum_sq_track: float = 0.0
    max_track: float = 0.0
    sum_force_err: float = 0.0
    sum_sq_force_err: float = 0.0
    rank_deficient: int = 0
    max_residual_full_rank: float = 0.0
    limit_clamps: int = 0

    def update(self, dev: float, track_err: float, force_err: float,
               rank_ok: bool, residual: float):
        self.n += 1
        self.sum_dev += dev
        self.max_dev = max(self.max_dev, dev)
        self.sum_sq_track += track_err ** 2
        self.max_track = max(self.max_track, track_err)
        self.sum_force_err += force_err
        self.sum_sq_force_err += force_err ** 2
        if rank_ok:
            self.max_residual_full_rank = max(self.max_residual_full_rank, residual)
        else:
            self.rank_deficient += 1

    @property
    def mean_dev(self) -> float:
        return self.sum_dev / self.n if self.n else 0.0

    @property
    def rms_track(self) -> float:
        return float(np.sqrt(self.sum_sq_track / self.n)) if self.n else 0.0

    @property
    def mean_force_err(self) -> float:
        return self.sum_force_err / self.n if self.n else 0.0

    @property
    def rms_force_err(self) -> float:
        return float(np.sqrt(self.sum_sq_force_err / self.n)) if self.n else 0.0


LOG_COLUMNS = (
    ["t"] + [f"q{i}" for i in range(1, 12)] + ["lambda"]
    + ["p_ins_x", "p_ins_y", "p_ins_z"]
    + ["p_rcm_x", "p_rcm_y", "p_rcm_z"]
    + ["trocar_x", "trocar_y", "trocar_z"]
    + ["f_true_x", "f_true_y", "f_true_z"]
    + ["f_hat_x", "f_hat_y", "f_hat_z"]
    + ["lateral_deviation", "e_p_norm", "e_mu_norm"]
)
