"""Experiment runner: configuration, control loop, metrics, and logging.

One tick runs the full pipeline: scripted or teleoperated desired pose ->
resolved-rate twist -> admittance RCM velocity -> augmented constraint ->
pseudo-inverse resolution -> Euler plant step. Runs are deterministic in
(config, seed); the CSV log, a config echo, and a metrics summary are
written next to each other when an output directory is given.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import yaml

from . import kinematics, rcm, resolved_rate, simenv
from . import solver as solver_mod
from .admittance import AdmittanceConfig, LowPassFilter, admittance_velocity, \
    force_error, projector, shaft_direction
from .errors import ConfigError
from .geometry import Pose, quat_to_matrix
from .resolved_rate import RateConfig
from .simenv import LOG_COLUMNS, RunningMetrics, SimState, TrocarModel, Waveform
from .solver import SolverConfig
from .teleop import FrameRegistry, TeleopCommand, TeleopTracker, gripper_to_joint

DEFAULT_HOME_Q = (0.0, 0.6, 0.0, 1.3, 0.0, 1.2416, 0.0, 0.0, 0.0, 0.0, 0.0)

SCENARIOS = ("circle", "line", "disturbance_sweep", "free")
MODES = ("scripted", "teleop")


@dataclass
class ServerConfig:
    enabled: bool = False
    port: int = 8765
    state_rate_hz: float = 50.0
    realtime: bool = True   # pace the control loop against the wall clock


@dataclass
class ExperimentConfig:
    chain_path: Optional[str] = None          # None -> packaged default chain
    mode: str = "scripted"
    scenario: str = "circle"
    duration: float = 60.0
    seed: int = 0
    out: Optional[str] = None
    control_rate_hz: float = 200.0
    home_q: np.ndarray = field(default_factory=lambda: np.array(DEFAULT_HOME_Q))
    lambda0: float = 0.4
    solver: SolverConfig = field(default_factory=SolverConfig)
    admittance: AdmittanceConfig = field(default_factory=AdmittanceConfig)
    rate: RateConfig = field(default_factory=RateConfig)
    trocar_position: Optional[np.ndarray] = None   # None -> auto at home RCM
    k_t: float = 500.0
    noise_sigma: float = 0.05
    disturbance: Waveform = field(default_factory=Waveform)
    circle: dict = field(default_factory=lambda: {"radius": 0.10, "speed": 0.0018})
    line: dict = field(default_factory=lambda: {"length": 0.20, "speed": 0.0016})
    free_target_offset: np.ndarray = field(default_factory=lambda: np.zeros(3))
    motion_scale: float = 1.0
    base_t_haptic: Pose = field(default_factory=Pose.identity)
    server: ServerConfig = field(default_factory=ServerConfig)
    log_decimation: int = 1

    def __post_init__(self):
        self.home_q = np.asarray(self.home_q, dtype=float).reshape(-1)
        self.validate()

    def validate(self):
        if self.duration <= 0.0:
            raise ConfigError("duration must be positive")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario must be one of {SCENARIOS}")
        if self.control_rate_hz <= 0.0:
            raise ConfigError("control_rate_hz must be positive")
        if self.server.state_rate_hz > self.control_rate_hz:
            raise ConfigError("state_rate_hz cannot exceed the control rate")
        if not 0.0 < self.lambda0 < 1.0:
            raise ConfigError("lambda0 must lie in (0, 1)")
        if self.log_decimation < 1:
            raise ConfigError("log_decimation must be >= 1")

    @property
    def dt(self) -> float:
        return 1.0 / self.control_rate_hz

    def solver_config(self) -> SolverConfig:
        return replace(self.solver, dt=self.dt)

    def to_dict(self) -> dict:
        return {
            "chain": self.chain_path,
            "mode": self.mode,
            "scenario": self.scenario,
            "duration": self.duration,
            "seed": self.seed,
            "out": self.out,
            "control_rate_hz": self.control_rate_hz,
            "home_q": [float(v) for v in self.home_q],
            "lambda0": self.lambda0,
            "solver": {
                "svd_cutoff": self.solver.svd_cutoff,
                "damping": self.solver.damping,
                "lambda_ref": self.solver.lambda_ref,
                "null_gain": self.solver.null_gain,
            },
            "admittance": {
                "k_adm": self.admittance.k_adm,
                "f_desired": [float(v) for v in self.admittance.f_desired],
                "filter_cutoff_hz": self.admittance.filter_cutoff_hz,
            },
            "resolved_rate": {
                "v_max": self.rate.v_max, "v_min": self.rate.v_min,
                "w_max": self.rate.w_max, "w_min": self.rate.w_min,
                "gamma_p": self.rate.gamma_p, "gamma_mu": self.rate.gamma_mu,
                "eps_p": self.rate.eps_p, "eps_mu": self.rate.eps_mu,
                "literal_threshold": self.rate.literal_threshold,
            },
            "trocar": {
                "position": ("auto" if self.trocar_position is None
                             else [float(v) for v in self.trocar_position]),
                "k_t": self.k_t,
                "noise_sigma": self.noise_sigma,
                "disturbance": {
                    "amplitude": [float(v) for v in self.disturbance.amplitude],
                    "frequency_hz": self.disturbance.frequency_hz,
                    "phase": self.disturbance.phase,
                },
            },
            "trajectory": {
                "circle": dict(self.circle),
                "line": dict(self.line),
                "free_target_offset": [float(v) for v in self.free_target_offset],
            },
            "teleop": {
                "motion_scale": self.motion_scale,
                "base_t_haptic_xyz": [float(v) for v in self.base_t_haptic.position],
                "base_t_haptic_quat": [float(v) for v in self.base_t_haptic.quat()],
            },
            "server": {
                "enabled": self.server.enabled,
                "port": self.server.port,
                "state_rate_hz": self.server.state_rate_hz,
                "realtime": self.server.realtime,
            },
            "log": {"decimation": self.log_decimation},
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        doc = doc or {}
        try:
            solver_d = doc.get("solver", {}) or {}
            adm_d = doc.get("admittance", {}) or {}
            rate_d = doc.get("resolved_rate", {}) or {}
            trocar_d = doc.get("trocar", {}) or {}
            dist_d = trocar_d.get("disturbance", {}) or {}
            traj_d = doc.get("trajectory", {}) or {}
            tel_d = doc.get("teleop", {}) or {}
            srv_d = doc.get("server", {}) or {}
            log_d = doc.get("log", {}) or {}
            pos = trocar_d.get("position", "auto")
            trocar_position = None if (pos is None or pos == "auto") \
                else np.asarray(pos, dtype=float)
            cfg = cls(
                chain_path=doc.get("chain"),
                mode=doc.get("mode", "scripted"),
                scenario=doc.get("scenario", "circle"),
                duration=float(doc.get("duration", 60.0)),
                seed=int(doc.get("seed", 0)),
                out=doc.get("out"),
                control_rate_hz=float(doc.get("control_rate_hz", 200.0)),
                home_q=np.asarray(doc.get("home_q", DEFAULT_HOME_Q), dtype=float),
                lambda0=float(doc.get("lambda0", 0.4)),
                solver=SolverConfig(
                    svd_cutoff=float(solver_d.get("svd_cutoff", 1e-8)),
                    damping=float(solver_d.get("damping", 0.0)),
                    lambda_ref=float(solver_d.get("lambda_ref", 0.4)),
                    null_gain=float(solver_d.get("null_gain", 1.0)),
                ),
                admittance=AdmittanceConfig(
                    k_adm=float(adm_d.get("k_adm", 0.002)),
                    f_desired=np.asarray(adm_d.get("f_desired", [0, 0, 0]),
                                         dtype=float),
                    filter_cutoff_hz=adm_d.get("filter_cutoff_hz", 10.0),
                ),
                rate=RateConfig(
                    v_max=float(rate_d.get("v_max", 0.05)),
                    v_min=float(rate_d.get("v_min", 0.002)),
                    w_max=float(rate_d.get("w_max", 1.0)),
                    w_min=float(rate_d.get("w_min", 0.05)),
                    gamma_p=float(rate_d.get("gamma_p", 0.002)),
                    gamma_mu=float(rate_d.get("gamma_mu", 0.01)),
                    eps_p=float(rate_d.get("eps_p", 5.0)),
                    eps_mu=float(rate_d.get("eps_mu", 5.0)),
                    literal_threshold=bool(rate_d.get("literal_threshold", False)),
                ),
                trocar_position=trocar_position,
                k_t=float(trocar_d.get("k_t", 500.0)),
                noise_sigma=float(trocar_d.get("noise_sigma", 0.05)),
                disturbance=Waveform(
                    amplitude=np.asarray(dist_d.get("amplitude", [0, 0, 0]),
                                         dtype=float),
                    frequency_hz=float(dist_d.get("frequency_hz", 0.25)),
                    phase=float(dist_d.get("phase", 0.0)),
                ),
                circle=dict(traj_d.get("circle", {"radius": 0.10, "speed": 0.0018})),
                line=dict(traj_d.get("line", {"length": 0.20, "speed": 0.0016})),
                free_target_offset=np.asarray(
                    traj_d.get("free_target_offset", [0, 0, 0]), dtype=float),
                motion_scale=float(tel_d.get("motion_scale", 1.0)),
                base_t_haptic=Pose(
                    quat_to_matrix(np.asarray(
                        tel_d.get("base_t_haptic_quat", [0, 0, 0, 1]), dtype=float)),
                    np.asarray(tel_d.get("base_t_haptic_xyz", [0, 0, 0]),
                               dtype=float)),
                server=ServerConfig(
                    enabled=bool(srv_d.get("enabled", False)),
                    port=int(srv_d.get("port", 8765)),
                    state_rate_hz=float(srv_d.get("state_rate_hz", 50.0)),
                    realtime=bool(srv_d.get("realtime", True)),
                ),
                log_decimation=int(log_d.get("decimation", 1)),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad configuration: {exc}") from exc
        return cfg

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path, "r") as fh:
            doc = yaml.safe_load(fh)
        if doc is not None and not isinstance(doc, dict):
            raise ConfigError(f"config root must be a mapping, got {type(doc)}")
        return cls.from_dict(doc)


@dataclass
class MetricsSummary:
    mean_lateral_deviation: float
    max_lateral_deviation: float
    rms_tracking_error: float
    max_tracking_error: float
    mean_force_error: float
    rms_force_error: float
    lambda_terminal_dist: float
    constraint_residual_max: float
    rank_deficient_fraction: float
    tick_time_mean: float
    tick_time_p95: float
    tick_time_max: float
    n_ticks: int
    duration: float
    wall_time: float

    def to_dict(self) -> dict:
        return {k: (float(v) if not isinstance(v, int) else v)
                for k, v in self.__dict__.items()}


class ControlLoop:
    """Single-threaded control loop over the simulated plant.

    `command_source(t)` supplies the latest teleoperation command (or None)
    and `state_callback(snapshot)` receives a per-tick state dict; both are
    optional and used by the streaming server.
    """

    def __init__(self, config: ExperimentConfig,
                 command_source: Optional[Callable] = None,
                 state_callback: Optional[Callable] = None,
                 keep_log: bool = True):
        self.config = config
        self.command_source = command_source
        self.state_callback = state_callback
        self.keep_log = keep_log

        path = config.chain_path or kinematics.default_chain_path()
        self.chain = kinematics.load_chain(path)
        if config.home_q.shape[0] != self.chain.n_joints:
            raise ConfigError(
                f"home_q needs {self.chain.n_joints} values, got {config.home_q.shape[0]}")

        self.solver_cfg = config.solver_config()
        trocar0 = (config.trocar_position if config.trocar_position is not None
                   else simenv.auto_trocar(self.chain, config.home_q, config.lambda0))
        self.model = TrocarModel(p_trocar_0=trocar0, k_t=config.k_t,
                                 disturbance=config.disturbance,
                                 noise_sigma=config.noise_sigma)
        self.rng = np.random.default_rng(config.seed)
        self.force_filter = LowPassFilter(config.admittance.filter_cutoff_hz, self.dt)
        self.sim: SimState = simenv.init_sim(self.chain, self.model, config.home_q,
                                             config.lambda0, self.rng,
                                             self.force_filter)
        self.path = self._build_path()
        self.tracker = TeleopTracker(FrameRegistry(
            base_t_haptic=config.base_t_haptic, motion_scale=config.motion_scale))
        self.home_instrument = kinematics.instrument_pose(
            self.chain, config.home_q, self.sim.frames)
        self.metrics = RunningMetrics()
        self.tick_times: list = []
        self.rows: list = []
        self.n_ticks = max(1, round(config.duration * config.control_rate_hz))
        self._gripper_limits = self.chain.joints[self.chain.gripper_index - 1].limits \
            if self.chain.gripper_index else None

    @property
    def dt(self) -> float:
        return self.config.dt

    def _build_path(self):
        cfg = self.config
        if cfg.scenario in ("circle", "line"):
            return simenv.path_for_scenario(self.chain, cfg.home_q, cfg.scenario,
                                            cfg.circle, cfg.line)
        hold = simenv.path_for_scenario(self.chain, cfg.home_q, "hold", {}, {})
        if cfg.scenario == "free" and np.any(cfg.free_target_offset != 0.0):
            target = Pose(hold.target.rotation,
                          hold.target.position + cfg.free_target_offset)
            return simenv.HoldPath(target=target)
        return hold

    def _desired_pose(self, x_current: Pose) -> Pose:
        if self.config.mode == "teleop":
            cmd = self.command_source(self.sim.t) if self.command_source else None
            desired = self.tracker.update(cmd, x_current)
            return desired if desired is not None else self.home_instrument
        return self.path.pose(self.sim.t)

    def tick(self):
        """One control period: sense -> command -> resolve -> integrate."""
        started = time.perf_counter()
        sim = self.sim
        frames = sim.frames
        x_c = kinematics.instrument_pose(self.chain, sim.aug.q, frames)
        x_d = self._desired_pose(x_c)

        e_p = resolved_rate.position_error(x_d.position, x_c.position)
        e_mu = resolved_rate.orientation_error(x_d.rotation, x_c.rotation)
        xi = resolved_rate.desired_twist(e_p, e_mu, self.config.rate)

        ctx = rcm.build_context(self.chain, sim.aug.q, sim.aug.lam, frames)
        omega = projector(shaft_direction(ctx.d_ins))
        f_e = force_error(sim.f_hat, self.config.admittance.f_desired)
        pdot_rcm = admittance_velocity(self.config.admittance, omega, f_e)
        xi_aug = rcm.augmented_twist(xi, pdot_rcm)
        eta = solver_mod.null_space_gradient(sim.aug.lam, self.solver_cfg,
                                             size=ctx.j_total.shape[1])
        qdot_aug, info = solver_mod.resolve(ctx.j_total, xi_aug, eta,
                                            self.solver_cfg, return_info=True)

        deviation = simenv.lateral_deviation(ctx.p_end, ctx.p_ins, sim.trocar_now)
        e_p_norm = float(np.linalg.norm(e_p))
        e_mu_norm = float(np.linalg.norm(e_mu))
        self.metrics.update(deviation, e_p_norm, float(np.linalg.norm(f_e)),
                            info.rank == ctx.j_total.shape[0], info.residual_inf)
        self.tick_times.append(time.perf_counter() - started)

        if self.keep_log and sim.tick % self.config.log_decimation == 0:
            self.rows.append(
                [sim.t] + list(sim.aug.q) + [sim.aug.lam]
                + list(ctx.p_ins) + list(ctx.p_rcm) + list(sim.trocar_now)
                + list(sim.f_true) + list(sim.f_hat)
                + [deviation, e_p_norm, e_mu_norm])
        if self.state_callback is not None:
            self.state_callback(self._snapshot(ctx, x_d, e_p_norm, deviation))

        gripper_cmd = None
        if self.config.mode == "teleop" and self._gripper_limits is not None:
            gripper_cmd = gripper_to_joint(self.tracker.gripper, self._gripper_limits)
        self.sim = simenv.step(self.chain, self.model, sim, qdot_aug,
                               self.solver_cfg, self.rng, self.force_filter,
                               gripper_cmd)

    def _snapshot(self, ctx, x_d: Pose, e_p_norm: float, deviation: float) -> dict:
        sim = self.sim
        x_ins = kinematics.instrument_pose(self.chain, sim.aug.q, sim.frames)
        return {
            "t": sim.t,
            "q": [float(v) for v in sim.aug.q],
            "lambda": sim.aug.lam,
            "pose": {"position": [float(v) for v in x_ins.position],
                     "orientation": [float(v) for v in x_ins.quat()]},
            "p_rcm": [float(v) for v in ctx.p_rcm],
            "trocar": [float(v) for v in sim.trocar_now],
            "f_hat": [float(v) for v in sim.f_hat],
            "lateral_deviation": deviation,
            "clutch": self.tracker.clutch.engaged,
            "frames": [[float(v) for v in p] for p in sim.frames.positions],
            "e_p_norm": e_p_norm,
            "p_des": [float(v) for v in x_d.position],
        }

    def run(self) -> MetricsSummary:
        start = time.perf_counter()
        for _ in range(self.n_ticks):
            self.tick()
        wall = time.perf_counter() - start
        return self.summary(wall)

    def summary(self, wall: float) -> MetricsSummary:
        times = np.asarray(self.tick_times) if self.tick_times else np.zeros(1)
        m = self.metrics
        return MetricsSummary(
            mean_lateral_deviation=m.mean_dev,
            max_lateral_deviation=m.max_dev,
            rms_tracking_error=m.rms_track,
            max_tracking_error=m.max_track,
            mean_force_error=m.mean_force_err,
            rms_force_error=m.rms_force_err,
            lambda_terminal_dist=abs(self.sim.aug.lam - self.solver_cfg.lambda_ref),
            constraint_residual_max=m.max_residual_full_rank,
            rank_deficient_fraction=m.rank_deficient / max(m.n, 1),
            tick_time_mean=float(times.mean()),
            tick_time_p95=float(np.percentile(times, 95)),
            tick_time_max=float(times.max()),
            n_ticks=m.n,
            duration=self.config.duration,
            wall_time=wall,
        )


def format_csv(rows) -> str:
    """Render log rows with shortest round-trip float formatting."""
    lines = [",".join(LOG_COLUMNS)]
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


@dataclass
class RunResult:
    summary: MetricsSummary
    rows: list
    out_dir: Optional[Path] = None

    @property
    def csv_path(self) -> Optional[Path]:
        return self.out_dir / "log.csv" if self.out_dir else None


def run(config: ExperimentConfig) -> RunResult:
    """Execute one experiment; write log, config echo, and summary if out is set."""
    loop = ControlLoop(config)
    summary = loop.run()
    result = RunResult(summary=summary, rows=loop.rows)
    if config.out:
        out_dir = Path(config.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "log.csv").write_text(format_csv(loop.rows))
        (out_dir / "config.yaml").write_text(
            yaml.safe_dump(config.to_dict(), sort_keys=False))
        (out_dir / "summary.yaml").write_text(
            yaml.safe_dump(summary.to_dict(), sort_keys=False))
        result.out_dir = out_dir
    return result


@dataclass
class ComparePair:
    amplitude_scale: float
    on: MetricsSummary
    off: MetricsSummary

    @property
    def deviation_ratio(self) -> float:
        """off/on mean lateral deviation; large means admittance helps."""
        return self.off.mean_lateral_deviation / max(self.on.mean_lateral_deviation,
                                                     1e-300)

    @property
    def force_ratio(self) -> float:
        return self.off.mean_force_error / max(self.on.mean_force_error, 1e-300)


def compare(config: ExperimentConfig, amplitude_scales=None) -> list:
    """Paired runs with and without admittance (k_adm = 0), same seed.

    With amplitude_scales, the disturbance amplitude is scaled per pair.
    """
    scales = [1.0] if amplitude_scales is None else list(amplitude_scales)
    pairs = []
    for scale in scales:
        dist = Waveform(amplitude=config.disturbance.amplitude * scale,
                        frequency_hz=config.disturbance.frequency_hz,
                        phase=config.disturbance.phase)
        cfg_on = replace(config, disturbance=dist, out=None)
        cfg_off = replace(config, disturbance=dist, out=None,
                          admittance=AdmittanceConfig(
                              k_adm=0.0,
                              f_desired=config.admittance.f_desired,
                              filter_cutoff_hz=config.admittance.filter_cutoff_hz))
        pairs.append(ComparePair(
            amplitude_scale=scale,
            on=ControlLoop(cfg_on, keep_log=False).run(),
            off=ControlLoop(cfg_off, keep_log=False).run(),
        ))
    if config.out:
        out_dir = Path(config.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        doc = [{
            "amplitude_scale": p.amplitude_scale,
            "deviation_ratio": p.deviation_ratio,
            "force_ratio": p.force_ratio,
            "on": p.on.to_dict(),
            "off": p.off.to_dict(),
        } for p in pairs]
        (out_dir / "compare.yaml").write_text(yaml.safe_dump(doc, sort_keys=False))
        (out_dir / "config.yaml").write_text(
            yaml.safe_dump(config.to_dict(), sort_keys=False))
    return pairs
