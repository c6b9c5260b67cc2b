"""Command-line entry point: run, compare, and serve subcommands.

Exit codes: 0 success, 1 configuration error, 2 runtime fault.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import harness
from .errors import ConfigError, FaultError
from .harness import ExperimentConfig


def _load_config(args) -> ExperimentConfig:
    if args.config:
        config = ExperimentConfig.from_file(args.config)
    else:
        config = ExperimentConfig.from_dict({})
    doc = config.to_dict()
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.out is not None:
        doc["out"] = args.out
    if args.scenario is not None:
        doc["scenario"] = args.scenario
    if args.duration is not None:
        doc["duration"] = args.duration
    if getattr(args, "port", None) is not None:
        doc["server"]["port"] = args.port
    if getattr(args, "serve_cmd", False):
        doc["server"]["enabled"] = True
        if doc.get("scenario") == "free":
            doc["mode"] = "teleop"
    return ExperimentConfig.from_dict(doc)


def _cmd_run(args) -> int:
    config = _load_config(args)
    result = harness.run(config)
    s = result.summary
    print(f"ticks: {s.n_ticks}  wall: {s.wall_time:.2f}s "
          f"(p95 tick {s.tick_time_p95 * 1e3:.2f} ms)")
    print(f"lateral deviation: mean {s.mean_lateral_deviation * 1e3:.3f} mm, "
          f"max {s.max_lateral_deviation * 1e3:.3f} mm")
    print(f"tip tracking error: rms {s.rms_tracking_error * 1e3:.3f} mm, "
          f"max {s.max_tracking_error * 1e3:.3f} mm")
    print(f"force error: mean {s.mean_force_error:.3f} N, "
          f"rms {s.rms_force_error:.3f} N")
    print(f"|lambda - lambda_ref| at end: {s.lambda_terminal_dist:.4f}")
    if result.out_dir:
        print(f"wrote {result.out_dir}/log.csv, config.yaml, summary.yaml")
    return 0


def _cmd_compare(args) -> int:
    config = _load_config(args)
    scales = [float(s) for s in args.amplitudes.split(",")] if args.amplitudes else None
    pairs = harness.compare(config, scales)
    for p in pairs:
        print(f"amplitude x{p.amplitude_scale:g}: "
              f"mean deviation on {p.on.mean_lateral_deviation * 1e3:.3f} mm / "
              f"off {p.off.mean_lateral_deviation * 1e3:.3f} mm "
              f"(ratio {p.deviation_ratio:.2f}), force ratio {p.force_ratio:.2f}")
    return 0


def _cmd_serve(args) -> int:
    from .server import serve  # imported lazily; pulls in websockets

    args.serve_cmd = True
    config = _load_config(args)
    print(f"serving ws://0.0.0.0:{config.server.port} "
          f"(scenario {config.scenario}, mode {config.mode}, "
          f"duration {config.duration}s)")
    serve(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rcmteleop",
        description="Teleoperation simulator with an adaptive RCM constraint")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment configuration file (YAML)")
    common.add_argument("--seed", type=int, help="override RNG seed")
    common.add_argument("--out", help="output directory for logs and summaries")
    common.add_argument("--scenario",
                        choices=["circle", "line", "disturbance_sweep", "free"])
    common.add_argument("--duration", type=float, help="run length in seconds")

    p_run = sub.add_parser("run", parents=[common],
                           help="execute one scripted or teleop experiment")
    p_run.set_defaults(func=_cmd_run)

    p_cmp = sub.add_parser("compare", parents=[common],
                           help="paired runs with admittance on vs. off")
    p_cmp.add_argument("--amplitudes",
                       help="comma-separated disturbance amplitude scales")
    p_cmp.set_defaults(func=_cmd_compare)

    p_srv = sub.add_parser("serve", parents=[common],
                           help="run with the WebSocket state/command endpoint")
    p_srv.add_argument("--port", type=int, help="WebSocket port")
    p_srv.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"startup failure: {exc}", file=sys.stderr)
        return 1
    except FaultError as exc:
        print(f"runtime fault: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
