"""WebSocket service streaming simulator state and accepting stylus commands.

One control thread owns the simulation and paces it against the wall
clock; the network side runs in an asyncio loop. The two sides exchange
immutable snapshots: commands are latest-wins, outbound state is a
drop-oldest buffer so a slow client can never stall the control loop.

Outbound JSON (at server.state_rate_hz):
  {t, q[11], lambda, pose {position[3], orientation[4] xyzw}, p_rcm, trocar,
   f_hat, lateral_deviation, clutch, frames[11][3], e_p_norm, p_des}
Inbound JSON (accepted up to the 500 Hz leader-device rate):
  {stylus {position[3], orientation[4] xyzw}, clutch, gripper, timestamp}
Malformed frames are dropped and counted; the connection stays open.
"""

from __future__ import annotations

import asyncio
import json
import logging
import threading
import time
from collections import deque
from typing import Optional

import numpy as np
from websockets.asyncio.server import broadcast, serve as ws_serve

from .geometry import Pose
from .harness import ControlLoop, ExperimentConfig
from .teleop import TeleopCommand

log = logging.getLogger(__name__)


def parse_command(text: str) -> TeleopCommand:
    """Decode one inbound command frame; raises ValueError when malformed."""
    doc = json.loads(text)
    stylus = doc["stylus"]
    position = np.asarray(stylus["position"], dtype=float).reshape(3)
    quat = np.asarray(stylus["orientation"], dtype=float).reshape(4)
    if not (np.all(np.isfinite(position)) and np.all(np.isfinite(quat))):
        raise ValueError("non-finite stylus pose")
    if abs(np.linalg.norm(quat)) < 1e-9:
        raise ValueError("zero quaternion")
    pose = Pose.from_quat(position, quat)
    return TeleopCommand(
        stylus=pose,
        clutch=bool(doc["clutch"]),
        gripper=float(doc.get("gripper", 0.0)),
        timestamp=float(doc.get("timestamp", 0.0)),
    )


class CommandSlot:
    """Latest-wins mailbox for inbound commands."""

    def __init__(self):
        self._lock = threading.Lock()
        self._latest: Optional[TeleopCommand] = None
        self.malformed = 0

    def put(self, command: TeleopCommand):
        with self._lock:
            self._latest = command

    def get(self, _t: float) -> Optional[TeleopCommand]:
        with self._lock:
            return self._latest


class StateBus:
    """Drop-oldest snapshot buffer (control thread -> network thread)."""

    def __init__(self, depth: int = 32):
        self._buf = deque(maxlen=depth)
        self._lock = threading.Lock()

    def push(self, snapshot: dict):
        with self._lock:
            self._buf.append(snapshot)

    def pop_all(self) -> list:
        with self._lock:
            out = list(self._buf)
            self._buf.clear()
        return out

    def latest(self) -> Optional[dict]:
        with self._lock:
            return self._buf[-1] if self._buf else None


class TeleopServer:
    """Runs the control loop and the streaming endpoint for one session."""

    def __init__(self, config: ExperimentConfig):
        if not config.server.enabled:
            raise ValueError("server.enabled must be set for serve()")
        self.config = config
        self.commands = CommandSlot()
        self.bus = StateBus()
        self.stop_flag = threading.Event()
        self.ready = threading.Event()
        self._publish_every = max(
            1, round(config.control_rate_hz / config.server.state_rate_hz))
        self._tick_count = 0
        self.loop = ControlLoop(config, command_source=self.commands.get,
                                state_callback=self._on_state, keep_log=False)
        self.connections = set()

    def _on_state(self, snapshot: dict):
        if self._tick_count % self._publish_every == 0:
            self.bus.push(snapshot)
        self._tick_count += 1

    def _control_thread(self):
        dt = self.config.dt
        realtime = self.config.server.realtime
        start = time.perf_counter()
        try:
            for k in range(self.loop.n_ticks):
                if self.stop_flag.is_set():
                    break
                self.loop.tick()
                if realtime:
                    lag = start + (k + 1) * dt - time.perf_counter()
                    if lag > 0:
                        time.sleep(lag)
        finally:
            self.stop_flag.set()

    async def _handler(self, connection):
        self.connections.add(connection)
        try:
            async for message in connection:
                try:
                    self.commands.put(parse_command(message))
                except (ValueError, KeyError, TypeError) as exc:
                    self.commands.malformed += 1
                    log.warning("dropped malformed command #%d: %s",
                                self.commands.malformed, exc)
        finally:
            self.connections.discard(connection)

    async def _broadcaster(self):
        period = 1.0 / self.config.server.state_rate_hz
        while not self.stop_flag.is_set():
            for snapshot in self.bus.pop_all():
                message = dict(snapshot)
                message["malformed_commands"] = self.commands.malformed
                broadcast(self.connections, json.dumps(message))
            await asyncio.sleep(period)

    async def _amain(self):
        control = threading.Thread(target=self._control_thread,
                                   name="control", daemon=True)
        async with ws_serve(self._handler, "0.0.0.0", self.config.server.port):
            log.info("listening on ws://0.0.0.0:%d", self.config.server.port)
            self.ready.set()
            control.start()
            try:
                await self._broadcaster()
            finally:
                self.stop_flag.set()
                control.join(timeout=2.0)

    def run(self):
        asyncio.run(self._amain())


def serve(config: ExperimentConfig):
    """Run the simulator with the streaming endpoint until the run ends.

    The simulation proceeds with or without clients; with none connected the
    desired pose is simply held. A busy port raises OSError at startup.
    """
    TeleopServer(config).run()
