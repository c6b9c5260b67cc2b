// Console wiring: socket, scene, charts, pointer emulation, clutch.
// Hold the left mouse button on the scene to clutch; drag to drive the
// selected DoF pair; wheel = third axis; keys 1/2/3 switch modes; G
// toggles the gripper; the slider sets it directly.

import { drawOverlay, drawSeries } from "./charts.js";
import { MAX_COMMAND_RATE_HZ, PointerMapper, type PointerMode } from "./pointer.js";
import { norm3, type StateMessage } from "./protocol.js";
import { PathBuffer, SeriesBuffer } from "./ringbuffer.js";
import { defaultCamera, drawScene } from "./scene.js";
import { ConsoleSocket } from "./socket.js";

const params = new URLSearchParams(window.location.search);
const endpoint = params.get("ws") ?? "ws://localhost:8765";

const sceneCanvas = document.getElementById("scene") as HTMLCanvasElement;
const overlayCanvas = document.getElementById("overlay") as HTMLCanvasElement;
const chartIds = ["chart-dev", "chart-force", "chart-ep"] as const;
const chartCanvases = chartIds.map(
  (id) => document.getElementById(id) as HTMLCanvasElement);
const banner = document.getElementById("banner") as HTMLDivElement;
const statusLine = document.getElementById("status") as HTMLDivElement;
const modeLabel = document.getElementById("mode") as HTMLSpanElement;
const gripperSlider = document.getElementById("gripper") as HTMLInputElement;

const WINDOW_S = 30;
const devSeries = new SeriesBuffer(WINDOW_S);
const forceSeries = new SeriesBuffer(WINDOW_S);
const epSeries = new SeriesBuffer(WINDOW_S);
const paths = new PathBuffer(WINDOW_S);

const mapper = new PointerMapper();
const camera = defaultCamera();
let latest: StateMessage | null = null;
let clutchHeld = false;

const socket = new ConsoleSocket(endpoint, {
  onState: (state) => {
    latest = state;
    devSeries.push(state.t, state.lateral_deviation);
    forceSeries.push(state.t, norm3(state.f_hat));
    epSeries.push(state.t, state.e_p_norm);
    paths.push(state.t, state.p_des, state.pose.position);
    statusLine.textContent =
      `t=${state.t.toFixed(2)}s  lambda=${state.lambda.toFixed(3)}  ` +
      `deviation=${(state.lateral_deviation * 1e3).toFixed(2)}mm  ` +
      `clutch=${state.clutch ? "ENGAGED" : "idle"}  ` +
      `dropped=${state.malformed_commands ?? 0}`;
  },
  onOpen: () => banner.classList.add("hidden"),
  onClose: () => banner.classList.remove("hidden"),
});
socket.connect();

// --- pointer / clutch ----------------------------------------------------

function setMode(mode: PointerMode): void {
  mapper.mode = mode;
  modeLabel.textContent = mode;
}

sceneCanvas.addEventListener("pointerdown", (ev) => {
  if (ev.button === 0) {
    clutchHeld = true;
    sceneCanvas.setPointerCapture(ev.pointerId);
  }
});
sceneCanvas.addEventListener("pointerup", (ev) => {
  if (ev.button === 0) {
    clutchHeld = false;
    // one explicit release so the follower freezes immediately
    socket.send(JSON.stringify(mapper.command(false, performance.now() / 1e3)));
  }
});
sceneCanvas.addEventListener("pointermove", (ev) => {
  if (clutchHeld) {
    mapper.drag(ev.movementX, ev.movementY);
  } else if (ev.buttons === 2) {
    camera.yaw += ev.movementX * 0.008;
    camera.pitch += ev.movementY * 0.008;
  }
});
sceneCanvas.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  if (clutchHeld) mapper.scroll(ev.deltaY, ev.shiftKey);
  else camera.zoom *= Math.exp(-ev.deltaY * 0.001);
}, { passive: false });
sceneCanvas.addEventListener("contextmenu", (ev) => ev.preventDefault());

window.addEventListener("keydown", (ev) => {
  if (ev.key === "1") setMode("translate-xy");
  if (ev.key === "2") setMode("translate-xz");
  if (ev.key === "3") setMode("rotate");
  if (ev.key.toLowerCase() === "g") {
    mapper.gripper = mapper.gripper > 0.5 ? 0 : 1;
    gripperSlider.value = String(mapper.gripper);
  }
});
gripperSlider.addEventListener("input", () => {
  mapper.gripper = Number(gripperSlider.value);
});

// commands leave only while the clutch input is held, capped at 500 Hz
const emitPeriodMs = Math.max(1000 / MAX_COMMAND_RATE_HZ, 8);
setInterval(() => {
  if (clutchHeld) {
    socket.send(JSON.stringify(mapper.command(true, performance.now() / 1e3)));
  }
}, emitPeriodMs);

// --- render loop ----------------------------------------------------------

const chartStyles = [
  { buf: devSeries, label: "lateral deviation", color: "#f66",
    unitScale: 1e3, unit: "mm" },
  { buf: forceSeries, label: "|f_hat|", color: "#fd4", unitScale: 1,
    unit: "N" },
  { buf: epSeries, label: "|e_p|", color: "#6cf", unitScale: 1e3,
    unit: "mm" },
];

function frame(): void {
  if (latest) {
    const ctx = sceneCanvas.getContext("2d")!;
    drawScene(ctx, latest, camera, sceneCanvas.width, sceneCanvas.height);
  }
  chartStyles.forEach((style, i) => {
    const canvas = chartCanvases[i];
    drawSeries(canvas.getContext("2d")!, style.buf, style,
               canvas.width, canvas.height);
  });
  drawOverlay(overlayCanvas.getContext("2d")!, paths,
              overlayCanvas.width, overlayCanvas.height);
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
