// Canvas renderer for the arm, instrument shaft, trocar and scene props.
// Plain orthographic projection with a user-orbitable camera; all geometry
// arrives in the state stream (no kinematics happen client-side).

import type { StateMessage, Vec3 } from "./protocol.js";

export interface Camera {
  yaw: number; // rad, about world z
  pitch: number; // rad, tilt toward top-down
  zoom: number; // px per meter
  target: Vec3; // world point at the canvas center
}

export function defaultCamera(): Camera {
  return { yaw: -2.3, pitch: 0.42, zoom: 420, target: [0.45, 0.0, 0.3] };
}

/** Orthographic projection to canvas pixels (y down). */
export function project(p: Vec3, cam: Camera, width: number,
                        height: number): [number, number] {
  const cy = Math.cos(cam.yaw), sy = Math.sin(cam.yaw);
  const cp = Math.cos(cam.pitch), sp = Math.sin(cam.pitch);
  const dx = p[0] - cam.target[0];
  const dy = p[1] - cam.target[1];
  const dz = p[2] - cam.target[2];
  const rx = cy * dx + sy * dy;
  const ry = -sy * dx + cy * dy;
  const u = rx;
  const v = cp * dz - sp * ry;
  return [width / 2 + u * cam.zoom, height / 2 - v * cam.zoom];
}

function polyline(ctx: CanvasRenderingContext2D, pts: [number, number][]) {
  ctx.beginPath();
  ctx.moveTo(pts[0][0], pts[0][1]);
  for (let i = 1; i < pts.length; i++) ctx.lineTo(pts[i][0], pts[i][1]);
  ctx.stroke();
}

function marker(ctx: CanvasRenderingContext2D, [x, y]: [number, number],
                radius: number, fill: string) {
  ctx.beginPath();
  ctx.arc(x, y, radius, 0, 2 * Math.PI);
  ctx.fillStyle = fill;
  ctx.fill();
}

/** Pegboard prop: an 8-peg grid on the scene floor under the workspace. */
export function pegboardPegs(center: Vec3): Vec3[] {
  const pegs: Vec3[] = [];
  for (let i = 0; i < 4; i++) {
    for (let j = 0; j < 2; j++) {
      pegs.push([center[0] - 0.06 + i * 0.04, center[1] - 0.02 + j * 0.04,
                 center[2]]);
    }
  }
  return pegs;
}

export function drawScene(ctx: CanvasRenderingContext2D, state: StateMessage,
                          cam: Camera, width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);

  // floor grid at z = floor under the tip
  const floorZ = Math.min(state.pose.position[2], state.trocar[2]) - 0.05;
  ctx.strokeStyle = "#233";
  ctx.lineWidth = 1;
  for (let gx = -4; gx <= 8; gx++) {
    polyline(ctx, [
      project([gx * 0.1, -0.4, floorZ], cam, width, height),
      project([gx * 0.1, 0.4, floorZ], cam, width, height),
    ]);
  }
  for (let gy = -4; gy <= 4; gy++) {
    polyline(ctx, [
      project([-0.4, gy * 0.1, floorZ], cam, width, height),
      project([0.8, gy * 0.1, floorZ], cam, width, height),
    ]);
  }

  // pegboard prop near the tip workspace
  ctx.strokeStyle = "#875";
  ctx.lineWidth = 2;
  for (const peg of pegboardPegs([state.trocar[0], state.trocar[1], floorZ])) {
    polyline(ctx, [
      project(peg, cam, width, height),
      project([peg[0], peg[1], peg[2] + 0.03], cam, width, height),
    ]);
  }

  // arm links: base to flange, then instrument module and shaft
  const base: Vec3 = [0, 0, 0];
  const pts = [base, ...state.frames].map((p) =>
    project(p as Vec3, cam, width, height));
  ctx.strokeStyle = "#9ab";
  ctx.lineWidth = 5;
  polyline(ctx, pts.slice(0, 8));
  ctx.strokeStyle = "#cde";
  ctx.lineWidth = 2.5;
  polyline(ctx, pts.slice(7));

  // instrument shaft (flange -> wrist) drawn hot
  ctx.strokeStyle = "#6cf";
  ctx.lineWidth = 3;
  polyline(ctx, [pts[7], pts[11]]);

  for (let i = 1; i < pts.length - 1; i++) marker(ctx, pts[i], 3, "#78a");

  // trocar cross, RCM point, desired tip
  const trocar = project(state.trocar, cam, width, height);
  ctx.strokeStyle = "#f66";
  ctx.lineWidth = 2;
  polyline(ctx, [[trocar[0] - 7, trocar[1]], [trocar[0] + 7, trocar[1]]]);
  polyline(ctx, [[trocar[0], trocar[1] - 7], [trocar[0], trocar[1] + 7]]);
  marker(ctx, project(state.p_rcm, cam, width, height), 4, "#fd4");
  marker(ctx, project(state.p_des, cam, width, height), 3, "#4f8");
  marker(ctx, project(state.pose.position, cam, width, height), 4, "#fff");
}
