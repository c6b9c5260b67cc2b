// Wire schemas shared with the simulator's WebSocket endpoint.

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number]; // x, y, z, w

export interface StateMessage {
  t: number;
  q: number[];
  lambda: number;
  pose: { position: Vec3; orientation: Quat };
  p_rcm: Vec3;
  trocar: Vec3;
  f_hat: Vec3;
  lateral_deviation: number;
  clutch: boolean;
  frames: Vec3[];
  e_p_norm: number;
  p_des: Vec3;
  malformed_commands?: number;
}

export interface CommandMessage {
  stylus: { position: Vec3; orientation: Quat };
  clutch: boolean;
  gripper: number;
  timestamp: number;
}

function isVec3(v: unknown): v is Vec3 {
  return Array.isArray(v) && v.length === 3 && v.every(Number.isFinite);
}

function isQuat(v: unknown): v is Quat {
  return Array.isArray(v) && v.length === 4 && v.every(Number.isFinite);
}

/** Decode one state frame; null when the payload is not a state message. */
export function parseState(text: string): StateMessage | null {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch {
    return null;
  }
  const m = doc as Record<string, unknown>;
  if (m === null || typeof m !== "object") return null;
  if (!Number.isFinite(m.t) || !Number.isFinite(m.lambda)) return null;
  if (!Array.isArray(m.q) || m.q.length !== 11) return null;
  const pose = m.pose as { position?: unknown; orientation?: unknown };
  if (!pose || !isVec3(pose.position) || !isQuat(pose.orientation)) return null;
  if (!isVec3(m.p_rcm) || !isVec3(m.trocar) || !isVec3(m.f_hat)) return null;
  if (!Array.isArray(m.frames) || !m.frames.every(isVec3)) return null;
  if (!isVec3(m.p_des)) return null;
  if (typeof m.clutch !== "boolean") return null;
  if (!Number.isFinite(m.lateral_deviation) || !Number.isFinite(m.e_p_norm)) {
    return null;
  }
  return m as unknown as StateMessage;
}

export function encodeCommand(cmd: CommandMessage): string {
  return JSON.stringify(cmd);
}

export function norm3(v: Vec3): number {
  return Math.hypot(v[0], v[1], v[2]);
}
