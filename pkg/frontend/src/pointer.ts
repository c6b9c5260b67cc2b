// Pointer-to-stylus emulation: a mouse has 2+1 axes, so translation and
// rotation are partitioned into modes. Scale: 1 px = 0.2 mm by default.

import type { CommandMessage, Quat, Vec3 } from "./protocol.js";

export type PointerMode = "translate-xy" | "translate-xz" | "rotate";

export const METERS_PER_PIXEL = 0.0002;
export const RADIANS_PER_PIXEL = 0.005;
export const MAX_COMMAND_RATE_HZ = 500;

export function quatMultiply(a: Quat, b: Quat): Quat {
  const [ax, ay, az, aw] = a;
  const [bx, by, bz, bw] = b;
  return [
    aw * bx + ax * bw + ay * bz - az * by,
    aw * by - ax * bz + ay * bw + az * bx,
    aw * bz + ax * by - ay * bx + az * bw,
    aw * bw - ax * bx - ay * by - az * bz,
  ];
}

export function quatFromAxisAngle(axis: Vec3, angle: number): Quat {
  const n = Math.hypot(axis[0], axis[1], axis[2]);
  const s = Math.sin(angle / 2) / (n || 1);
  return [axis[0] * s, axis[1] * s, axis[2] * s, Math.cos(angle / 2)];
}

export function quatAngle(q: Quat): number {
  const v = Math.hypot(q[0], q[1], q[2]);
  return 2 * Math.atan2(v, Math.abs(q[3]));
}

/**
 * Accumulates pointer motion into an emulated stylus pose. The pose is in
 * the haptic frame; the simulator's clutch mapping handles anchoring, so
 * the mapper itself never needs re-zeroing between engagements.
 */
export class PointerMapper {
  mode: PointerMode = "translate-xy";
  position: Vec3 = [0, 0, 0];
  orientation: Quat = [0, 0, 0, 1];
  gripper = 0;

  constructor(
    readonly metersPerPixel: number = METERS_PER_PIXEL,
    readonly radiansPerPixel: number = RADIANS_PER_PIXEL,
  ) {}

  reset(): void {
    this.position = [0, 0, 0];
    this.orientation = [0, 0, 0, 1];
  }

  /** Planar pointer deltas in px; screen-down dy maps to a negative axis. */
  drag(dxPx: number, dyPx: number): void {
    const d = this.metersPerPixel;
    if (this.mode === "translate-xy") {
      this.position = [
        this.position[0] + dxPx * d,
        this.position[1] - dyPx * d,
        this.position[2],
      ];
    } else if (this.mode === "translate-xz") {
      this.position = [
        this.position[0] + dxPx * d,
        this.position[1],
        this.position[2] - dyPx * d,
      ];
    } else {
      const roll = quatFromAxisAngle([1, 0, 0], dxPx * this.radiansPerPixel);
      const pitch = quatFromAxisAngle([0, 1, 0], dyPx * this.radiansPerPixel);
      this.orientation = quatMultiply(quatMultiply(this.orientation, roll), pitch);
    }
  }

  /** Wheel motion: third translation axis, or yaw with the modifier held. */
  scroll(deltaPx: number, modifier = false): void {
    if (this.mode === "rotate") {
      if (modifier) {
        const yaw = quatFromAxisAngle([0, 0, 1], deltaPx * this.radiansPerPixel);
        this.orientation = quatMultiply(this.orientation, yaw);
      }
      return;
    }
    const d = this.metersPerPixel;
    if (this.mode === "translate-xy") {
      this.position = [this.position[0], this.position[1],
                       this.position[2] - deltaPx * d];
    } else {
      this.position = [this.position[0], this.position[1] - deltaPx * d,
                       this.position[2]];
    }
  }

  command(clutch: boolean, timestamp: number): CommandMessage {
    return {
      stylus: {
        position: [...this.position] as Vec3,
        orientation: [...this.orientation] as Quat,
      },
      clutch,
      gripper: this.gripper,
      timestamp,
    };
  }
}
