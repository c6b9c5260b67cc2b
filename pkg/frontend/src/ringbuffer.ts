// Rolling buffers backing the live charts and the path overlay.

import type { Vec3 } from "./protocol.js";

export class SeriesBuffer {
  private t: number[] = [];
  private v: number[] = [];

  constructor(readonly windowSeconds: number) {}

  push(t: number, value: number): void {
    this.t.push(t);
    this.v.push(value);
    const cutoff = t - this.windowSeconds;
    let drop = 0;
    while (drop < this.t.length && this.t[drop] < cutoff) drop++;
    if (drop > 0) {
      this.t.splice(0, drop);
      this.v.splice(0, drop);
    }
  }

  data(): { t: number[]; v: number[] } {
    return { t: this.t, v: this.v };
  }

  latest(): number | undefined {
    return this.v[this.v.length - 1];
  }

  get length(): number {
    return this.t.length;
  }

  clear(): void {
    this.t = [];
    this.v = [];
  }
}

/** Paired commanded/actual tip positions over the rolling window. */
export class PathBuffer {
  private t: number[] = [];
  commanded: Vec3[] = [];
  actual: Vec3[] = [];

  constructor(readonly windowSeconds: number) {}

  push(t: number, commanded: Vec3, actual: Vec3): void {
    this.t.push(t);
    this.commanded.push(commanded);
    this.actual.push(actual);
    const cutoff = t - this.windowSeconds;
    let drop = 0;
    while (drop < this.t.length && this.t[drop] < cutoff) drop++;
    if (drop > 0) {
      this.t.splice(0, drop);
      this.commanded.splice(0, drop);
      this.actual.splice(0, drop);
    }
  }

  get length(): number {
    return this.t.length;
  }

  clear(): void {
    this.t = [];
    this.commanded = [];
    this.actual = [];
  }
}
