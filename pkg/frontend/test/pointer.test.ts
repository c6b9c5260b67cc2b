import { describe, expect, it } from "vitest";

import { METERS_PER_PIXEL, PointerMapper, quatAngle, quatFromAxisAngle,
         quatMultiply } from "../src/pointer.js";

describe("pointer to stylus mapping", () => {
  it("maps a 100 px x-drag in translate-xy to 20 mm", () => {
    const m = new PointerMapper();
    m.drag(100, 0);
    expect(m.position[0]).toBeCloseTo(0.02, 12);
    expect(m.position[1]).toBe(0);
    expect(m.position[2]).toBe(0);
  });

  it("maps screen-down drags to negative world axes", () => {
    const m = new PointerMapper();
    m.drag(0, 50);
    expect(m.position[1]).toBeCloseTo(-0.01, 12);
    m.mode = "translate-xz";
    m.drag(0, -50);
    expect(m.position[2]).toBeCloseTo(0.01, 12);
  });

  it("routes the wheel to the third axis of the active plane", () => {
    const m = new PointerMapper();
    m.scroll(100);
    expect(m.position[2]).toBeCloseTo(-0.02, 12);
    m.mode = "translate-xz";
    m.scroll(-100);
    expect(m.position[1]).toBeCloseTo(0.02, 12);
  });

  it("keeps translation untouched in rotate mode", () => {
    const m = new PointerMapper();
    m.mode = "rotate";
    m.drag(40, -25);
    m.scroll(30); // no modifier: ignored in rotate mode
    expect(m.position).toEqual([0, 0, 0]);
    expect(quatAngle(m.orientation)).toBeGreaterThan(0);
  });

  it("yaws only with the modifier held", () => {
    const m = new PointerMapper();
    m.mode = "rotate";
    m.scroll(100, true);
    expect(quatAngle(m.orientation)).toBeCloseTo(100 * 0.005, 9);
    expect(m.orientation[2]).not.toBe(0);
  });

  it("no pointer motion means a constant stylus pose", () => {
    const m = new PointerMapper();
    const a = m.command(true, 0.0);
    const b = m.command(true, 0.1);
    expect(b.stylus).toEqual(a.stylus);
  });

  it("honors a custom scale", () => {
    const m = new PointerMapper(2 * METERS_PER_PIXEL);
    m.drag(100, 0);
    expect(m.position[0]).toBeCloseTo(0.04, 12);
  });
});

describe("quaternion helpers", () => {
  it("composes rotations about one axis additively", () => {
    const a = quatFromAxisAngle([0, 0, 1], 0.3);
    const b = quatFromAxisAngle([0, 0, 1], 0.4);
    expect(quatAngle(quatMultiply(a, b))).toBeCloseTo(0.7, 9);
  });

  it("keeps unit norm", () => {
    const q = quatMultiply(quatFromAxisAngle([1, 0, 0], 1.1),
                           quatFromAxisAngle([0, 1, 0], -0.7));
    const n = Math.hypot(q[0], q[1], q[2], q[3]);
    expect(n).toBeCloseTo(1.0, 9);
  });
});
