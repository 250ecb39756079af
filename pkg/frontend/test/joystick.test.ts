import { describe, expect, it } from "vitest";

import { KeyboardStick, clampUnit, joystickToSides } from "../src/joystick.js";

describe("joystickToSides", () => {
  it("drives straight ahead at full forward", () => {
    expect(joystickToSides(0, 1, 1.5)).toEqual([1.5, 1.5]);
  });

  it("pivots with opposite sides at full lateral", () => {
    const [r, l] = joystickToSides(1, 0, 1.5);
    expect(r).toBe(1.5);
    expect(l).toBe(-1.5);
    expect(r).toBe(-l);
  });

  it("is exactly zero at center", () => {
    expect(joystickToSides(0, 0, 1.5)).toEqual([0, 0]);
  });

  it("is odd: negating both inputs negates both outputs", () => {
    for (let i = 0; i < 200; i++) {
      // deterministic lattice including the saturated corners
      const x = -1 + (i % 20) / 9.5;
      const y = -1 + Math.floor(i / 20) / 4.5;
      const [r, l] = joystickToSides(x, y, 1.5);
      const [nr, nl] = joystickToSides(-x, -y, 1.5);
      expect(nr).toBeCloseTo(-r, 12);
      expect(nl).toBeCloseTo(-l, 12);
    }
  });

  it("never exceeds the per-side limit even for out-of-range input", () => {
    for (const [x, y] of [[5, 5], [-3, 9], [2, -2], [1, 1], [-1, -1]]) {
      const [r, l] = joystickToSides(x, y, 1.5);
      expect(Math.abs(r)).toBeLessThanOrEqual(1.5);
      expect(Math.abs(l)).toBeLessThanOrEqual(1.5);
    }
  });

  it("scales with vMax", () => {
    expect(joystickToSides(0, 0.5, 2.0)).toEqual([1.0, 1.0]);
  });
});

describe("clampUnit", () => {
  it("passes interior values and clips the rest", () => {
    expect(clampUnit(0.3)).toBe(0.3);
    expect(clampUnit(-7)).toBe(-1);
    expect(clampUnit(7)).toBe(1);
    expect(clampUnit(1)).toBe(1);
  });
});

describe("KeyboardStick", () => {
  it("maps held arrows onto the stick and releases cleanly", () => {
    const ks = new KeyboardStick();
    expect(ks.active).toBe(false);
    expect(ks.keyDown("ArrowUp")).toBe(true);
    expect(ks.state()).toEqual({ x: 0, y: 1 });
    ks.keyDown("ArrowRight");
    expect(ks.state()).toEqual({ x: 1, y: 1 });
    ks.keyUp("ArrowUp");
    expect(ks.state()).toEqual({ x: 1, y: 0 });
    ks.keyUp("ArrowRight");
    expect(ks.active).toBe(false);
    expect(ks.state()).toEqual({ x: 0, y: 0 });
  });

  it("ignores unrelated keys", () => {
    const ks = new KeyboardStick();
    expect(ks.keyDown("KeyW")).toBe(false);
    expect(ks.active).toBe(false);
  });

  it("cancels opposing arrows", () => {
    const ks = new KeyboardStick();
    ks.keyDown("ArrowLeft");
    ks.keyDown("ArrowRight");
    expect(ks.state()).toEqual({ x: 0, y: 0 });
  });
});
