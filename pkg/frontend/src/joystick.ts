// Stick-to-wheel mixing and the keyboard fallback. Pure functions so the
// mapping properties (oddness, clamping, the pivot case) are unit-testable
// without a DOM.

export function clampUnit(v: number): number {
  return v < -1 ? -1 : v > 1 ? 1 : v;
}

// Differential mix: forward stick drives both sides, lateral stick trades
// them against each other; full lateral with no forward commands a pivot
// (v_r = -v_l). Saturation keeps each side inside [-vMax, vMax].
export function joystickToSides(
  x: number,
  y: number,
  vMax: number,
): [number, number] {
  return [vMax * clampUnit(y + x), vMax * clampUnit(y - x)];
}

const KEY_AXES: Record<string, [number, number]> = {
  ArrowUp: [0, 1],
  ArrowDown: [0, -1],
  ArrowRight: [1, 0],
  ArrowLeft: [-1, 0],
};

// Arrow keys act as a coarse stick: held keys sum their axes, so
// Up+Right arcs right and Left alone pivots left.
export class KeyboardStick {
  private held = new Set<string>();

  keyDown(code: string): boolean {
    if (!(code in KEY_AXES)) return false;
    this.held.add(code);
    return true;
  }

  keyUp(code: string): boolean {
    if (!(code in KEY_AXES)) return false;
    this.held.delete(code);
    return true;
  }

  get active(): boolean {
    return this.held.size > 0;
  }

  state(): { x: number; y: number } {
    let x = 0;
    let y = 0;
    for (const code of this.held) {
      const axis = KEY_AXES[code];
      x += axis[0];
      y += axis[1];
    }
    return { x: clampUnit(x), y: clampUnit(y) };
  }
}
